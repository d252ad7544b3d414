mod common;

use std::collections::{BTreeSet, HashMap};

use common::*;
use gradlab::coeff::CoeffRing;
use gradlab::expr::{parse_element, parse_expr, parse_group_element};
use gradlab::group::{ball, Backend, GroupElement, Subgroup};
use gradlab::ring::{RingElement, RingModel};
use gradlab::search::{partner_for, search, SearchKind, SearchOptions};
use gradlab::structure::{coarsen, delta_probe, is_central, Membership, QuotientGrading};
use gradlab::up::unique_products;
use proptest::prelude::*;

fn backend_and_elements(n: usize, max_len: usize) -> impl Strategy<Value = (Backend, Vec<GroupElement>)> {
    any_backend().prop_flat_map(move |b| (Just(b), prop::collection::vec(element_in(b, max_len), n)))
}

proptest! {
    #[test]
    fn group_axioms((b, g) in backend_and_elements(3, 6)) {
        let e = b.identity();
        let (x, y, z) = (&g[0], &g[1], &g[2]);
        prop_assert_eq!(x.compose(&y.compose(z).unwrap()).unwrap(), x.compose(y).unwrap().compose(z).unwrap());
        prop_assert_eq!(&x.compose(&e).unwrap(), x);
        prop_assert_eq!(&e.compose(x).unwrap(), x);
        prop_assert!(x.compose(&x.inverse()).unwrap().is_identity());
        prop_assert!(x.inverse().compose(x).unwrap().is_identity());
        prop_assert_eq!(x.compose(y).unwrap().inverse(), y.inverse().compose(&x.inverse()).unwrap());
    }

    #[test]
    fn group_words_print_and_parse((b, g) in backend_and_elements(1, 8)) {
        let text = g[0].to_string();
        prop_assert_eq!(&parse_group_element(&text, b).unwrap(), &g[0]);
    }
}

fn ring_triple() -> impl Strategy<Value = (RingElement, RingElement, RingElement)> {
    prop::sample::select(models()).prop_flat_map(|m| (element_of(m.clone(), 4), element_of(m.clone(), 4), element_of(m, 4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((x, y, z) in ring_triple()) {
        let one = RingElement::one(x.model());
        prop_assert_eq!(x.mul(&y.mul(&z).unwrap()).unwrap(), x.mul(&y).unwrap().mul(&z).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(y.add(&z).unwrap().mul(&x).unwrap(), y.mul(&x).unwrap().add(&z.mul(&x).unwrap()).unwrap());
        prop_assert_eq!(&x.mul(&one).unwrap(), &x);
        prop_assert_eq!(&one.mul(&x).unwrap(), &x);
        prop_assert!(x.sub(&x).unwrap().is_zero());
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
    }
}

fn one_per_model() -> Vec<BoxedStrategy<RingElement>> {
    models().into_iter().map(|m| element_of(m, 6)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn elements_print_and_parse(xs in one_per_model()) {
        for x in xs {
            let text = x.to_string();
            let back = parse_element(&text, x.model()).unwrap();
            prop_assert_eq!(&back, &x, "{}", text);
            let e = parse_expr(&text).unwrap();
            prop_assert_eq!(parse_expr(&e.to_string()).unwrap().to_string(), e.to_string());
        }
    }
}

/// `H` is a cyclic subgroup `<h>` or, over `Z^n`, a lattice.
fn subgroup_case() -> impl Strategy<Value = (Subgroup, Vec<GroupElement>)> {
    let cyclic = prop::sample::select(INFINITE_BACKENDS.to_vec())
        .prop_flat_map(|b| element_in(b, 3))
        .prop_map(|h| {
            let powers: Vec<GroupElement> = (-3..=3).map(|k| h.pow(k)).collect();
            (Subgroup::cyclic(h), powers)
        });
    let lattice = (prop::collection::vec(-2i64..3, 2), prop::collection::vec(-2i64..3, 2)).prop_map(|(u, v)| {
        let b = Backend::Abelian { rank: 2 };
        let mut members = Vec::new();
        for i in -2..=2 {
            for j in -2..=2 {
                members.push(b.vector(&[i * u[0] + j * v[0], i * u[1] + j * v[1]]).unwrap());
            }
        }
        (Subgroup::lattice(b, &[u, v]).unwrap(), members)
    });
    prop_oneof![cyclic, lattice]
}

proptest! {
    #[test]
    fn projection_is_a_bimodule_map(
        (h, members) in subgroup_case(),
        seed_a in prop::collection::vec((0usize..64, 0usize..64, 1u32..3), 0..6),
        seed_b in prop::collection::vec((0usize..64, 1u32..3), 0..5),
    ) {
        let backend = h.backend();
        let m = RingModel::group_ring(backend, CoeffRing::Prime(3));
        let k = m.coeffs();
        let gens = backend.symmetric_generators();
        // a is arbitrary; b is supported in H
        let a = RingElement::from_group_terms(&m, seed_a.iter().map(|&(i, j, c)| {
            (members[i % members.len()].compose(&gens[j % gens.len()]).unwrap(), k.from_i64(c as i64))
        })).unwrap();
        let b = RingElement::from_group_terms(&m, seed_b.iter().map(|&(i, c)| (members[i % members.len()].clone(), k.from_i64(c as i64)))).unwrap();
        prop_assert_eq!(b.project(&h).unwrap(), b.clone());
        let pa = a.project(&h).unwrap();
        prop_assert_eq!(a.mul(&b).unwrap().project(&h).unwrap(), pa.mul(&b).unwrap());
        prop_assert_eq!(b.mul(&a).unwrap().project(&h).unwrap(), b.mul(&pa).unwrap());
        prop_assert_eq!(pa.project(&h).unwrap(), pa);
    }
}

/// Independent unique-product counter: hash every product, keep count 1.
fn oracle_unique(a: &[GroupElement], b: &[GroupElement]) -> BTreeSet<(GroupElement, GroupElement, GroupElement)> {
    let a: BTreeSet<_> = a.iter().cloned().collect();
    let b: BTreeSet<_> = b.iter().cloned().collect();
    let mut count: HashMap<GroupElement, Vec<(GroupElement, GroupElement)>> = HashMap::new();
    for x in &a {
        for y in &b {
            count.entry(x.compose(y).unwrap()).or_default().push((x.clone(), y.clone()));
        }
    }
    count.into_iter().filter(|(_, v)| v.len() == 1).map(|(g, v)| (g, v[0].0.clone(), v[0].1.clone())).collect()
}

fn up_case() -> impl Strategy<Value = (Backend, Vec<GroupElement>, Vec<GroupElement>, GroupElement, GroupElement)> {
    any_backend().prop_flat_map(|b| {
        (
            Just(b),
            prop::collection::vec(element_in(b, 3), 1..=6),
            prop::collection::vec(element_in(b, 3), 1..=6),
            element_in(b, 4),
            element_in(b, 4),
        )
    })
}

proptest! {
    #[test]
    fn unique_products_match_oracle((backend, a, b, t, s) in up_case()) {
        let r = unique_products(&a, &b).unwrap();
        let got: BTreeSet<_> = r.unique.iter().map(|u| (u.product.clone(), u.left.clone(), u.right.clone())).collect();
        prop_assert_eq!(&got, &oracle_unique(&a, &b));
        prop_assert!(r.unique.len() <= r.total_products);
        if backend.is_unique_product() && r.a.len() + r.b.len() > 2 {
            prop_assert!(r.two_up);
        }
        // translating A on the left and B on the right moves unique products along
        let ta: Vec<_> = a.iter().map(|x| t.compose(x).unwrap()).collect();
        let bs: Vec<_> = b.iter().map(|y| y.compose(&s).unwrap()).collect();
        let shifted: BTreeSet<_> = unique_products(&ta, &bs).unwrap().unique.into_iter().map(|u| u.product).collect();
        let expected: BTreeSet<_> = got.iter().map(|(g, _, _)| t.compose(g).unwrap().compose(&s).unwrap()).collect();
        prop_assert_eq!(shifted, expected);
        if backend.is_abelian() {
            let swapped: BTreeSet<_> = unique_products(&b, &a).unwrap().unique.into_iter().map(|u| u.product).collect();
            prop_assert_eq!(swapped, got.iter().map(|(g, _, _)| g.clone()).collect::<BTreeSet<_>>());
        }
    }
}

fn coarsen_case() -> impl Strategy<Value = (QuotientGrading, RingElement)> {
    let quotients = vec![
        (Backend::Abelian { rank: 1 }, Subgroup::lattice(Backend::Abelian { rank: 1 }, &[vec![2]]).unwrap()),
        (Backend::Abelian { rank: 2 }, Subgroup::lattice(Backend::Abelian { rank: 2 }, &[vec![2, 0], vec![0, 3]]).unwrap()),
        (Backend::Abelian { rank: 2 }, Subgroup::lattice(Backend::Abelian { rank: 2 }, &[vec![1, 1]]).unwrap()),
        (Backend::Klein, Subgroup::klein_fiber()),
        (Backend::Heisenberg, Subgroup::center(Backend::Heisenberg)),
        (Backend::Promislow, Subgroup::promislow_translations()),
        (Backend::Free { rank: 2 }, Subgroup::trivial(Backend::Free { rank: 2 })),
    ];
    prop::sample::select(quotients).prop_flat_map(|(b, n)| {
        let m = RingModel::group_ring(b, CoeffRing::Prime(5));
        (Just(QuotientGrading::new(n).unwrap()), group_element_of(m, 8, 4))
    })
}

proptest! {
    #[test]
    fn coarsening_partitions_the_support((q, x) in coarsen_case()) {
        let parts = coarsen(&x, &q).unwrap();
        let mut sum = RingElement::zero(x.model());
        let mut cosets = BTreeSet::new();
        for p in &parts {
            prop_assert!(!p.part.is_zero());
            prop_assert!(cosets.insert(p.coset.clone()), "coset repeated");
            for g in p.part.group_support() {
                prop_assert_eq!(q.coset_of(&g).unwrap(), p.coset.clone());
            }
            sum = sum.add(&p.part).unwrap();
        }
        prop_assert_eq!(&sum, &x);
        let identity_part = parts.iter().find(|p| p.coset.is_identity()).map(|p| p.part.clone()).unwrap_or_else(|| RingElement::zero(x.model()));
        prop_assert_eq!(x.project(q.subgroup()).unwrap(), identity_part);
    }
}

/// Sums over finite conjugacy classes of the Klein bottle group: `a^m b^2k`
/// is conjugate only to `a^-m b^2k`.
fn klein_central() -> impl Strategy<Value = RingElement> {
    prop::collection::vec((0i64..4, -2i64..3), 1..4).prop_map(|classes| {
        let m = RingModel::group_ring(Backend::Klein, CoeffRing::Prime(2));
        let a = Backend::Klein.symbol('a').unwrap();
        let b = Backend::Klein.symbol('b').unwrap();
        let mut x = RingElement::zero(&m);
        for (i, k) in classes {
            let bk = b.pow(2 * k);
            let mut class = BTreeSet::new();
            class.insert(a.pow(i).compose(&bk).unwrap());
            class.insert(a.pow(-i).compose(&bk).unwrap());
            for g in class {
                x = x.add(&RingElement::basis_element(&m, g)).unwrap();
            }
        }
        x
    })
}

proptest! {
    #[test]
    fn central_elements_live_on_finite_classes(x in klein_central(), y in group_element_of(RingModel::group_ring(Backend::Klein, CoeffRing::Prime(2)), 4, 3)) {
        prop_assert!(is_central(&x));
        for g in x.group_support() {
            prop_assert_eq!(delta_probe(&g, 2).verdict, Membership::Member);
        }
        // and for any element: central implies no support element is outside the FC-center
        if is_central(&y) {
            for g in y.group_support() {
                prop_assert_ne!(delta_probe(&g, 2).verdict, Membership::NonMember);
            }
        }
    }

    #[test]
    fn heisenberg_centrality_matches_support(x in group_element_of(RingModel::group_ring(Backend::Heisenberg, CoeffRing::Prime(3)), 4, 3)) {
        let central_support = x.group_support().iter().all(|g| delta_probe(g, 1).verdict == Membership::Member);
        prop_assert_eq!(is_central(&x), central_support);
    }
}

/// Restricting the partner window to a subgroup `H` containing `Supp(x)`
/// does not change unit or zero-divisor verdicts, provided the ambient
/// window is a union of translates `P_H s`.
fn transfer_case() -> impl Strategy<Value = (RingElement, Vec<GroupElement>, Vec<GroupElement>)> {
    let cases = vec![
        (Backend::Cyclic { order: 6 }, "t^2", "t"),
        (Backend::Cyclic { order: 4 }, "t^2", "t"),
        (Backend::Abelian { rank: 2 }, "u*v", "u"),
        (Backend::Heisenberg, "x", "y"),
        (Backend::Klein, "b", "a"),
        (Backend::Free { rank: 2 }, "a*b", "b"),
        (Backend::Promislow, "a", "b"),
    ];
    prop::sample::select(cases).prop_flat_map(|(b, h, s)| {
        let h = parse_group_element(h, b).unwrap();
        let s = parse_group_element(s, b).unwrap();
        let powers: Vec<GroupElement> = (-2..=2).map(|k| h.pow(k)).collect::<BTreeSet<_>>().into_iter().collect();
        let m = RingModel::group_ring(b, CoeffRing::Prime(2));
        let p = powers.clone();
        prop::collection::vec(0usize..5, 1..4).prop_map(move |idx| {
            let x = RingElement::from_group_terms(&m, idx.iter().map(|&i| (p[i % p.len()].clone(), m.coeffs().one()))).unwrap();
            let ambient: Vec<GroupElement> = p.iter().cloned().chain(p.iter().map(|g| g.compose(&s).unwrap())).collect();
            (x, p.clone(), ambient)
        })
    })
}

proptest! {
    #[test]
    fn subgroup_restriction_keeps_verdicts((x, restricted, ambient) in transfer_case()) {
        prop_assume!(!x.is_zero());
        for kind in [SearchKind::Unit, SearchKind::ZeroDivisor] {
            let r = partner_for(&x, &restricted, kind).unwrap();
            let a = partner_for(&x, &ambient, kind).unwrap();
            prop_assert_eq!(r.is_some(), a.is_some(), "{} {}", kind, x);
            if let Some(y) = a {
                match kind {
                    SearchKind::Unit => prop_assert!(x.mul(&y).unwrap().is_one() && y.mul(&x).unwrap().is_one()),
                    _ => prop_assert!(x.mul(&y).unwrap().is_zero() && !y.is_zero()),
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn witnesses_persist_in_larger_windows(extra in prop::collection::vec(0usize..9, 0..3), kind in prop::sample::select(vec![SearchKind::ZeroDivisor, SearchKind::Idempotent, SearchKind::Nilpotent, SearchKind::Unit])) {
        let m = RingModel::group_ring(Backend::Cyclic { order: 9 }, CoeffRing::Prime(2));
        let all = ball(Backend::Cyclic { order: 9 }, 4);
        let small: Vec<GroupElement> = all[..4].to_vec();
        let mut large = small.clone();
        for i in extra {
            if !large.contains(&all[i]) {
                large.push(all[i].clone());
            }
        }
        let opts = SearchOptions::new(kind);
        let a = search(&m, &small, Some(&all), &opts).unwrap();
        let b = search(&m, &large, Some(&all), &opts).unwrap();
        let found: BTreeSet<String> = b.witnesses.iter().map(|w| w.x.to_string()).collect();
        for w in &a.witnesses {
            prop_assert!(found.contains(&w.x.to_string()), "{} lost", w.x);
        }
    }
}

#[test]
fn idempotent_commutator_identities_in_c3() {
    let m = RingModel::group_ring(Backend::Cyclic { order: 3 }, CoeffRing::Prime(2));
    let w = ball(Backend::Cyclic { order: 3 }, 1);
    let r = search(&m, &w, None, &SearchOptions::new(SearchKind::Idempotent)).unwrap();
    assert_eq!(r.witness_count, 2);
    let all: Vec<RingElement> = (0u32..8)
        .map(|mask| {
            RingElement::from_group_terms(&m, (0..3).filter(|i| mask >> i & 1 == 1).map(|i| (w[i].clone(), m.coeffs().one())))
                .unwrap()
        })
        .collect();
    for u in r.witnesses.iter().map(|w| &w.x) {
        for s in &all {
            let usu = u.mul(s).unwrap().mul(u).unwrap();
            let left = u.mul(s).unwrap().sub(&usu).unwrap();
            let right = s.mul(u).unwrap().sub(&usu).unwrap();
            assert!(left.mul(&left).unwrap().is_zero());
            assert!(right.mul(&right).unwrap().is_zero());
        }
    }
}
