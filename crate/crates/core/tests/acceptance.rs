//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; exits non-zero if any
//! criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use gradlab::coeff::CoeffRing;
use gradlab::expr::{parse_element, parse_group_element};
use gradlab::group::{ball, Backend, GroupElement, Subgroup};
use gradlab::ring::{RingElement, RingModel};
use gradlab::search::{
    hierarchy_suite, partner_for, search, verify_identity, Engine, SearchKind, SearchOptions, SearchReport,
};
use gradlab::structure::{coarsen, delta_probe, is_central, Membership, QuotientGrading};
use gradlab::up::{promislow_witness, unique_products};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock budgets, pinned.
const UP_ORACLE_BUDGET: Duration = Duration::from_secs(30);
const PROMISLOW_BUDGET: Duration = Duration::from_secs(1);
const WINDOW_SEARCH_BUDGET: Duration = Duration::from_secs(300);

const UP_BACKENDS: [Backend; 10] = [
    Backend::Abelian { rank: 1 },
    Backend::Abelian { rank: 2 },
    Backend::Abelian { rank: 3 },
    Backend::Free { rank: 2 },
    Backend::Free { rank: 3 },
    Backend::Heisenberg,
    Backend::Klein,
    Backend::Promislow,
    Backend::Cyclic { order: 7 },
    Backend::KleinFour,
];

/// The torsion-free backends searched exhaustively over ball(2).
const WINDOW_BACKENDS: [Backend; 5] =
    [Backend::Abelian { rank: 1 }, Backend::Abelian { rank: 2 }, Backend::Free { rank: 2 }, Backend::Heisenberg, Backend::Klein];

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t < budget, || format!("took {t:.2?}, budget {budget:?}"))?;
    Ok(t)
}

fn random_set(rng: &mut ChaCha8Rng, pool: &[GroupElement], max: usize) -> Vec<GroupElement> {
    let n = rng.gen_range(1..=max);
    pool.choose_multiple(rng, n).cloned().collect()
}

fn oracle_unique(a: &[GroupElement], b: &[GroupElement]) -> BTreeSet<(GroupElement, GroupElement, GroupElement)> {
    let mut count: HashMap<GroupElement, Vec<(GroupElement, GroupElement)>> = HashMap::new();
    for x in a {
        for y in b {
            count.entry(x.compose(y).unwrap()).or_default().push((x.clone(), y.clone()));
        }
    }
    count.into_iter().filter(|(_, v)| v.len() == 1).map(|(g, v)| (g, v[0].0.clone(), v[0].1.clone())).collect()
}

fn up_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pairs = 0;
    for b in UP_BACKENDS {
        let pool = ball(b, 3);
        for _ in 0..500 {
            let x = random_set(&mut rng, &pool, 6);
            let y = random_set(&mut rng, &pool, 6);
            let r = unique_products(&x, &y).map_err(|e| e.to_string())?;
            let got: BTreeSet<_> = r.unique.iter().map(|u| (u.product.clone(), u.left.clone(), u.right.clone())).collect();
            check(got == oracle_unique(&x, &y), || format!("mismatch on {b}: {x:?} * {y:?}"))?;
            pairs += 1;
        }
    }
    let t = within(start, UP_ORACLE_BUDGET)?;
    Ok(format!("{pairs} set pairs over {} backends agree with the counting oracle in {t:.2?}", UP_BACKENDS.len()))
}

fn promislow_fixture() -> Outcome {
    let start = Instant::now();
    let s = promislow_witness();
    let r = unique_products(&s, &s).map_err(|e| e.to_string())?;
    check(s.len() == 14 && r.total_products == 196, || format!("|S| = {}, {} products", s.len(), r.total_products))?;
    check(r.unique.is_empty(), || format!("{} unique products", r.unique.len()))?;
    // perturbation control: recorded, not asserted
    let mut counts = Vec::new();
    for i in 0..s.len() {
        let mut t = s.clone();
        t.remove(i);
        counts.push(unique_products(&t, &t).map_err(|e| e.to_string())?.unique.len());
    }
    let t = within(start, PROMISLOW_BUDGET)?;
    Ok(format!("S*S has 196 products and no unique product; unique products after dropping one element: {counts:?} ({t:.2?})"))
}

fn group_model(b: Backend, p: u32) -> Arc<RingModel> {
    RingModel::group_ring(b, CoeffRing::Prime(p))
}

fn window_options(kind: SearchKind, engine: Engine) -> SearchOptions {
    let mut o = SearchOptions::new(kind).engine(engine);
    o.require_non_homogeneous = kind == SearchKind::Unit;
    o
}

const WINDOW_KINDS: [SearchKind; 3] = [SearchKind::Unit, SearchKind::ZeroDivisor, SearchKind::Idempotent];

/// Runs every (field, backend, kind) window task once and keeps the reports
/// for the later criteria.
fn window_searches(reports: &mut Vec<(u32, Backend, SearchKind, SearchReport)>) -> Outcome {
    let start = Instant::now();
    for p in [2, 3] {
        for b in WINDOW_BACKENDS {
            let m = group_model(b, p);
            let w = ball(b, 2);
            for kind in WINDOW_KINDS {
                let r = search(&m, &w, None, &window_options(kind, Engine::Auto)).map_err(|e| e.to_string())?;
                check(r.witness_count == 0 && r.exhausted, || {
                    format!("F{p}[{b}] {kind}: {} witnesses, exhausted = {}", r.witness_count, r.exhausted)
                })?;
                reports.push((p, b, kind, r));
            }
        }
    }
    let t = within(start, WINDOW_SEARCH_BUDGET)?;
    Ok(format!("{} exhaustive ball(2) searches over F2 and F3 found no witnesses ({t:.2?})", reports.len()))
}

fn torsion_controls() -> Outcome {
    let c2 = group_model(Backend::Cyclic { order: 2 }, 2);
    let r = search(&c2, &ball(Backend::Cyclic { order: 2 }, 1), None, &SearchOptions::new(SearchKind::ZeroDivisor))
        .map_err(|e| e.to_string())?;
    let one_t = parse_element("1 + t", &c2).unwrap();
    check(r.witnesses.iter().any(|w| w.x == one_t && w.y.as_ref() == Some(&one_t)), || "no (1+t, 1+t) in F2[C2]".into())?;

    let c3 = group_model(Backend::Cyclic { order: 3 }, 2);
    let r3 = search(&c3, &ball(Backend::Cyclic { order: 3 }, 1), None, &SearchOptions::new(SearchKind::Idempotent))
        .map_err(|e| e.to_string())?;
    let e = parse_element("t + t^2", &c3).unwrap();
    check(r3.witnesses.iter().any(|w| w.x == e), || "no idempotent t + t^2 in F2[C3]".into())?;

    let h = RingModel::quaternions(CoeffRing::Rationals).unwrap();
    let rq = search(&h, &ball(Backend::KleinFour, 2), None, &SearchOptions::new(SearchKind::Unit).non_homogeneous())
        .map_err(|e| e.to_string())?;
    let x = parse_element("1 + i", &h).unwrap();
    let y = parse_element("(1 - i)/2", &h).unwrap();
    check(rq.witnesses.iter().any(|w| w.x == x && w.y.as_ref() == Some(&y)), || "no quaternion unit (1+i, (1-i)/2)".into())?;

    let mut verified = 0;
    for (rep, kind) in [(&r, SearchKind::ZeroDivisor), (&r3, SearchKind::Idempotent), (&rq, SearchKind::Unit)] {
        for w in &rep.witnesses {
            let v = verify_identity(&w.x, w.y.as_ref(), kind).map_err(|e| e.to_string())?;
            check(v.holds, || format!("witness {} does not re-verify", w.x))?;
            verified += 1;
        }
    }
    Ok(format!("controls found; {verified} witnesses re-verified by multiplication"))
}

fn random_group_element(rng: &mut ChaCha8Rng, b: Backend, max_len: usize) -> GroupElement {
    let gens = b.symmetric_generators();
    let len = rng.gen_range(0..=max_len);
    (0..len).fold(b.identity(), |acc, _| acc.compose(gens.choose(rng).unwrap()).unwrap())
}

fn random_element_on(rng: &mut ChaCha8Rng, m: &Arc<RingModel>, pool: &[GroupElement], terms: usize) -> RingElement {
    let k = m.coeffs();
    let n = rng.gen_range(0..=terms);
    let ts: Vec<_> = (0..n).map(|_| (pool.choose(rng).unwrap().clone(), k.from_i64(rng.gen_range(1..5)))).collect();
    RingElement::from_group_terms(m, ts).unwrap()
}

fn projection_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let backends = [
        Backend::Abelian { rank: 1 },
        Backend::Abelian { rank: 2 },
        Backend::Abelian { rank: 3 },
        Backend::Free { rank: 2 },
        Backend::Heisenberg,
        Backend::Klein,
        Backend::Promislow,
    ];
    let mut triples = 0;
    let mut nontrivial = 0;
    while triples < 1000 {
        let b = backends[triples % backends.len()];
        let lattice = matches!(b, Backend::Abelian { rank: 2 | 3 }) && rng.gen_bool(0.5);
        let (h, members): (Subgroup, Vec<GroupElement>) = if lattice {
            let rank = if b == (Backend::Abelian { rank: 2 }) { 2 } else { 3 };
            let vs: Vec<Vec<i64>> = (0..2).map(|_| (0..rank).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let mut members = Vec::new();
            for i in -2..=2i64 {
                for j in -2..=2i64 {
                    let v: Vec<i64> = (0..rank).map(|c| i * vs[0][c] + j * vs[1][c]).collect();
                    members.push(b.vector(&v).unwrap());
                }
            }
            (Subgroup::lattice(b, &vs).map_err(|e| e.to_string())?, members)
        } else {
            let g = random_group_element(&mut rng, b, 3);
            let members = (-3..=3).map(|k| g.pow(k)).collect();
            (Subgroup::cyclic(g), members)
        };
        let m = group_model(b, 5);
        let mut pool = ball(b, 2);
        pool.extend(members.iter().cloned());
        let a = random_element_on(&mut rng, &m, &pool, 6);
        let x = random_element_on(&mut rng, &m, &members, 4);
        let pa = a.project(&h).unwrap();
        let left = a.mul(&x).unwrap().project(&h).unwrap() == pa.mul(&x).unwrap();
        let right = x.mul(&a).unwrap().project(&h).unwrap() == x.mul(&pa).unwrap();
        check(left && right, || format!("projection identity fails on {b}: a = {a}, b = {x}"))?;
        if !pa.is_zero() && pa != a {
            nontrivial += 1;
        }
        triples += 1;
    }
    Ok(format!("{triples} triples, {nontrivial} with a proper nonzero projection"))
}

fn transfer_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = [
        (Backend::Cyclic { order: 6 }, "t^2", "t"),
        (Backend::Cyclic { order: 8 }, "t^2", "t"),
        (Backend::Abelian { rank: 2 }, "u*v", "u"),
        (Backend::Heisenberg, "x*y", "y"),
        (Backend::Klein, "b", "a"),
        (Backend::Free { rank: 2 }, "a*b", "a"),
    ];
    let mut agree = [0; 2];
    let mut positive = [0; 2];
    for n in 0..100 {
        let (b, hs, ss) = cases[n % cases.len()];
        let m = group_model(b, 2);
        let h = parse_group_element(hs, b).unwrap();
        let s = parse_group_element(ss, b).unwrap();
        let restricted: Vec<GroupElement> = (-2..=2).map(|k| h.pow(k)).collect::<BTreeSet<_>>().into_iter().collect();
        let ambient: Vec<GroupElement> =
            restricted.iter().cloned().chain(restricted.iter().map(|g| g.compose(&s).unwrap())).collect();
        let mut x = RingElement::zero(&m);
        while x.is_zero() {
            x = random_element_on(&mut rng, &m, &restricted, 3);
        }
        for (i, kind) in [SearchKind::Unit, SearchKind::ZeroDivisor].into_iter().enumerate() {
            let r = partner_for(&x, &restricted, kind).map_err(|e| e.to_string())?;
            let a = partner_for(&x, &ambient, kind).map_err(|e| e.to_string())?;
            check(r.is_some() == a.is_some(), || format!("{kind} verdict differs for {x} in {b}"))?;
            agree[i] += 1;
            positive[i] += usize::from(a.is_some());
        }
    }
    Ok(format!(
        "100 candidates; unit verdicts agree {}/100 ({} units), zero-divisor verdicts agree {}/100 ({} zero-divisors)",
        agree[0], positive[0], agree[1], positive[1]
    ))
}

fn central_suite() -> Outcome {
    let b = Backend::Heisenberg;
    let m = group_model(b, 2);
    let w = ball(b, 2);
    for kind in WINDOW_KINDS {
        let r = search(&m, &w, None, &window_options(kind, Engine::Auto).central()).map_err(|e| e.to_string())?;
        check(r.witness_count == 0 && r.exhausted, || format!("central {kind}: {} witnesses", r.witness_count))?;
    }
    // every central element supported on ball(1), some powers of z and two
    // non-central translates of x and y has its support in the FC-center;
    // enumerate all 2^11 supports
    let mut probe: Vec<GroupElement> = ball(b, 1);
    probe.extend(["z", "z^-1", "z^2", "z^-2", "x*z", "y*z^-1"].iter().map(|s| parse_group_element(s, b).unwrap()));
    let mut central = 0;
    for mask in 1u32..1 << probe.len() {
        let x = RingElement::from_group_terms(
            &m,
            (0..probe.len()).filter(|i| mask >> i & 1 == 1).map(|i| (probe[i].clone(), m.coeffs().one())),
        )
        .unwrap();
        if is_central(&x) {
            central += 1;
            for g in x.group_support() {
                check(delta_probe(&g, 2).verdict == Membership::Member, || format!("central {x} has {g} outside the FC-center"))?;
            }
        }
    }
    // idempotent identities on the C3 control
    let c3 = group_model(Backend::Cyclic { order: 3 }, 2);
    let cw = ball(Backend::Cyclic { order: 3 }, 1);
    let idem = search(&c3, &cw, None, &SearchOptions::new(SearchKind::Idempotent)).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut identities = 0;
    for u in idem.witnesses.iter().map(|w| &w.x) {
        for _ in 0..100 {
            let r = random_element_on(&mut rng, &c3, &cw, 4);
            let uru = u.mul(&r).unwrap().mul(u).unwrap();
            let l = u.mul(&r).unwrap().sub(&uru).unwrap();
            let rr = r.mul(u).unwrap().sub(&uru).unwrap();
            check(l.mul(&l).unwrap().is_zero() && rr.mul(&rr).unwrap().is_zero(), || format!("identity fails for u = {u}, r = {r}"))?;
            identities += 2;
        }
    }
    Ok(format!(
        "central searches empty; {central} of 2047 probe elements central, all supported on FC-center members; {identities} idempotent identities hold for {} idempotents",
        idem.witness_count
    ))
}

fn klein_pipeline(reports: &[(u32, Backend, SearchKind, SearchReport)]) -> Outcome {
    let klein: Vec<_> = reports.iter().filter(|r| r.1 == Backend::Klein).collect();
    check(klein.len() == 6 && klein.iter().all(|r| r.3.witness_count == 0), || "Klein window searches not empty".into())?;
    let q = QuotientGrading::new(Subgroup::klein_fiber()).map_err(|e| e.to_string())?;
    let mut units = 0;
    for p in [2, 3] {
        let m = group_model(Backend::Klein, p);
        let r = search(&m, &ball(Backend::Klein, 2), None, &SearchOptions::new(SearchKind::Unit)).map_err(|e| e.to_string())?;
        for w in &r.witnesses {
            let parts = coarsen(&w.x, &q).map_err(|e| e.to_string())?;
            check(parts.len() == 1, || format!("unit {} spreads over {} cosets of <a>", w.x, parts.len()))?;
            units += 1;
        }
    }
    Ok(format!("non-homogeneous searches empty; all {units} units found (homogeneous) lie in one <a>-coset component"))
}

fn hierarchy_consistency() -> Outcome {
    let mut runs = 0;
    for p in [2, 3] {
        for b in WINDOW_BACKENDS.iter().copied().chain([Backend::Promislow, Backend::Abelian { rank: 3 }]) {
            let radius = if matches!(b, Backend::Promislow | Backend::Abelian { rank: 3 }) { 1 } else { 2 };
            let r = hierarchy_suite(&group_model(b, p), &ball(b, radius), &SearchOptions::new(SearchKind::Unit))
                .map_err(|e| format!("exit 2: {e}"))?;
            check(r.consistent && r.hypotheses_hold, || format!("F{p}[{b}]: {:?}", r.violations))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} torsion-free backend/window/field combinations consistent"))
}

fn differential(reports: &[(u32, Backend, SearchKind, SearchReport)]) -> Outcome {
    let mut compared = 0;
    for (p, b, kind, auto) in reports.iter().filter(|r| r.0 == 2) {
        let m = group_model(*b, *p);
        let w = ball(*b, 2);
        let generic = search(&m, &w, None, &window_options(*kind, Engine::Generic)).map_err(|e| e.to_string())?;
        let bitset = search(&m, &w, None, &window_options(*kind, Engine::Bitset)).map_err(|e| e.to_string())?;
        check(generic == bitset && bitset == *auto, || format!("F2[{b}] {kind}: engines disagree"))?;
        compared += 1;
    }
    // torsion controls exercise the coefficient-level solvers
    for (order, kind) in [(2, SearchKind::ZeroDivisor), (3, SearchKind::Idempotent), (4, SearchKind::Unit), (6, SearchKind::ZeroDivisor)] {
        let b = Backend::Cyclic { order };
        let m = group_model(b, 2);
        let w = ball(b, 3);
        let generic = search(&m, &w, None, &SearchOptions::new(kind).engine(Engine::Generic)).map_err(|e| e.to_string())?;
        let bitset = search(&m, &w, None, &SearchOptions::new(kind).engine(Engine::Bitset)).map_err(|e| e.to_string())?;
        check(generic == bitset, || format!("F2[{b}] {kind}: engines disagree"))?;
        compared += 1;
    }
    Ok(format!("{compared} report pairs identical (bitset vs generic)"))
}

fn main() {
    let mut reports = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 unique-product oracle equivalence", up_oracle_equivalence()),
        ("2 Promislow non-unique-product set", promislow_fixture()),
        ("3 exhaustive windows on torsion-free groups", window_searches(&mut reports)),
        ("4 torsion controls", torsion_controls()),
        ("5 projection onto subgroups", projection_suite()),
        ("6 subgroup restriction of unit/zero-divisor verdicts", transfer_suite()),
        ("7 central searches and central supports", central_suite()),
        ("8 Klein bottle group coset pipeline", klein_pipeline(&reports)),
        ("9 hierarchy consistency", hierarchy_consistency()),
        ("10 bitset vs generic engine", differential(&reports)),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
