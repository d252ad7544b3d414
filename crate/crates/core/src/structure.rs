//! Support subgroups, FC-center probes, centrality, quotient coarsening and
//! primeness witnesses.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{ball, Backend, GroupElement, GroupError, Subgroup, SubgroupKind};
use crate::ring::{Basis, ModelKind, RingElement, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("operation needs a group or twisted group ring, not the {0} model")]
    NotGroupGraded(&'static str),
    #[error("subgroup {0} is not known to be normal")]
    NotNormal(String),
    #[error("both elements must be nonzero")]
    ZeroInput,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn group_backend(x: &RingElement) -> Result<Backend, StructureError> {
    x.model().backend().ok_or(StructureError::NotGroupGraded(x.model().kind_name()))
}

/// The subgroup generated by `Supp(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportSubgroup {
    #[serde(serialize_with = "crate::report::display_seq")]
    pub generators: Vec<GroupElement>,
    /// Exact oracle for the generated subgroup, when one exists.
    #[serde(skip)]
    pub subgroup: Option<Subgroup>,
    /// Canonical lattice basis over `Z^n`.
    pub lattice_basis: Option<Vec<Vec<i64>>>,
    pub rank: Option<usize>,
    /// Index in `Z^n` when the lattice has full rank.
    pub index: Option<u64>,
}

pub fn support_subgroup(x: &RingElement) -> Result<SupportSubgroup, StructureError> {
    let backend = group_backend(x)?;
    let generators = x.group_support();
    let subgroup = Subgroup::generated(backend, &generators).ok();
    let lattice = subgroup.as_ref().and_then(|s| s.as_lattice().cloned());
    Ok(SupportSubgroup {
        generators,
        lattice_basis: lattice.as_ref().map(|l| l.basis().to_vec()),
        rank: lattice.as_ref().map(|l| l.rank()),
        index: lattice.as_ref().and_then(|l| l.index()),
        subgroup,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Member,
    NonMember,
    UnknownAtRadius,
}

/// Three-valued answer to "does `g` have finitely many conjugates".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaVerdict {
    #[serde(serialize_with = "crate::report::display")]
    pub element: GroupElement,
    pub verdict: Membership,
    /// Distinct conjugates `s^-1 g s` seen for `s` in the ball.
    pub conjugates: usize,
    pub radius: usize,
}

/// Exact oracle, where one is implemented. Heisenberg only has the
/// membership half (central elements); the others are two-sided.
fn delta_oracle(g: &GroupElement) -> Option<bool> {
    match g.backend() {
        Backend::Abelian { .. } | Backend::Cyclic { .. } | Backend::KleinFour => Some(true),
        Backend::Free { rank: 1 } => Some(true),
        Backend::Free { .. } => Some(g.is_identity()),
        Backend::Heisenberg => Subgroup::center(Backend::Heisenberg).contains(g).unwrap().then_some(true),
        // a^m b^n has finitely many conjugates iff n is even
        Backend::Klein => Some(g.klein_coords().unwrap()[1] % 2 == 0),
        // the translation lattice is the FC-center of P
        Backend::Promislow => Some(Subgroup::promislow_translations().contains(g).unwrap()),
    }
}

pub fn delta_probe(g: &GroupElement, radius: usize) -> DeltaVerdict {
    let conjugates: BTreeSet<GroupElement> =
        ball(g.backend(), radius).iter().map(|s| s.inverse().mul_unchecked(g).mul_unchecked(s)).collect();
    let verdict = match delta_oracle(g) {
        Some(true) => Membership::Member,
        Some(false) => Membership::NonMember,
        None => Membership::UnknownAtRadius,
    };
    DeltaVerdict { element: g.clone(), verdict, conjugates: conjugates.len(), radius }
}

/// Whether `x` commutes with every generator (and hence with everything).
/// Scalars are central in all models here.
pub fn is_central(x: &RingElement) -> bool {
    let model = x.model();
    let k = model.coeffs();
    let generators: Vec<RingElement> = match model.kind() {
        ModelKind::Weyl => vec![
            RingElement::monomial(model, Basis::Weyl(1, 0), k.one()),
            RingElement::monomial(model, Basis::Weyl(0, 1), k.one()),
        ],
        _ => model
            .backend()
            .unwrap()
            .generators()
            .into_iter()
            .map(|g| RingElement::basis_element(model, g))
            .collect(),
    };
    generators.iter().all(|s| x.mul_unchecked(s) == s.mul_unchecked(x))
}

/// Coarsening of the `G`-grading to a `G/N`-grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGrading {
    normal: Subgroup,
}

impl QuotientGrading {
    pub fn new(normal: Subgroup) -> Result<Self, StructureError> {
        if !normal.is_normal() || matches!(normal.kind(), SubgroupKind::Cyclic(_)) {
            return Err(StructureError::NotNormal(normal.to_string()));
        }
        // make sure the coset oracle exists before anyone relies on it
        normal.coset_representative(&normal.backend().identity())?;
        Ok(QuotientGrading { normal })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.normal
    }

    /// Degree of `g` in `G/N`: the canonical coset representative.
    pub fn coset_of(&self, g: &GroupElement) -> Result<GroupElement, StructureError> {
        Ok(self.normal.coset_representative(g)?)
    }

    pub fn coordinates(&self, g: &GroupElement) -> Result<Vec<i64>, StructureError> {
        Ok(self.normal.quotient_coordinates(g)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetPart {
    #[serde(serialize_with = "crate::report::display")]
    pub coset: GroupElement,
    pub coordinates: Vec<i64>,
    #[serde(serialize_with = "crate::report::display")]
    pub part: RingElement,
}

/// Splits `x` into its `G/N`-homogeneous components, ordered by coset
/// coordinates. The parts sum to `x`.
pub fn coarsen(x: &RingElement, q: &QuotientGrading) -> Result<Vec<CosetPart>, StructureError> {
    let backend = group_backend(x)?;
    if backend != q.normal.backend() {
        return Err(GroupError::BackendMismatch(backend, q.normal.backend()).into());
    }
    let mut parts: Vec<CosetPart> = Vec::new();
    for (b, c) in x.terms() {
        let g = b.group().unwrap();
        let coset = q.coset_of(g)?;
        let term = RingElement::monomial(x.model(), b.clone(), c.clone());
        match parts.iter_mut().find(|p| p.coset == coset) {
            Some(p) => p.part = p.part.add(&term)?,
            None => parts.push(CosetPart { coordinates: q.coordinates(g)?, coset, part: term }),
        }
    }
    parts.sort_by(|a, b| a.coordinates.cmp(&b.coordinates).then_with(|| a.coset.cmp(&b.coset)));
    Ok(parts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    #[serde(serialize_with = "crate::report::display_opt")]
    pub witness: Option<GroupElement>,
    pub radius: usize,
    pub checked: usize,
}

/// First `g` in `ball(radius)` (word-length order) with `x u_g y != 0`.
pub fn prime_witness(x: &RingElement, y: &RingElement, radius: usize) -> Result<PrimeWitness, StructureError> {
    let backend = group_backend(x)?;
    if x.is_zero() || y.is_zero() {
        return Err(StructureError::ZeroInput);
    }
    x.mul(y)?;
    let window = ball(backend, radius);
    let hit = window.par_iter().position_first(|g| {
        let r = RingElement::basis_element(x.model(), g.clone());
        !x.mul_unchecked(&r).mul_unchecked(y).is_zero()
    });
    Ok(PrimeWitness {
        witness: hit.map(|i| window[i].clone()),
        radius,
        checked: hit.map_or(window.len(), |i| i + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;
    use crate::expr::{parse_element, parse_group_element};
    use crate::ring::RingModel;

    fn el(src: &str, b: Backend) -> RingElement {
        parse_element(src, &RingModel::group_ring(b, CoeffRing::Prime(2))).unwrap()
    }

    #[test]
    fn support_subgroups() {
        let z2 = Backend::Abelian { rank: 2 };
        let s = support_subgroup(&el("1 + u*v", z2)).unwrap();
        assert_eq!((s.rank, s.lattice_basis.clone()), (Some(1), Some(vec![vec![1, 1]])));
        let s = support_subgroup(&el("0", z2)).unwrap();
        assert_eq!(s.rank, Some(0));
        assert!(s.generators.is_empty());
        let s = support_subgroup(&el("u^2 + v^3", z2)).unwrap();
        assert_eq!((s.rank, s.index), (Some(2), Some(6)));
    }

    #[test]
    fn delta_probes() {
        let h = Backend::Heisenberg;
        let z = delta_probe(&h.symbol('z').unwrap(), 3);
        assert_eq!((z.verdict, z.conjugates), (Membership::Member, 1));
        let x = delta_probe(&h.symbol('x').unwrap(), 5);
        assert_eq!(x.verdict, Membership::UnknownAtRadius);
        assert!(x.conjugates >= 6);
        let t = delta_probe(&Backend::Abelian { rank: 2 }.symbol('u').unwrap(), 2);
        assert_eq!((t.verdict, t.conjugates), (Membership::Member, 1));
        let k = delta_probe(&parse_group_element("a*b^2", Backend::Klein).unwrap(), 4);
        assert_eq!((k.verdict, k.conjugates), (Membership::Member, 2));
        let k = delta_probe(&Backend::Klein.symbol('b').unwrap(), 4);
        assert_eq!(k.verdict, Membership::NonMember);
    }

    #[test]
    fn centrality() {
        assert!(is_central(&el("1 + z + z^2", Backend::Heisenberg)));
        assert!(!is_central(&el("a", Backend::Free { rank: 2 })));
        assert!(is_central(&el("1 + u + v^-1", Backend::Abelian { rank: 2 })));
        let w = RingModel::weyl(CoeffRing::Rationals);
        assert!(!is_central(&parse_element("x*y", &w).unwrap()));
        assert!(is_central(&parse_element("3", &w).unwrap()));
    }

    #[test]
    fn coarsening_klein_bottle() {
        let q = QuotientGrading::new(Subgroup::klein_fiber()).unwrap();
        let x = el("1 + a^2 + b^3", Backend::Klein);
        let parts = coarsen(&x, &q).unwrap();
        let shown: Vec<(Vec<i64>, String)> = parts.iter().map(|p| (p.coordinates.clone(), p.part.to_string())).collect();
        assert_eq!(shown, vec![(vec![0], "1 + a^2".to_string()), (vec![3], "b^3".to_string())]);
        assert_eq!(x.project(&Subgroup::klein_fiber()).unwrap(), parts[0].part);
    }

    #[test]
    fn coarsening_even_odd() {
        let z = Backend::Abelian { rank: 1 };
        let q = QuotientGrading::new(Subgroup::lattice(z, &[vec![2]]).unwrap()).unwrap();
        let parts = coarsen(&el("1 + t + t^2", z), &q).unwrap();
        let shown: Vec<String> = parts.iter().map(|p| p.part.to_string()).collect();
        assert_eq!(shown, vec!["1 + t^2", "t"]);
        let heis_x = Subgroup::cyclic(Backend::Heisenberg.symbol('x').unwrap());
        assert!(QuotientGrading::new(heis_x).is_err());
    }

    #[test]
    fn prime_witnesses() {
        let z = Backend::Abelian { rank: 1 };
        let x = el("1 + t", z);
        let w = prime_witness(&x, &x, 2).unwrap();
        assert_eq!(w.witness, Some(z.identity()));
        let c2 = Backend::Cyclic { order: 2 };
        let x = el("1 + t", c2);
        let w = prime_witness(&x, &x, 4).unwrap();
        assert_eq!((w.witness, w.checked), (None, 2));
        assert_eq!(prime_witness(&el("0", z), &el("1", z), 1), Err(StructureError::ZeroInput));
    }
}
