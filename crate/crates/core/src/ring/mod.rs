//! Graded ring models and exact element arithmetic.
//!
//! Three models share one element type: group rings `K[G]`, twisted group
//! rings over a finite grading group (2-cocycle, trivial action), and the
//! first Weyl algebra `K<x, y>/(yx - xy - 1)` graded by `deg x = 1`,
//! `deg y = -1`.

mod diagnostics;
mod weyl;

pub use diagnostics::{gradation_diagnostics, DiagnosticsReport, ProductViolation};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coeff::{Coeff, CoeffError, CoeffRing};
use crate::group::{Backend, GroupElement, GroupError, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring model mismatch")]
    ModelMismatch,
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("operation not supported for the {0} model")]
    UnsupportedModel(&'static str),
    #[error("invalid 2-cocycle: {0}")]
    InvalidCocycle(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Basis index of a ring element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// Group element `g` (the basis element `u_g`).
    Group(GroupElement),
    /// Normal-ordered Weyl monomial `x^i y^j`.
    Weyl(u32, u32),
}

impl Basis {
    pub fn group(&self) -> Option<&GroupElement> {
        match self {
            Basis::Group(g) => Some(g),
            Basis::Weyl(..) => None,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Group(g) => write!(f, "{g}"),
            Basis::Weyl(i, j) => {
                let mut parts = Vec::new();
                for (name, e) in [("x", *i), ("y", *j)] {
                    match e {
                        0 => {}
                        1 => parts.push(name.to_string()),
                        _ => parts.push(format!("{name}^{e}")),
                    }
                }
                if parts.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", parts.join("*"))
                }
            }
        }
    }
}

/// Normalized 2-cocycle `tau` on a finite group: `u_g u_h = tau(g, h) u_{gh}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    backend: Backend,
    elements: Vec<GroupElement>,
    table: Vec<Vec<Coeff>>,
}

impl Cocycle {
    /// Checks normalization and the identity
    /// `tau(g,h) tau(gh,k) = tau(h,k) tau(g,hk)` on every triple.
    pub fn new(
        backend: Backend,
        coeffs: CoeffRing,
        tau: impl Fn(&GroupElement, &GroupElement) -> Coeff,
    ) -> Result<Self, RingError> {
        let elements = backend
            .elements()
            .ok_or(RingError::InvalidCocycle(format!("{backend} is infinite")))?;
        let table: Vec<Vec<Coeff>> = elements
            .iter()
            .map(|g| elements.iter().map(|h| tau(g, h)).collect())
            .collect();
        let c = Cocycle { backend, elements, table };
        c.validate(coeffs)?;
        Ok(c)
    }

    fn index(&self, g: &GroupElement) -> usize {
        self.elements.iter().position(|e| e == g).expect("element of the finite group")
    }

    pub fn value(&self, g: &GroupElement, h: &GroupElement) -> &Coeff {
        &self.table[self.index(g)][self.index(h)]
    }

    fn validate(&self, k: CoeffRing) -> Result<(), RingError> {
        for g in &self.elements {
            for h in &self.elements {
                let v = self.value(g, h);
                if k.inv(v).is_none() {
                    return Err(RingError::InvalidCocycle(format!("tau({g},{h}) is not a unit")));
                }
                for l in &self.elements {
                    let gh = g.mul_unchecked(h);
                    let hl = h.mul_unchecked(l);
                    let lhs = k.mul(v, self.value(&gh, l));
                    let rhs = k.mul(self.value(h, l), self.value(g, &hl));
                    if lhs != rhs {
                        return Err(RingError::InvalidCocycle(format!(
                            "cocycle identity fails at ({g},{h},{l})"
                        )));
                    }
                }
            }
        }
        let e = self.backend.identity();
        for g in &self.elements {
            if !k.is_one(self.value(&e, g)) || !k.is_one(self.value(g, &e)) {
                return Err(RingError::InvalidCocycle("not normalized".into()));
            }
        }
        Ok(())
    }

    /// The quaternion cocycle on `C2 x C2` with `1, i, j, k` as basis.
    pub fn quaternion(coeffs: CoeffRing) -> Result<Self, RingError> {
        Cocycle::new(Backend::KleinFour, coeffs, |g, h| {
            let gi = four_index(g);
            let hi = four_index(h);
            coeffs.from_i64(QUATERNION_SIGN[gi][hi])
        })
    }
}

fn four_index(g: &GroupElement) -> usize {
    let v = g.as_vector().expect("Klein four element");
    (v[0] + 2 * v[1]) as usize
}

/// Signs of unit products in the order 1, i, j, k: `i j = k`, `j i = -k`, ...
const QUATERNION_SIGN: [[i64; 4]; 4] = [
    [1, 1, 1, 1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [1, 1, -1, -1],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelKind {
    GroupRing(Backend),
    Twisted(Cocycle),
    Weyl,
}

/// Which grading the degree map reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    /// Identity on `G` for group rings, `i - j` in `Z` for Weyl.
    Canonical,
    /// Everything in degree `e` of the trivial group.
    Trivial,
}

/// Ring model descriptor. Models are immutable and shared behind `Arc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingModel {
    kind: ModelKind,
    coeffs: CoeffRing,
    grading: Grading,
}

impl RingModel {
    pub fn group_ring(backend: Backend, coeffs: CoeffRing) -> Arc<Self> {
        Arc::new(RingModel { kind: ModelKind::GroupRing(backend), coeffs, grading: Grading::Canonical })
    }

    pub fn twisted(cocycle: Cocycle, coeffs: CoeffRing) -> Arc<Self> {
        Arc::new(RingModel { kind: ModelKind::Twisted(cocycle), coeffs, grading: Grading::Canonical })
    }

    /// Quaternion algebra as a `C2 x C2`-graded twisted group ring.
    pub fn quaternions(coeffs: CoeffRing) -> Result<Arc<Self>, RingError> {
        Ok(Self::twisted(Cocycle::quaternion(coeffs)?, coeffs))
    }

    pub fn weyl(coeffs: CoeffRing) -> Arc<Self> {
        Arc::new(RingModel { kind: ModelKind::Weyl, coeffs, grading: Grading::Canonical })
    }

    /// Same ring, graded by the trivial group.
    pub fn with_trivial_grading(&self) -> Arc<Self> {
        Arc::new(RingModel { grading: Grading::Trivial, ..self.clone() })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn coeffs(&self) -> CoeffRing {
        self.coeffs
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ModelKind::GroupRing(_) => "group ring",
            ModelKind::Twisted(_) => "twisted group ring",
            ModelKind::Weyl => "Weyl",
        }
    }

    /// Group backend of the basis, for group and twisted group rings.
    pub fn backend(&self) -> Option<Backend> {
        match &self.kind {
            ModelKind::GroupRing(b) => Some(*b),
            ModelKind::Twisted(c) => Some(c.backend),
            ModelKind::Weyl => None,
        }
    }

    pub fn cocycle(&self) -> Option<&Cocycle> {
        match &self.kind {
            ModelKind::Twisted(c) => Some(c),
            _ => None,
        }
    }

    /// Backend of the grading group.
    pub fn grading_backend(&self) -> Backend {
        match (self.grading, &self.kind) {
            (Grading::Trivial, _) => Backend::Cyclic { order: 1 },
            (_, ModelKind::Weyl) => Backend::Abelian { rank: 1 },
            (_, k) => match k {
                ModelKind::GroupRing(b) => *b,
                ModelKind::Twisted(c) => c.backend,
                ModelKind::Weyl => unreachable!(),
            },
        }
    }

    /// Degree of a basis element in the grading group.
    pub fn degree(&self, basis: &Basis) -> GroupElement {
        match (self.grading, basis) {
            (Grading::Trivial, _) => Backend::Cyclic { order: 1 }.identity(),
            (_, Basis::Group(g)) => g.clone(),
            (_, Basis::Weyl(i, j)) => Backend::Abelian { rank: 1 }
                .vector(&[*i as i64 - *j as i64])
                .unwrap(),
        }
    }

    /// Product of two basis elements as a scaled basis element.
    pub(crate) fn basis_product(&self, a: &Basis, b: &Basis) -> Vec<(Basis, Coeff)> {
        let k = self.coeffs;
        match (&self.kind, a, b) {
            (ModelKind::GroupRing(_), Basis::Group(g), Basis::Group(h)) => {
                vec![(Basis::Group(g.mul_unchecked(h)), k.one())]
            }
            (ModelKind::Twisted(c), Basis::Group(g), Basis::Group(h)) => {
                vec![(Basis::Group(g.mul_unchecked(h)), c.value(g, h).clone())]
            }
            (ModelKind::Weyl, Basis::Weyl(i, j), Basis::Weyl(p, q)) => weyl::monomial_product(k, *i, *j, *p, *q),
            _ => panic!("basis does not belong to the model"),
        }
    }

    pub(crate) fn check_basis(&self, basis: &Basis) -> Result<(), RingError> {
        match (&self.kind, basis) {
            (ModelKind::Weyl, Basis::Weyl(..)) => Ok(()),
            (ModelKind::Weyl, _) | (_, Basis::Weyl(..)) => Err(RingError::ModelMismatch),
            (_, Basis::Group(g)) => {
                let b = self.backend().unwrap();
                if g.backend() == b {
                    Ok(())
                } else {
                    Err(GroupError::BackendMismatch(b, g.backend()).into())
                }
            }
        }
    }

    /// Multiplicative identity `1 = u_e` (or the empty Weyl monomial).
    pub fn one_basis(&self) -> Basis {
        match &self.kind {
            ModelKind::Weyl => Basis::Weyl(0, 0),
            _ => Basis::Group(self.backend().unwrap().identity()),
        }
    }
}

impl fmt::Display for RingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::GroupRing(b) => write!(f, "{}[{}]", self.coeffs, b)?,
            ModelKind::Twisted(c) => write!(f, "{}^tau[{}]", self.coeffs, c.backend)?,
            ModelKind::Weyl => write!(f, "A1({})", self.coeffs)?,
        }
        if self.grading == Grading::Trivial {
            write!(f, " (trivially graded)")?;
        }
        Ok(())
    }
}

/// A finite formal sum `sum c_b b` with no zero coefficients stored.
#[derive(Debug, Clone)]
pub struct RingElement {
    model: Arc<RingModel>,
    terms: BTreeMap<Basis, Coeff>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.model, &other.model) || self.model == other.model) && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl RingElement {
    pub fn zero(model: &Arc<RingModel>) -> Self {
        RingElement { model: model.clone(), terms: BTreeMap::new() }
    }

    pub fn one(model: &Arc<RingModel>) -> Self {
        Self::monomial(model, model.one_basis(), model.coeffs.one())
    }

    pub fn scalar(model: &Arc<RingModel>, c: Coeff) -> Self {
        Self::monomial(model, model.one_basis(), c)
    }

    /// `c * basis`; pruned to zero when `c = 0`.
    pub fn monomial(model: &Arc<RingModel>, basis: Basis, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !model.coeffs.is_zero(&c) {
            terms.insert(basis, c);
        }
        RingElement { model: model.clone(), terms }
    }

    /// The basis element `u_g` of a group or twisted group ring.
    pub fn basis_element(model: &Arc<RingModel>, g: GroupElement) -> Self {
        Self::monomial(model, Basis::Group(g), model.coeffs.one())
    }

    /// Builds an element from terms, combining repeated keys.
    pub fn from_terms(
        model: &Arc<RingModel>,
        terms: impl IntoIterator<Item = (Basis, Coeff)>,
    ) -> Result<Self, RingError> {
        let mut x = Self::zero(model);
        for (b, c) in terms {
            model.check_basis(&b)?;
            if !model.coeffs.contains(&c) {
                return Err(CoeffError::NotInRing(c.to_string(), model.coeffs).into());
            }
            x.add_term(b, c);
        }
        Ok(x)
    }

    /// Group-ring element `sum c_g g` from `(g, c)` pairs.
    pub fn from_group_terms(
        model: &Arc<RingModel>,
        terms: impl IntoIterator<Item = (GroupElement, Coeff)>,
    ) -> Result<Self, RingError> {
        Self::from_terms(model, terms.into_iter().map(|(g, c)| (Basis::Group(g), c)))
    }

    fn add_term(&mut self, b: Basis, c: Coeff) {
        let k = self.model.coeffs;
        match self.terms.get_mut(&b) {
            Some(v) => {
                let s = k.add(v, &c);
                if k.is_zero(&s) {
                    self.terms.remove(&b);
                } else {
                    *v = s;
                }
            }
            None => {
                if !k.is_zero(&c) {
                    self.terms.insert(b, c);
                }
            }
        }
    }

    pub fn model(&self) -> &Arc<RingModel> {
        &self.model
    }

    pub fn terms(&self) -> &BTreeMap<Basis, Coeff> {
        &self.terms
    }

    pub fn coefficient(&self, b: &Basis) -> Coeff {
        self.terms.get(b).cloned().unwrap_or_else(|| self.model.coeffs.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.model)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Supp(x)`: exactly the stored keys.
    pub fn support(&self) -> BTreeSet<Basis> {
        self.terms.keys().cloned().collect()
    }

    /// Group elements of the support (group and twisted models).
    pub fn group_support(&self) -> Vec<GroupElement> {
        self.terms.keys().filter_map(|b| b.group().cloned()).collect()
    }

    /// Set of degrees occurring in `x`.
    pub fn degrees(&self) -> BTreeSet<GroupElement> {
        self.terms.keys().map(|b| self.model.degree(b)).collect()
    }

    /// Homogeneous iff every term has the same degree (zero included).
    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    fn same_model(&self, other: &RingElement) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.model, &other.model) || self.model == other.model {
            Ok(())
        } else {
            Err(RingError::ModelMismatch)
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.same_model(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> RingElement {
        let k = self.model.coeffs;
        RingElement {
            model: self.model.clone(),
            terms: self.terms.iter().map(|(b, c)| (b.clone(), k.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> RingElement {
        let k = self.model.coeffs;
        let mut out = Self::zero(&self.model);
        for (b, v) in &self.terms {
            out.add_term(b.clone(), k.mul(v, c));
        }
        out
    }

    /// Graded convolution: twisted products carry `tau(g, h)`, Weyl products
    /// are normal ordered with `y x = x y + 1`.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.same_model(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &RingElement) -> RingElement {
        let k = self.model.coeffs;
        let mut out = Self::zero(&self.model);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = k.mul(ca, cb);
                for (basis, f) in self.model.basis_product(a, b) {
                    out.add_term(basis, k.mul(&c, &f));
                }
            }
        }
        out
    }

    pub fn commutes_with(&self, other: &RingElement) -> Result<bool, RingError> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    /// Two-sided inverse of a homogeneous unit `c u_g`.
    pub fn homogeneous_inverse(&self) -> Result<RingElement, RingError> {
        let not_inv = || RingError::NotInvertible(self.to_string());
        if self.terms.len() != 1 {
            return Err(not_inv());
        }
        let (b, c) = self.terms.iter().next().unwrap();
        let k = self.model.coeffs;
        let cinv = k.inv(c).ok_or_else(not_inv)?;
        match b {
            Basis::Group(g) => {
                let ginv = g.inverse();
                // u_g u_{g^-1} = tau(g, g^-1) u_e
                let t = match &self.model.kind {
                    ModelKind::Twisted(cy) => cy.value(g, &ginv).clone(),
                    _ => k.one(),
                };
                let tinv = k.inv(&t).ok_or_else(not_inv)?;
                let inv = Self::monomial(&self.model, Basis::Group(ginv), k.mul(&cinv, &tinv));
                debug_assert!(self.mul_unchecked(&inv).is_one());
                Ok(inv)
            }
            Basis::Weyl(0, 0) => Ok(Self::scalar(&self.model, cinv)),
            Basis::Weyl(..) => Err(not_inv()),
        }
    }

    pub fn pow(&self, e: i64) -> Result<RingElement, RingError> {
        let base = if e < 0 { self.homogeneous_inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(&self.model);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul_unchecked(&b);
            }
        }
        Ok(acc)
    }

    /// Projection `pi_H`: keeps the terms whose group part lies in `H`.
    pub fn project(&self, h: &Subgroup) -> Result<RingElement, RingError> {
        if matches!(self.model.kind, ModelKind::Weyl) {
            return Err(RingError::UnsupportedModel("Weyl"));
        }
        let mut out = Self::zero(&self.model);
        for (b, c) in &self.terms {
            let g = b.group().expect("group basis");
            if h.contains(g)? {
                out.terms.insert(b.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Restriction of `x` to the basis elements accepted by `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Basis) -> bool) -> RingElement {
        RingElement {
            model: self.model.clone(),
            terms: self.terms.iter().filter(|(b, _)| keep(b)).map(|(b, c)| (b.clone(), c.clone())).collect(),
        }
    }
}

/// Canonical text: terms in ascending basis order, `coeff*word` joined by
/// ` + ` / ` - `, unit coefficients omitted, zero printed as `0`.
impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = self.model.coeffs;
        for (n, (b, c)) in self.terms.iter().enumerate() {
            let neg = k.is_negative(c);
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_one_basis = *b == self.model.one_basis();
            let mag = c.magnitude_text();
            if is_one_basis {
                write!(f, "{mag}")?;
            } else if c.is_unit_magnitude() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{mag}*{b}")?;
            }
        }
        Ok(())
    }
}
