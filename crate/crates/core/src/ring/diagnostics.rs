//! Randomized sanity checks of a grading on a ring model.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Basis, Grading, ModelKind, RingElement, RingModel};
use crate::coeff::{Coeff, CoeffRing};
use crate::group::{ball, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductViolation {
    pub left: String,
    pub right: String,
    pub product: String,
}

/// Findings from sampled homogeneous pairs. Empty lists mean "no violation
/// found", not a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagnosticsReport {
    pub model: String,
    pub samples: usize,
    /// Nonzero homogeneous `x, y` with `xy = 0`.
    pub zero_products: Vec<ProductViolation>,
    /// Products whose degree is not the product of the degrees.
    pub multiplicativity_failures: Vec<ProductViolation>,
    /// Sampled degrees `g` where no sampled pair from `R_g x R_{g^-1}`
    /// multiplied to something nonzero.
    pub nondegeneracy_alarms: Vec<String>,
}

impl DiagnosticsReport {
    pub fn is_clean(&self) -> bool {
        self.zero_products.is_empty()
            && self.multiplicativity_failures.is_empty()
            && self.nondegeneracy_alarms.is_empty()
    }
}

fn random_coeff(k: CoeffRing, rng: &mut ChaCha8Rng) -> Coeff {
    match k {
        CoeffRing::Prime(p) => Coeff::Mod(rng.gen_range(1..p)),
        _ => {
            let v: i64 = rng.gen_range(1..=3);
            k.from_i64(if rng.gen_bool(0.5) { v } else { -v })
        }
    }
}

/// All basis elements of a model within `radius`, grouped by degree.
fn basis_by_degree(model: &RingModel, radius: usize) -> Vec<(GroupElement, Vec<Basis>)> {
    let basis: Vec<Basis> = match model.kind() {
        ModelKind::Weyl => {
            let r = radius as u32;
            (0..=r).flat_map(|i| (0..=r).map(move |j| Basis::Weyl(i, j))).collect()
        }
        _ => ball(model.backend().unwrap(), radius).into_iter().map(Basis::Group).collect(),
    };
    let mut groups: Vec<(GroupElement, Vec<Basis>)> = Vec::new();
    for b in basis {
        let d = model.degree(&b);
        match groups.iter_mut().find(|(g, _)| *g == d) {
            Some((_, v)) => v.push(b),
            None => groups.push((d, vec![b])),
        }
    }
    groups
}

fn random_homogeneous(
    model: &Arc<RingModel>,
    component: &[Basis],
    rng: &mut ChaCha8Rng,
) -> RingElement {
    let size = rng.gen_range(1..=component.len().min(3));
    let picks: Vec<&Basis> = component.choose_multiple(rng, size).collect();
    let k = model.coeffs();
    let terms = picks.into_iter().map(|b| (b.clone(), random_coeff(k, rng)));
    RingElement::from_terms(model, terms).expect("sampled terms belong to the model")
}

/// Samples `samples` pairs of nonzero homogeneous elements supported in the
/// radius-`radius` window and checks products against the grading.
pub fn gradation_diagnostics(
    model: &Arc<RingModel>,
    samples: usize,
    radius: usize,
    seed: u64,
) -> DiagnosticsReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let components = basis_by_degree(model, radius);
    let mut zero_products = Vec::new();
    let mut multiplicativity_failures = Vec::new();
    let mut inverse_tried: Vec<GroupElement> = Vec::new();
    let mut nondegenerate: Vec<GroupElement> = Vec::new();
    let mut taken = 0;
    let mut attempts = 0;
    while taken < samples && attempts < samples * 20 {
        attempts += 1;
        let (g, left) = components.choose(&mut rng).unwrap();
        let x = random_homogeneous(model, left, &mut rng);
        if x.is_zero() {
            continue;
        }
        // half the time pick the inverse degree so nondegeneracy gets exercised
        let want_inverse = rng.gen_bool(0.5);
        let right = if want_inverse {
            let ginv = g.inverse();
            match components.iter().find(|(h, _)| *h == ginv) {
                Some(c) => c,
                None => components.choose(&mut rng).unwrap(),
            }
        } else {
            components.choose(&mut rng).unwrap()
        };
        let (h, right) = (&right.0, &right.1);
        let y = random_homogeneous(model, right, &mut rng);
        if y.is_zero() {
            continue;
        }
        taken += 1;
        let xy = x.mul_unchecked(&y);
        let violation = || ProductViolation {
            left: x.to_string(),
            right: y.to_string(),
            product: xy.to_string(),
        };
        let expected = g.mul_unchecked(h);
        if expected.is_identity() && !inverse_tried.contains(g) {
            inverse_tried.push(g.clone());
        }
        if xy.is_zero() {
            zero_products.push(violation());
            continue;
        }
        if xy.degrees().iter().any(|d| *d != expected) {
            multiplicativity_failures.push(violation());
        }
        if expected.is_identity() && !nondegenerate.contains(g) {
            nondegenerate.push(g.clone());
        }
    }
    let nondegeneracy_alarms = if model.grading() == Grading::Trivial {
        Vec::new()
    } else {
        inverse_tried
            .iter()
            .filter(|g| !nondegenerate.contains(g))
            .map(|g| g.to_string())
            .collect()
    };
    DiagnosticsReport {
        model: model.to_string(),
        samples: taken,
        zero_products,
        multiplicativity_failures,
        nondegeneracy_alarms,
    }
}
