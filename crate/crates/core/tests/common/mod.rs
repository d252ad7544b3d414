//! Shared generators for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use gradlab::coeff::{Coeff, CoeffRing};
use gradlab::group::{Backend, GroupElement};
use gradlab::ring::{Basis, RingElement, RingModel};
use num_bigint::BigInt;
use proptest::prelude::*;

pub const INFINITE_BACKENDS: [Backend; 8] = [
    Backend::Abelian { rank: 1 },
    Backend::Abelian { rank: 2 },
    Backend::Abelian { rank: 3 },
    Backend::Free { rank: 2 },
    Backend::Heisenberg,
    Backend::Klein,
    Backend::Promislow,
    Backend::Free { rank: 1 },
];

pub const ALL_BACKENDS: [Backend; 10] = [
    Backend::Abelian { rank: 1 },
    Backend::Abelian { rank: 2 },
    Backend::Abelian { rank: 3 },
    Backend::Free { rank: 2 },
    Backend::Free { rank: 3 },
    Backend::Heisenberg,
    Backend::Klein,
    Backend::Promislow,
    Backend::Cyclic { order: 5 },
    Backend::KleinFour,
];

/// Product of `steps` symmetric generators, each picked by index.
pub fn word(backend: Backend, steps: &[usize]) -> GroupElement {
    let gens = backend.symmetric_generators();
    steps.iter().fold(backend.identity(), |acc, &i| acc.compose(&gens[i % gens.len()]).unwrap())
}

pub fn element_in(backend: Backend, max_len: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(0usize..64, 0..=max_len).prop_map(move |steps| word(backend, &steps))
}

pub fn any_backend() -> impl Strategy<Value = Backend> {
    prop::sample::select(ALL_BACKENDS.to_vec())
}

pub fn coeff(k: CoeffRing, num: i64, den: i64) -> Coeff {
    match k {
        CoeffRing::Rationals => k.from_fraction(&BigInt::from(num), &BigInt::from(den.max(1))).unwrap(),
        _ => k.from_i64(num),
    }
}

/// A group-graded element with up to `terms` terms of word length at most
/// `max_len`.
pub fn group_element_of(model: Arc<RingModel>, terms: usize, max_len: usize) -> impl Strategy<Value = RingElement> {
    let backend = model.backend().unwrap();
    prop::collection::vec((element_in(backend, max_len), -4i64..5, 1i64..4), 0..=terms).prop_map(move |ts| {
        let k = model.coeffs();
        RingElement::from_group_terms(&model, ts.into_iter().map(|(g, n, d)| (g, coeff(k, n, d)))).unwrap()
    })
}

pub fn weyl_element_of(model: Arc<RingModel>, terms: usize) -> impl Strategy<Value = RingElement> {
    prop::collection::vec((0u32..4, 0u32..4, -4i64..5, 1i64..4), 0..=terms).prop_map(move |ts| {
        let k = model.coeffs();
        RingElement::from_terms(&model, ts.into_iter().map(|(i, j, n, d)| (Basis::Weyl(i, j), coeff(k, n, d)))).unwrap()
    })
}

/// Any element of `model`, whatever its kind.
pub fn element_of(model: Arc<RingModel>, terms: usize) -> BoxedStrategy<RingElement> {
    if model.backend().is_some() {
        group_element_of(model, terms, 3).boxed()
    } else {
        weyl_element_of(model, terms).boxed()
    }
}

pub fn models() -> Vec<Arc<RingModel>> {
    let mut out = Vec::new();
    for k in [CoeffRing::Prime(2), CoeffRing::Prime(3), CoeffRing::Integers, CoeffRing::Rationals] {
        for b in ALL_BACKENDS {
            out.push(RingModel::group_ring(b, k));
        }
    }
    out.push(RingModel::quaternions(CoeffRing::Rationals).unwrap());
    out.push(RingModel::quaternions(CoeffRing::Prime(3)).unwrap());
    out.push(RingModel::weyl(CoeffRing::Rationals));
    out.push(RingModel::weyl(CoeffRing::Prime(5)));
    out
}
