//! Unique products of finite subsets and randomized non-UP witness search.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{ball, Backend, GroupElement, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UpError {
    #[error("input set is empty")]
    EmptyInput,
    #[error("set size must be at least 2, got {0}")]
    SizeTooSmall(usize),
    #[error("{0} is not a unique-product backend")]
    NotUniqueProduct(Backend),
    #[error("|A| + |B| must exceed 2")]
    TooFewElements,
    #[error("theorem violation: only {found} unique products of {a:?} * {b:?} on {backend}")]
    TheoremViolation { backend: Backend, found: usize, a: Vec<String>, b: Vec<String> },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A product `g = a b` with no other factorization in `A x B`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct UniqueProduct {
    #[serde(serialize_with = "crate::report::display")]
    pub product: GroupElement,
    #[serde(serialize_with = "crate::report::display")]
    pub left: GroupElement,
    #[serde(serialize_with = "crate::report::display")]
    pub right: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpReport {
    #[serde(serialize_with = "crate::report::display_seq")]
    pub a: Vec<GroupElement>,
    #[serde(serialize_with = "crate::report::display_seq")]
    pub b: Vec<GroupElement>,
    /// Sorted by product.
    pub unique: Vec<UniqueProduct>,
    pub total_products: usize,
    pub two_up: bool,
}

fn normalize(set: &[GroupElement]) -> Result<Vec<GroupElement>, UpError> {
    let s: BTreeSet<GroupElement> = set.iter().cloned().collect();
    if s.is_empty() {
        return Err(UpError::EmptyInput);
    }
    Ok(s.into_iter().collect())
}

/// Enumerates all `|A||B|` products, sorts them, and keeps the runs of
/// length one.
pub fn unique_products(a: &[GroupElement], b: &[GroupElement]) -> Result<UpReport, UpError> {
    let a = normalize(a)?;
    let b = normalize(b)?;
    let backend = a[0].backend();
    for g in a.iter().chain(&b) {
        if g.backend() != backend {
            return Err(GroupError::BackendMismatch(backend, g.backend()).into());
        }
    }
    let mut products: Vec<(GroupElement, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            products.push((x.mul_unchecked(y), i, j));
        }
    }
    products.sort();
    let mut unique = Vec::new();
    let mut start = 0;
    while start < products.len() {
        let mut end = start + 1;
        while end < products.len() && products[end].0 == products[start].0 {
            end += 1;
        }
        if end - start == 1 {
            let (g, i, j) = &products[start];
            unique.push(UniqueProduct { product: g.clone(), left: a[*i].clone(), right: b[*j].clone() });
        }
        start = end;
    }
    let two_up = unique.len() >= 2 || a.len() + b.len() <= 2;
    Ok(UpReport { total_products: products.len(), a, b, unique, two_up })
}

/// On a unique-product backend, returns the least and greatest unique
/// products of `A B` in canonical order. Fewer than two is a theorem
/// violation.
pub fn up_oracle_check(
    a: &[GroupElement],
    b: &[GroupElement],
) -> Result<(UniqueProduct, UniqueProduct), UpError> {
    let report = unique_products(a, b)?;
    let backend = report.a[0].backend();
    if !backend.is_unique_product() {
        return Err(UpError::NotUniqueProduct(backend));
    }
    if report.a.len() + report.b.len() <= 2 {
        return Err(UpError::TooFewElements);
    }
    if report.unique.len() < 2 {
        return Err(UpError::TheoremViolation {
            backend,
            found: report.unique.len(),
            a: report.a.iter().map(|g| g.to_string()).collect(),
            b: report.b.iter().map(|g| g.to_string()).collect(),
        });
    }
    let mut unique = report.unique;
    let last = unique.pop().unwrap();
    Ok((unique.swap_remove(0), last))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonUpSearch {
    pub backend: String,
    pub size: usize,
    pub radius: usize,
    pub seed: u64,
    pub attempts: u64,
    /// Index of the attempt that produced the witness.
    pub found_at: Option<u64>,
    #[serde(serialize_with = "crate::report::display_opt_seq")]
    pub witness: Option<Vec<GroupElement>>,
}

fn attempt_rng(seed: u64, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// Tries `attempts` uniform random `size`-subsets `S` of `ball(radius)`,
/// looking for `S` with no unique product in `S S`. Each attempt has its own
/// RNG stream, and the lowest successful attempt index wins, so the result
/// does not depend on scheduling.
pub fn find_non_up_square_set(
    backend: Backend,
    size: usize,
    radius: usize,
    seed: u64,
    attempts: u64,
) -> Result<NonUpSearch, UpError> {
    if size < 2 {
        return Err(UpError::SizeTooSmall(size));
    }
    let window = ball(backend, radius);
    let mut out = NonUpSearch {
        backend: backend.to_string(),
        size,
        radius,
        seed,
        attempts,
        found_at: None,
        witness: None,
    };
    if size > window.len() {
        return Ok(out);
    }
    let hit = (0..attempts).into_par_iter().find_first(|&attempt| {
        let mut rng = attempt_rng(seed, attempt);
        let set: Vec<GroupElement> =
            sample(&mut rng, window.len(), size).into_iter().map(|i| window[i].clone()).collect();
        unique_products(&set, &set).map(|r| r.unique.is_empty()).unwrap_or(false)
    });
    if let Some(attempt) = hit {
        let mut rng = attempt_rng(seed, attempt);
        let mut set: Vec<GroupElement> =
            sample(&mut rng, window.len(), size).into_iter().map(|i| window[i].clone()).collect();
        set.sort();
        out.found_at = Some(attempt);
        out.witness = Some(set);
    }
    Ok(out)
}

/// Repeatedly drops the factors of unique products of `S S` until none are
/// left. What remains (possibly empty) has no unique product in `S S`.
pub fn prune_to_non_up_core(set: &[GroupElement]) -> Vec<GroupElement> {
    let mut s: BTreeSet<GroupElement> = set.iter().cloned().collect();
    while !s.is_empty() {
        let v: Vec<GroupElement> = s.iter().cloned().collect();
        let report = unique_products(&v, &v).expect("nonempty");
        if report.unique.is_empty() {
            break;
        }
        for u in report.unique {
            s.remove(&u.left);
            s.remove(&u.right);
        }
    }
    s.into_iter().collect()
}

const PROMISLOW_FIXTURE: &str = include_str!("../fixtures/promislow_s14.txt");

/// The shipped 14-element subset of the Promislow group whose square has no
/// unique product.
pub fn promislow_witness() -> Vec<GroupElement> {
    PROMISLOW_FIXTURE
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| crate::expr::parse_group_element(l, Backend::Promislow).expect("fixture word parses"))
        .collect()
}
