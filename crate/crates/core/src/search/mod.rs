//! Exhaustive bounded-support searches for non-homogeneous units,
//! zero-divisors, nontrivial idempotents and nilpotents.
//!
//! Candidates `x` run over all nonzero elements supported in a finite window
//! `W`, ordered by support size, then lexicographically by window position,
//! then by coefficient tuple. For units and zero-divisors the partner `y`
//! ranges over everything supported in a second window `W'`; since `y -> xy`
//! is linear, each candidate costs one linear solve, and most supports are
//! dismissed before any coefficient is chosen (see `space`).
//!
//! Results describe the window only: an empty report means "exhausted
//! window", nothing more.

mod field;
mod hierarchy;
mod linalg;
mod space;
mod task;

pub use hierarchy::{hierarchy_suite, HierarchyReport, KindSummary};
pub use task::{resolve_model, resolve_window, SearchTask, WindowSpec};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::CoeffRing;
use crate::group::{Backend, GroupElement};
use crate::ring::{RingElement, RingError, RingModel};
use field::{Field, PrimeField, RationalField};
use space::Space;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("window has {size} elements, cap is {cap}")]
    WindowCap { size: usize, cap: usize },
    #[error("partner window has {size} elements, cap is {cap}")]
    PartnerCap { size: usize, cap: usize },
    #[error("window is empty")]
    EmptyWindow,
    #[error("searches need a group or twisted group ring, not the {0} model")]
    UnsupportedModel(&'static str),
    #[error("searches need a field of coefficients, got {0}")]
    NotAField(CoeffRing),
    #[error("the bitset engine needs coefficients in F2, got {0}")]
    BitsetNeedsF2(CoeffRing),
    #[error("window element {0} is not in the model's group")]
    ForeignElement(String),
    #[error("reported witness failed re-verification: {0}")]
    UnsoundWitness(String),
    #[error("hierarchy violated on a torsion-free grading: {0}")]
    HierarchyViolation(String),
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchKind {
    Unit,
    #[serde(alias = "zero-divisor")]
    ZeroDivisor,
    Idempotent,
    Nilpotent,
}

impl fmt::Display for SearchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchKind::Unit => "unit",
            SearchKind::ZeroDivisor => "zerodivisor",
            SearchKind::Idempotent => "idempotent",
            SearchKind::Nilpotent => "nilpotent",
        })
    }
}

impl FromStr for SearchKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "unit" | "units" => Ok(SearchKind::Unit),
            "zerodivisor" | "zero-divisor" | "zd" => Ok(SearchKind::ZeroDivisor),
            "idempotent" | "idempotents" => Ok(SearchKind::Idempotent),
            "nilpotent" | "nilpotents" => Ok(SearchKind::Nilpotent),
            _ => Err(format!("unknown search kind `{s}`")),
        }
    }
}

/// Which linear-algebra kernel runs the coefficient-level checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Bitset over `F_2`, generic otherwise.
    #[default]
    Auto,
    Generic,
    Bitset,
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Engine::Auto),
            "generic" => Ok(Engine::Generic),
            "bitset" => Ok(Engine::Bitset),
            _ => Err(format!("unknown engine `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub kind: SearchKind,
    pub central_only: bool,
    pub require_non_homogeneous: bool,
    /// Over `Q`, coefficients range over `+-1 ..= +-bound`.
    pub coefficient_bound: u32,
    pub time_budget: Option<Duration>,
    pub engine: Engine,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub max_witnesses: usize,
    pub window_cap: usize,
    pub partner_cap: usize,
}

impl SearchOptions {
    pub fn new(kind: SearchKind) -> Self {
        SearchOptions {
            kind,
            central_only: false,
            require_non_homogeneous: false,
            coefficient_bound: 1,
            time_budget: None,
            engine: Engine::Auto,
            jobs: None,
            max_witnesses: 1000,
            window_cap: 24,
            partner_cap: 4096,
        }
    }

    pub fn non_homogeneous(mut self) -> Self {
        self.require_non_homogeneous = true;
        self
    }

    pub fn central(mut self) -> Self {
        self.central_only = true;
        self
    }

    pub fn engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }
}

/// A reported candidate: `x` alone (idempotent, nilpotent) or a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "crate::report::display")]
    pub x: RingElement,
    #[serde(serialize_with = "crate::report::display_opt")]
    pub y: Option<RingElement>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Supports visited.
    pub supports: u64,
    /// Supports dismissed without choosing coefficients.
    pub support_certified: u64,
    /// Candidates `x` covered, certified or checked individually.
    pub candidates: u64,
    pub coefficient_checks: u64,
    pub linear_solves: u64,
}

/// What the search was asked to do, as echoed in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaskEcho {
    pub model: String,
    pub field: String,
    pub kind: SearchKind,
    pub window: Vec<String>,
    pub partner_window: Vec<String>,
    pub central_only: bool,
    pub require_non_homogeneous: bool,
    pub coefficient_bound: Option<u32>,
    pub time_budget_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub task: TaskEcho,
    pub witnesses: Vec<Witness>,
    /// All witnesses found; `witnesses` holds at most `max_witnesses`.
    pub witness_count: u64,
    /// The whole window was covered.
    pub exhausted: bool,
    pub stats: SearchStats,
    /// Wall time; not part of equality or the default JSON output.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for SearchReport {
    fn eq(&self, other: &Self) -> bool {
        self.task == other.task
            && self.witnesses == other.witnesses
            && self.witness_count == other.witness_count
            && self.exhausted == other.exhausted
            && self.stats == other.stats
    }
}

impl Eq for SearchReport {}

/// Default partner window `{g^-1 h : g in W, h in W + {e}}`, sorted.
pub fn default_partner_window(window: &[GroupElement]) -> Vec<GroupElement> {
    let Some(first) = window.first() else {
        return Vec::new();
    };
    let e = first.backend().identity();
    let mut out = BTreeSet::new();
    for g in window {
        let gi = g.inverse();
        out.insert(gi.mul_unchecked(&e));
        for h in window {
            out.insert(gi.mul_unchecked(h));
        }
    }
    out.into_iter().collect()
}

fn dedup_in_order(v: &[GroupElement]) -> Vec<GroupElement> {
    let mut seen = BTreeSet::new();
    v.iter().filter(|g| seen.insert((*g).clone())).cloned().collect()
}

fn check_backend(model: &RingModel, set: &[GroupElement]) -> Result<Backend, SearchError> {
    let backend = model.backend().ok_or(SearchError::UnsupportedModel(model.kind_name()))?;
    if let Some(g) = set.iter().find(|g| g.backend() != backend) {
        return Err(SearchError::ForeignElement(g.to_string()));
    }
    Ok(backend)
}

/// Runs one search over `window` with partner window `partner` (default:
/// [`default_partner_window`]).
pub fn search(
    model: &Arc<RingModel>,
    window: &[GroupElement],
    partner: Option<&[GroupElement]>,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    let window = dedup_in_order(window);
    check_backend(model, &window)?;
    if window.is_empty() {
        return Err(SearchError::EmptyWindow);
    }
    let cap = opts.window_cap.min(63);
    if window.len() > cap {
        return Err(SearchError::WindowCap { size: window.len(), cap });
    }
    let partner = match partner {
        Some(p) => dedup_in_order(p),
        None => default_partner_window(&window),
    };
    check_backend(model, &partner)?;
    if partner.len() > opts.partner_cap {
        return Err(SearchError::PartnerCap { size: partner.len(), cap: opts.partner_cap });
    }
    let coeffs = model.coeffs();
    let echo = TaskEcho {
        model: model.to_string(),
        field: coeffs.to_string(),
        kind: opts.kind,
        window: window.iter().map(|g| g.to_string()).collect(),
        partner_window: partner.iter().map(|g| g.to_string()).collect(),
        central_only: opts.central_only,
        require_non_homogeneous: opts.require_non_homogeneous,
        coefficient_bound: (coeffs == CoeffRing::Rationals).then_some(opts.coefficient_bound),
        time_budget_ms: opts.time_budget.map(|d| d.as_millis() as u64),
    };
    let run = || match coeffs {
        CoeffRing::Prime(p) => {
            let bitset = match opts.engine {
                Engine::Auto => p == 2,
                Engine::Generic => false,
                Engine::Bitset if p == 2 => true,
                Engine::Bitset => return Err(SearchError::BitsetNeedsF2(coeffs)),
            };
            let space = Space::new(PrimeField { p }, model.clone(), &window, &partner, bitset);
            run_space(&space, opts, echo)
        }
        CoeffRing::Rationals => {
            if opts.engine == Engine::Bitset {
                return Err(SearchError::BitsetNeedsF2(coeffs));
            }
            let space = Space::new(RationalField { bound: opts.coefficient_bound.max(1) }, model.clone(), &window, &partner, false);
            run_space(&space, opts, echo)
        }
        CoeffRing::Integers => Err(SearchError::NotAField(coeffs)),
    };
    match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| SearchError::InvalidTask(e.to_string()))?
            .install(run),
        None => run(),
    }
}

struct ChunkResult {
    witnesses: Vec<Witness>,
    witness_total: u64,
    stats: SearchStats,
    complete: bool,
}

/// Visits supports of size `k` whose least window position is `first`, in
/// lexicographic order.
fn run_chunk<F: Field>(
    space: &Space<F>,
    opts: &SearchOptions,
    k: usize,
    first: usize,
    candidates: &[F::E],
    cancel: &AtomicBool,
    deadline: Option<Instant>,
) -> Result<ChunkResult, SearchError> {
    let n = space.window.len();
    let mut out = ChunkResult { witnesses: Vec::new(), witness_total: 0, stats: SearchStats::default(), complete: true };
    let mut scratch = space.scratch();
    let mut support: Vec<usize> = std::iter::once(first).chain(first + 1..first + k).collect();
    let per_support = (candidates.len() as u64).saturating_pow(k as u32);
    let mut visited: u64 = 0;
    loop {
        if visited.is_multiple_of(64) {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                cancel.store(true, Ordering::Relaxed);
            }
            if cancel.load(Ordering::Relaxed) {
                out.complete = false;
                return Ok(out);
            }
        }
        visited += 1;
        let mask = support.iter().fold(0u64, |m, &i| m | 1 << i);
        out.stats.supports += 1;
        if !(opts.require_non_homogeneous && space.is_homogeneous(&support)) {
            out.stats.candidates = out.stats.candidates.saturating_add(per_support);
            let s = space.run_support(
                opts.kind,
                opts.central_only,
                &support,
                mask,
                candidates,
                &mut scratch,
                &mut out.witnesses,
                &mut out.witness_total,
                opts.max_witnesses,
            );
            out.stats.support_certified += u64::from(s.certified);
            out.stats.coefficient_checks += s.coefficient_checks;
            out.stats.linear_solves += s.linear_solves;
        }
        // advance positions 1..k, keeping position 0 fixed
        let mut i = k;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            if support[i] < n - (k - i) {
                support[i] += 1;
                for j in i + 1..k {
                    support[j] = support[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn run_space<F: Field>(space: &Space<F>, opts: &SearchOptions, task: TaskEcho) -> Result<SearchReport, SearchError> {
    let start = Instant::now();
    let deadline = opts.time_budget.map(|d| start + d);
    let cancel = AtomicBool::new(false);
    let candidates = space.field.candidates();
    let n = space.window.len();
    let chunks: Vec<(usize, usize)> = (1..=n).flat_map(|k| (0..=n - k).map(move |i| (k, i))).collect();
    let results: Vec<Result<ChunkResult, SearchError>> = chunks
        .par_iter()
        .map(|&(k, i)| run_chunk(space, opts, k, i, &candidates, &cancel, deadline))
        .collect();
    let mut report = SearchReport {
        task,
        witnesses: Vec::new(),
        witness_count: 0,
        exhausted: true,
        stats: SearchStats::default(),
        elapsed: Duration::ZERO,
    };
    for r in results {
        let r = r?;
        report.exhausted &= r.complete;
        report.witness_count += r.witness_total;
        for w in r.witnesses {
            if report.witnesses.len() < opts.max_witnesses {
                report.witnesses.push(w);
            }
        }
        let s = &mut report.stats;
        s.supports += r.stats.supports;
        s.support_certified += r.stats.support_certified;
        s.candidates = s.candidates.saturating_add(r.stats.candidates);
        s.coefficient_checks += r.stats.coefficient_checks;
        s.linear_solves += r.stats.linear_solves;
    }
    for w in &report.witnesses {
        let v = verify_identity(&w.x, w.y.as_ref(), opts.kind)?;
        if !v.holds {
            return Err(SearchError::UnsoundWitness(format!("x = {}, y = {:?}", w.x, w.y.as_ref().map(|y| y.to_string()))));
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

pub fn search_units(task: &SearchTask) -> Result<SearchReport, SearchError> {
    task.run_as(SearchKind::Unit)
}

pub fn search_zero_divisors(task: &SearchTask) -> Result<SearchReport, SearchError> {
    task.run_as(SearchKind::ZeroDivisor)
}

pub fn search_idempotents(task: &SearchTask) -> Result<SearchReport, SearchError> {
    task.run_as(SearchKind::Idempotent)
}

pub fn search_nilpotents(task: &SearchTask) -> Result<SearchReport, SearchError> {
    task.run_as(SearchKind::Nilpotent)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub kind: SearchKind,
    pub holds: bool,
    /// `xy`, or `x^2` for idempotent and nilpotent checks.
    #[serde(serialize_with = "crate::report::display")]
    pub product: RingElement,
    /// `yx` for unit checks.
    #[serde(serialize_with = "crate::report::display_opt")]
    pub reverse_product: Option<RingElement>,
}

/// Recomputes the defining identity exactly: `xy = yx = 1` (unit), `xy = 0`
/// with `x, y != 0` (zero-divisor), `x^2 = x` with `x != 0, 1` (idempotent),
/// `x^2 = 0` with `x != 0` (nilpotent). `y` is ignored for the last two.
pub fn verify_identity(x: &RingElement, y: Option<&RingElement>, kind: SearchKind) -> Result<Verification, SearchError> {
    let need_y = || y.ok_or_else(|| SearchError::InvalidTask(format!("{kind} check needs y")));
    Ok(match kind {
        SearchKind::Unit => {
            let y = need_y()?;
            let xy = x.mul(y)?;
            let yx = y.mul(x)?;
            Verification { kind, holds: xy.is_one() && yx.is_one(), product: xy, reverse_product: Some(yx) }
        }
        SearchKind::ZeroDivisor => {
            let y = need_y()?;
            let xy = x.mul(y)?;
            Verification { kind, holds: xy.is_zero() && !x.is_zero() && !y.is_zero(), product: xy, reverse_product: None }
        }
        SearchKind::Idempotent => {
            let xx = x.mul(x)?;
            Verification { kind, holds: xx == *x && !x.is_zero() && !x.is_one(), product: xx, reverse_product: None }
        }
        SearchKind::Nilpotent => {
            let xx = x.mul(x)?;
            Verification { kind, holds: xx.is_zero() && !x.is_zero(), product: xx, reverse_product: None }
        }
    })
}

/// For one fixed `x`: a partner `y` supported in `partner` with `xy = yx = 1`
/// (unit) or `xy = 0`, `y != 0` (zero-divisor), if one exists.
pub fn partner_for(x: &RingElement, partner: &[GroupElement], kind: SearchKind) -> Result<Option<RingElement>, SearchError> {
    if !matches!(kind, SearchKind::Unit | SearchKind::ZeroDivisor) {
        return Err(SearchError::InvalidTask(format!("no partner for {kind} checks")));
    }
    let model = x.model();
    let support = x.group_support();
    check_backend(model, &support)?;
    check_backend(model, partner)?;
    if x.is_zero() || partner.is_empty() {
        return Ok(None);
    }
    let partner = dedup_in_order(partner);
    if support.len() > 63 {
        return Err(SearchError::WindowCap { size: support.len(), cap: 63 });
    }
    fn go<F: Field>(
        f: F,
        x: &RingElement,
        support: &[GroupElement],
        partner: &[GroupElement],
        kind: SearchKind,
    ) -> Option<RingElement> {
        let coeffs: Vec<F::E> =
            support.iter().map(|g| f.lift(&x.coefficient(&crate::ring::Basis::Group(g.clone())))).collect();
        let space = Space::new(f, x.model().clone(), support, partner, false);
        let positions: Vec<usize> = (0..support.len()).collect();
        let mask = (1u64 << support.len()) - 1;
        let mut s = space.scratch();
        let cols = space.certify(kind, &positions, mask, &mut s)?;
        space.check_candidate(kind, &positions, mask, &coeffs, &cols, &mut s)?.y
    }
    match model.coeffs() {
        CoeffRing::Prime(p) => Ok(go(PrimeField { p }, x, &support, &partner, kind)),
        CoeffRing::Rationals => Ok(go(RationalField { bound: 1 }, x, &support, &partner, kind)),
        c => Err(SearchError::NotAField(c)),
    }
}
