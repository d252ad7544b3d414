//! Window-scale consistency check of the implication chain
//! "units homogeneous => reduced => domain => idempotents trivial".

use std::sync::Arc;

use serde::Serialize;

use super::{search, SearchError, SearchKind, SearchOptions, SearchReport};
use crate::group::{Backend, GroupElement};
use crate::ring::{Grading, RingModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KindSummary {
    pub kind: SearchKind,
    pub witness_count: u64,
    pub exhausted: bool,
    /// First witness, as `x` or `x ; y`.
    pub first: Option<String>,
}

impl KindSummary {
    fn of(r: &SearchReport) -> Self {
        KindSummary {
            kind: r.task.kind,
            witness_count: r.witness_count,
            exhausted: r.exhausted,
            first: r.witnesses.first().map(|w| match &w.y {
                Some(y) => format!("{} ; {}", w.x, y),
                None => w.x.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyReport {
    pub model: String,
    pub window: Vec<String>,
    /// Non-homogeneous units, nilpotents, zero-divisors, idempotents.
    pub searches: Vec<KindSummary>,
    /// Whether the grading meets the hypotheses (torsion-free group,
    /// identity component a field).
    pub hypotheses_hold: bool,
    pub consistent: bool,
    pub flag: Option<String>,
    pub violations: Vec<String>,
}

fn hypotheses(model: &RingModel) -> Result<(), &'static str> {
    if model.grading() == Grading::Trivial {
        return Err("hierarchy hypotheses violated: trivial grading");
    }
    match model.grading_backend() {
        b if !b.is_torsion_free() => Err("hierarchy hypotheses violated: torsion grading"),
        Backend::Cyclic { .. } | Backend::KleinFour => Err("hierarchy hypotheses violated: torsion grading"),
        _ => Ok(()),
    }
}

/// Runs the four searches on one window and checks that emptiness
/// propagates down the chain unit -> nilpotent -> zero-divisor ->
/// idempotent. On a torsion-free grading a break is an error; otherwise it
/// is reported under `flag`.
pub fn hierarchy_suite(
    model: &Arc<RingModel>,
    window: &[GroupElement],
    base: &SearchOptions,
) -> Result<HierarchyReport, SearchError> {
    let run = |kind: SearchKind| {
        let mut o = base.clone();
        o.kind = kind;
        o.require_non_homogeneous = kind == SearchKind::Unit;
        search(model, window, None, &o)
    };
    let reports = [
        run(SearchKind::Unit)?,
        run(SearchKind::Nilpotent)?,
        run(SearchKind::ZeroDivisor)?,
        run(SearchKind::Idempotent)?,
    ];
    let names = ["non-homogeneous units", "nilpotents", "zero-divisors", "nontrivial idempotents"];
    let mut violations = Vec::new();
    for i in 0..3 {
        if reports[i].witness_count == 0 && reports[i + 1].witness_count > 0 {
            violations.push(format!(
                "no {} but {} {}",
                names[i],
                reports[i + 1].witness_count,
                names[i + 1]
            ));
        }
    }
    let hyp = hypotheses(model);
    let report = HierarchyReport {
        model: model.to_string(),
        window: reports[0].task.window.clone(),
        searches: reports.iter().map(KindSummary::of).collect(),
        hypotheses_hold: hyp.is_ok(),
        consistent: violations.is_empty(),
        flag: match (&hyp, violations.is_empty()) {
            (Err(msg), false) => Some(msg.to_string()),
            _ => None,
        },
        violations,
    };
    if hyp.is_ok() && !report.consistent {
        return Err(SearchError::HierarchyViolation(report.violations.join("; ")));
    }
    Ok(report)
}
