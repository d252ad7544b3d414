//! Declarative search tasks, as read from job files or CLI flags.

use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{search, Engine, SearchError, SearchKind, SearchOptions, SearchReport};
use crate::coeff::CoeffRing;
use crate::expr::parse_group_set;
use crate::group::{ball, Backend, GroupElement};
use crate::ring::RingModel;

/// `ball:<r>`, a comma-separated word list, or a list of words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WindowSpec {
    Text(String),
    Words(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchTask {
    /// `groupring`, `quaternion` (alias `twisted`) or `weyl`.
    pub model: String,
    #[serde(default)]
    pub group: Option<String>,
    pub field: String,
    pub kind: SearchKind,
    pub window: WindowSpec,
    #[serde(default)]
    pub partner_window: Option<WindowSpec>,
    #[serde(default)]
    pub central_only: bool,
    #[serde(default)]
    pub require_non_homogeneous: bool,
    #[serde(default)]
    pub coefficient_bound: Option<u32>,
    #[serde(default)]
    pub time_budget_ms: Option<u64>,
    /// Recorded for reproducibility; the searches are deterministic.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub engine: Option<Engine>,
    #[serde(default)]
    pub window_cap: Option<usize>,
}

fn invalid(msg: impl ToString) -> SearchError {
    SearchError::InvalidTask(msg.to_string())
}

/// Builds a ring model from its CLI/job-file description.
pub fn resolve_model(model: &str, group: Option<&str>, field: &str) -> Result<Arc<RingModel>, SearchError> {
    let coeffs: CoeffRing = field.parse().map_err(invalid)?;
    match model.to_ascii_lowercase().as_str() {
        "groupring" | "group-ring" | "group" => {
            let g = group.ok_or_else(|| invalid("group ring model needs --group"))?;
            let backend: Backend = g.parse().map_err(invalid)?;
            Ok(RingModel::group_ring(backend, coeffs))
        }
        "quaternion" | "quaternions" | "twisted" => {
            if let Some(g) = group {
                if g.parse::<Backend>().map_err(invalid)? != Backend::KleinFour {
                    return Err(invalid("the twisted model is graded by v4"));
                }
            }
            RingModel::quaternions(coeffs).map_err(invalid)
        }
        "weyl" => Ok(RingModel::weyl(coeffs)),
        other => Err(invalid(format!("unknown model `{other}`"))),
    }
}

pub fn resolve_window(spec: &WindowSpec, backend: Backend) -> Result<Vec<GroupElement>, SearchError> {
    match spec {
        WindowSpec::Text(t) => {
            if let Some(r) = t.trim().strip_prefix("ball:") {
                let r: usize = r.trim().parse().map_err(|_| invalid(format!("bad ball radius in `{t}`")))?;
                Ok(ball(backend, r))
            } else {
                parse_group_set(t, backend).map_err(invalid)
            }
        }
        WindowSpec::Words(words) => {
            let mut out = Vec::new();
            for w in words {
                out.extend(parse_group_set(w, backend).map_err(invalid)?);
            }
            Ok(out)
        }
    }
}

impl SearchTask {
    pub fn model(&self) -> Result<Arc<RingModel>, SearchError> {
        resolve_model(&self.model, self.group.as_deref(), &self.field)
    }

    pub fn options(&self) -> SearchOptions {
        let mut o = SearchOptions::new(self.kind);
        o.central_only = self.central_only;
        o.require_non_homogeneous = self.require_non_homogeneous;
        o.coefficient_bound = self.coefficient_bound.unwrap_or(1);
        o.time_budget = self.time_budget_ms.map(Duration::from_millis);
        o.engine = self.engine.unwrap_or_default();
        o.jobs = self.jobs;
        if let Some(c) = self.window_cap {
            o.window_cap = c;
        }
        o
    }

    pub fn run(&self) -> Result<SearchReport, SearchError> {
        let model = self.model()?;
        let backend = model.backend().ok_or(SearchError::UnsupportedModel(model.kind_name()))?;
        let window = resolve_window(&self.window, backend)?;
        let partner = self.partner_window.as_ref().map(|p| resolve_window(p, backend)).transpose()?;
        search(&model, &window, partner.as_deref(), &self.options())
    }

    pub(crate) fn run_as(&self, kind: SearchKind) -> Result<SearchReport, SearchError> {
        if self.kind != kind {
            return Err(invalid(format!("task kind is {}, expected {kind}", self.kind)));
        }
        self.run()
    }
}
