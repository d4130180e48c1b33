//! Machine checks for the constructive premises behind the collapse move,
//! and hash-chained certificates that replay whole move sequences.
//!
//! A collapse from `Q` onto a kept vertex set is an equivalence move when
//! its preconditions hold (sinks kept, cycles met), the generator family it
//! induces satisfies the defining relations of the collapsed quiver's
//! Leavitt path algebra, the kept vertices have full hereditary saturated
//! closure, and the edge weights admit a positive `(1/n)Z` grading giving
//! every origin path degree one. All four facts are computed here, stored
//! in certificates, and re-checked on replay.

mod certificate;
mod family;

pub use certificate::{
    build_certificate, check_certificate, Certificate, CheckFailure, CheckReport,
    CollapsePayload, MoveRecord, StepPayload,
};
pub use family::{
    express_in_corner, q_prime_family, substitute_origins, verify_q_prime_family, FamilyCheck,
    FamilyIdentity, FamilyReport, QPrimeFamily,
};

use crate::algebra::AlgebraError;
use crate::moves::MoveError;
use crate::quiver::{ClosureTrace, Quiver, QuiverError, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("monomial lies outside the corner: {0}")]
    MonomialOutsideCorner(String),
    #[error("failed to re-express a corner monomial over the generator family: {0}")]
    Reexpression(String),
    #[error("certificate step {index} (`{name}`) cannot be certified: {reason}")]
    StepFailed {
        index: usize,
        name: String,
        reason: String,
    },
    #[error("bad certificate JSON: {0}")]
    Json(String),
}

/// Pass/fail record for the hypotheses of the collapse move, plus the
/// derived reachability consequence (every dropped vertex reaches the kept
/// set, which follows from the two hypotheses but is checked on its own).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionReport {
    pub keep_nonempty: bool,
    /// Sinks that must be kept but are not.
    pub sinks_outside_keep: Vec<VertexId>,
    /// A cycle avoiding the kept set, if one exists.
    pub cycle_avoiding_keep: Option<Vec<VertexId>>,
    /// Dropped vertices with no path into the kept set.
    pub dropped_not_reaching: Vec<VertexId>,
}

impl PreconditionReport {
    pub fn ok(&self) -> bool {
        self.keep_nonempty
            && self.sinks_outside_keep.is_empty()
            && self.cycle_avoiding_keep.is_none()
            && self.dropped_not_reaching.is_empty()
    }

    pub fn describe(&self) -> String {
        if self.ok() {
            return "all collapse preconditions hold".into();
        }
        let mut parts = Vec::new();
        if !self.keep_nonempty {
            parts.push("kept set is empty".to_owned());
        }
        if !self.sinks_outside_keep.is_empty() {
            let list: Vec<_> = self
                .sinks_outside_keep
                .iter()
                .map(ToString::to_string)
                .collect();
            parts.push(format!("sinks outside kept set: {}", list.join(", ")));
        }
        if let Some(cycle) = &self.cycle_avoiding_keep {
            let list: Vec<_> = cycle.iter().map(ToString::to_string).collect();
            parts.push(format!("cycle avoiding kept set: {}", list.join(" -> ")));
        }
        if !self.dropped_not_reaching.is_empty() {
            let list: Vec<_> = self
                .dropped_not_reaching
                .iter()
                .map(ToString::to_string)
                .collect();
            parts.push(format!(
                "dropped vertices not reaching kept set: {}",
                list.join(", ")
            ));
        }
        parts.join("; ")
    }
}

/// Check each collapse hypothesis and report pass/fail per item. Unknown
/// vertex ids are an error; everything else is reported, not thrown.
pub fn check_collapse_preconditions(
    q: &Quiver,
    keep: &BTreeSet<VertexId>,
) -> Result<PreconditionReport, QuiverError> {
    q.check_vertices(keep)?;
    let sinks_outside_keep = q
        .sinks()
        .filter(|s| !keep.contains(*s))
        .cloned()
        .collect();
    let cycle_avoiding_keep = q.find_cycle_avoiding(keep)?;
    let mut dropped_not_reaching = Vec::new();
    if !keep.is_empty() {
        for v in q.vertices() {
            if !keep.contains(v) && !q.reaches_set(v, keep)? {
                dropped_not_reaching.push(v.clone());
            }
        }
    }
    Ok(PreconditionReport {
        keep_nonempty: !keep.is_empty(),
        sinks_outside_keep,
        cycle_avoiding_keep,
        dropped_not_reaching,
    })
}

/// Result of the corner-fullness check: whether the hereditary saturated
/// closure of the kept set is the whole vertex set, with the closure levels
/// as evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullnessReport {
    pub full: bool,
    pub trace: ClosureTrace,
}

/// Check that the kept vertices generate everything: their hereditary
/// saturated closure equals the whole vertex set, which makes the sum of
/// their idempotents a full idempotent of the path algebra.
pub fn verify_fullness(
    q: &Quiver,
    keep: &BTreeSet<VertexId>,
) -> Result<FullnessReport, QuiverError> {
    let trace = q.closure_trace(keep)?;
    let full = trace.closure.len() == q.vertex_count();
    Ok(FullnessReport { full, trace })
}
