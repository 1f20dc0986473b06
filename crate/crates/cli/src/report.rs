//! Machine-readable run reports.

use serde::{Deserialize, Serialize};

use polyvar_core::invariance::{FacetStatus, IterationRecord, SynthesisStatus, VerificationReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub input: String,
    pub options: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub steps_per_axis: usize,
    pub value: f64,
    pub witness: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSection {
    pub d_star: f64,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetEntry {
    pub index: usize,
    pub status: String,
    pub feasible: bool,
    pub d_star: Option<f64>,
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationEntry {
    pub iteration: usize,
    pub offsets: Vec<f64>,
    pub d_star: Vec<Option<f64>>,
    pub improvement: Option<f64>,
    pub alpha: Option<Vec<f64>>,
    pub repaired: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisSection {
    pub status: String,
    pub iterations: Vec<IterationEntry>,
    pub final_offsets: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `bound` finished; no invariance claim is involved.
    Computed,
    Invariant,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: String,
    pub command: CommandEcho,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<FacetEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthesis: Option<SynthesisSection>,
    pub wall_time_seconds: f64,
}

impl RunReport {
    /// 0 for a computed bound or a certified invariant, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Computed | Verdict::Invariant => 0,
            Verdict::NotCertified => 1,
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }
}

pub(crate) fn facet_entries(report: &VerificationReport) -> Vec<FacetEntry> {
    report
        .facets
        .iter()
        .enumerate()
        .map(|(index, f)| {
            let (status, message) = match &f.status {
                FacetStatus::Bounded => ("bounded", None),
                FacetStatus::Empty => ("empty", None),
                FacetStatus::Failed(msg) => ("failed", Some(msg.clone())),
            };
            FacetEntry {
                index,
                status: status.to_string(),
                feasible: f.feasible(),
                d_star: f.d_star,
                lambda: f.lambda.clone(),
                message,
            }
        })
        .collect()
}

pub(crate) fn iteration_entries(records: &[IterationRecord]) -> Vec<IterationEntry> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| IterationEntry {
            iteration: i + 1,
            offsets: r.offsets.clone(),
            d_star: r.bounds.clone(),
            improvement: r.improvement,
            alpha: r.alpha.clone(),
            repaired: r.repaired,
        })
        .collect()
}

pub(crate) fn status_name(status: SynthesisStatus) -> &'static str {
    match status {
        SynthesisStatus::InvariantFound => "invariant_found",
        SynthesisStatus::IterationLimit => "iteration_limit",
        SynthesisStatus::Stalled => "stalled",
    }
}
