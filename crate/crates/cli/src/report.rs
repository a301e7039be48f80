use epkit::{ClassificationReport, FamilyId, LimitRow, ToleranceConfig};
use epkit_harness::TheoremVerdict;
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub tool_version: String,
    pub tolerance: ToleranceConfig,
    pub payload: Payload,
    /// Zero unless timing was requested.
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Classification(ClassificationReport),
    Verdict(TheoremVerdict),
    Suite(SuiteReport),
    LimitStudy(LimitStudy),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub dim: usize,
    pub rank: usize,
    pub trials: usize,
    pub passed: bool,
    pub verdicts: Vec<TheoremVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitStudy {
    pub family: FamilyId,
    pub n_max: usize,
    pub rows: Vec<LimitRow>,
}

impl ReportFile {
    pub fn new(tolerance: ToleranceConfig, payload: Payload) -> Self {
        ReportFile {
            tool_version: TOOL_VERSION.to_string(),
            tolerance,
            payload,
            wall_time_ms: 0,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Whether the report records a property that did not hold.
    pub fn violated(&self) -> bool {
        match &self.payload {
            Payload::Verdict(v) => !v.passed(),
            Payload::Suite(s) => !s.passed,
            Payload::Classification(_) | Payload::LimitStudy(_) => false,
        }
    }
}
