use horizon_core::haar::ChiProfile;
use horizon_core::infoflow::{
    BoundReport, CorrelationCurves, Roles, ThresholdParams, ThresholdRecord,
};
use horizon_core::models::CascadeStep;
use serde::Serialize;

use crate::config::ScenarioConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningCode {
    /// A threshold fell outside `[0, n]` and was clamped.
    ThresholdClamped,
    /// Matter above the `S_BH^{3/4}` scale.
    ThooftAdvisory,
    /// A correlation came out below zero.
    NegativeCorrelation,
    /// A bound level was skipped because its hypotheses fail.
    HypothesisFailed,
    /// The exterior entanglement outlives the interior.
    PersistsToPlanckScale,
    /// An estimate exceeded a bound at 3σ, or the levels were out of order.
    BoundViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Warning {
    pub code: WarningCode,
    pub message: String,
}

impl Warning {
    pub fn new(code: WarningCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSection {
    pub params: ThresholdParams,
    pub chi: Vec<ChiProfile>,
    pub record: ThresholdRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub schedule: String,
    pub r: u32,
    pub roles: Roles,
    pub seed: u64,
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityRow {
    pub r: u32,
    pub tag: String,
    pub log2_purity: f64,
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSection {
    pub seed: u64,
    pub steps: Vec<CascadeStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: ScenarioConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<CorrelationCurves>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purities: Option<Vec<PurityRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSection>,
    pub warnings: Vec<Warning>,
}

impl RunReport {
    pub fn new(command: &'static str, config: &ScenarioConfig) -> Self {
        Self {
            tool: "horizon",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed: config.seed,
            config: config.clone(),
            curves: None,
            thresholds: None,
            bounds: None,
            purities: None,
            sample: None,
            warnings: Vec::new(),
        }
    }

    pub fn has(&self, code: WarningCode) -> bool {
        self.warnings.iter().any(|w| w.code == code)
    }
}
