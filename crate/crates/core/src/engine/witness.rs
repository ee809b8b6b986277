//! The witness document written by `certify` and read back by `verify`.

use serde::{Deserialize, Serialize};

use super::params::EngineParams;
use super::trichotomy::{RunReport, TraceStep};
use super::Witness;
use crate::mass::MassKind;
use crate::oracles::VerifyReport;
use crate::ratio::format_rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassEntry {
    pub role: String,
    /// Exact mass as "p/q".
    pub mass: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDocument {
    pub tau: usize,
    pub epsilon: String,
    pub p: usize,
    pub guarantee: bool,
    pub mass: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub verified: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    #[serde(flatten)]
    pub witness: Witness,
    pub masses: Vec<MassEntry>,
    pub params: ParamsDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
    pub verdict: VerdictDocument,
}

impl WitnessDocument {
    pub fn new(report: &RunReport, params: &EngineParams, mass: MassKind, with_trace: bool) -> Self {
        WitnessDocument {
            witness: report.witness.clone(),
            masses: masses_of(&report.verdict),
            params: ParamsDocument {
                tau: params.tau,
                epsilon: format_rational(&params.epsilon),
                p: params.p,
                guarantee: params.guarantee,
                mass: mass.name().to_string(),
            },
            trace: with_trace.then(|| report.trace.clone()),
            verdict: VerdictDocument { verified: report.verdict.verified, failures: report.verdict.failures.clone() },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness documents always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub(crate) fn masses_of(v: &VerifyReport) -> Vec<MassEntry> {
    v.masses.iter().map(|(role, mu)| MassEntry { role: role.clone(), mass: format_rational(mu) }).collect()
}
