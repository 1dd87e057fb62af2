//! JSON document types: module definitions read from disk and the reports
//! written back out.

use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// A module definition file. `matrix` holds expression strings for the
/// q-difference or differential kinds; `constants` holds the diagonal
/// entries for the diagonal-constants kind.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleDocument {
    pub format: u32,
    pub kind: ModuleKind,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    QDifference,
    Differential,
    DiagonalConstants,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub version: String,
    pub timing_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct BallDoc {
    pub midpoint: String,
    pub radius: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictDoc {
    pub n_min: u32,
    pub n_max: u32,
    pub threshold: u32,
    pub good_places: u32,
    pub identity_places: u32,
    pub bad_places: Vec<BadPlaceDoc>,
    pub failure_places: Vec<u32>,
    pub conclusion: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BadPlaceDoc {
    pub n: u32,
    pub witness: String,
}

impl VerdictDoc {
    pub fn from_verdict(v: &qcurv_core::Verdict, threshold: u32) -> Self {
        VerdictDoc {
            n_min: v.n_min,
            n_max: v.n_max,
            threshold,
            good_places: v.good_places,
            identity_places: v.identity_places,
            bad_places: v
                .bad_places
                .iter()
                .map(|(n, witness)| BadPlaceDoc {
                    n: *n,
                    witness: witness.clone(),
                })
                .collect(),
            failure_places: v.failure_places.clone(),
            conclusion: match v.conclusion {
                qcurv_core::Conclusion::ConsistentWithTrivial => {
                    "consistent_with_trivial".to_string()
                }
                qcurv_core::Conclusion::NontrivialHeuristic { .. } => {
                    "nontrivial_heuristic".to_string()
                }
            },
        }
    }
}
