use serde::{Deserialize, Serialize};

use super::document::{canonical_hash, GeneratorDoc};
use crate::engine::{EulerReport, Instance};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub representative: Vec<usize>,
    pub orbit_size: usize,
    pub isotropy_order: usize,
    pub admissible: bool,
    pub contribution: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualRecord {
    pub generators: Vec<GeneratorDoc>,
    pub order: usize,
    pub reduced: i64,
    pub unreduced: i64,
    pub point_term: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OracleValue {
    Value(i64),
    Abstained(String),
}

impl OracleValue {
    pub fn inapplicable() -> Self {
        OracleValue::Abstained("inapplicable".into())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub ran: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<OracleValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_value: Option<OracleValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub name: String,
    pub hash: String,
    pub n: usize,
    pub pc: bool,
    pub reduced: i64,
    pub unreduced: i64,
    pub point_term: i64,
    pub relative: i64,
    pub group_order: usize,
    pub symmetry_order: usize,
    pub per_orbit: Vec<OrbitRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality_equal: Option<bool>,
    pub oracle: OracleRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Reduced, unreduced and point term of an instance and of its dual, plus
/// the duality verdict.
pub type NumericKey = (i64, i64, i64, Option<(i64, i64, i64)>, Option<bool>);

impl ResultDocument {
    pub fn new(inst: &Instance, report: &EulerReport, dual: Option<&Instance>) -> Self {
        let per_orbit = report
            .per_orbit
            .iter()
            .map(|o| OrbitRecord {
                representative: o.representative.iter().map(|j| j + 1).collect(),
                orbit_size: o.orbit_size,
                isotropy_order: o.isotropy_order,
                admissible: o.admissible,
                contribution: format!("{}/{}", o.contribution.numer(), o.contribution.denom()),
            })
            .collect();
        let dual_record = match (dual, &report.dual_report) {
            (Some(d), Some(r)) => Some(DualRecord {
                generators: d
                    .group()
                    .generators()
                    .iter()
                    .map(GeneratorDoc::from_vector)
                    .collect(),
                order: d.group().order(),
                reduced: r.reduced,
                unreduced: r.unreduced,
                point_term: r.point_term,
            }),
            _ => None,
        };
        ResultDocument {
            name: inst.name().to_string(),
            hash: canonical_hash(inst),
            n: inst.n(),
            pc: report.pc_holds,
            reduced: report.reduced,
            unreduced: report.unreduced,
            point_term: report.point_term,
            relative: report.relative,
            group_order: inst.group().order(),
            symmetry_order: inst.symmetry().order(),
            per_orbit,
            dual: dual_record,
            duality_equal: report.duality_verdict.as_ref().map(|v| v.equal),
            oracle: OracleRecord::default(),
            timings: None,
        }
    }

    /// The computed values, ignoring name, oracle and timing fields.
    pub fn numeric_key(&self) -> NumericKey {
        (
            self.reduced,
            self.unreduced,
            self.point_term,
            self.dual
                .as_ref()
                .map(|d| (d.reduced, d.unreduced, d.point_term)),
            self.duality_equal,
        )
    }
}

/// A catalog line whose instance could not be processed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureRecord {
    pub line: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hash: Option<String>,
    pub error: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatalogRecord {
    Failure(FailureRecord),
    Result(Box<ResultDocument>),
}

impl CatalogRecord {
    pub fn hash(&self) -> Option<&str> {
        match self {
            CatalogRecord::Result(r) => Some(&r.hash),
            CatalogRecord::Failure(_) => None,
        }
    }
}
