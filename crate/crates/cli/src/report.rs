use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub restarts: usize,
    pub tool_version: String,
    pub tolerance: f64,
    pub saturation_tolerance: f64,
    /// Not covered by the determinism guarantee.
    pub generated_at_unix: u64,
}

impl Provenance {
    pub fn new(seed: u64, restarts: usize, tolerance: f64, saturation_tolerance: f64) -> Self {
        Self {
            seed,
            restarts,
            tool_version: TOOL_VERSION.to_string(),
            tolerance,
            saturation_tolerance,
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

/// Result of `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub chi_bits: f64,
    /// `H(x)` of the system outcome distribution.
    pub source_entropy_bits: f64,
    /// Best value found by the projective search.
    pub accessible_info_bits: f64,
    /// Information extracted by the scenario's POVM, when one is given.
    pub povm_info_bits: Option<f64>,
    pub max_commutator: f64,
    pub von_neumann_defect: f64,
    pub bound_satisfied: bool,
    pub saturated: bool,
    pub provenance: Provenance,
}

#[derive(Serialize)]
struct FlatReport<'a> {
    chi_bits: f64,
    source_entropy_bits: f64,
    accessible_info_bits: f64,
    povm_info_bits: Option<f64>,
    max_commutator: f64,
    von_neumann_defect: f64,
    bound_satisfied: bool,
    saturated: bool,
    seed: u64,
    restarts: usize,
    tool_version: &'a str,
    tolerance: f64,
    saturation_tolerance: f64,
    generated_at_unix: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timestamp zeroed, for golden comparisons.
    pub fn to_canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.provenance.generated_at_unix = 0;
        copy.to_json()
    }

    /// Header line plus one data row.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let p = &self.provenance;
        let flat = FlatReport {
            chi_bits: self.chi_bits,
            source_entropy_bits: self.source_entropy_bits,
            accessible_info_bits: self.accessible_info_bits,
            povm_info_bits: self.povm_info_bits,
            max_commutator: self.max_commutator,
            von_neumann_defect: self.von_neumann_defect,
            bound_satisfied: self.bound_satisfied,
            saturated: self.saturated,
            seed: p.seed,
            restarts: p.restarts,
            tool_version: &p.tool_version,
            tolerance: p.tolerance,
            saturation_tolerance: p.saturation_tolerance,
            generated_at_unix: p.generated_at_unix,
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(flat)
            .map_err(|e| CliError::Numerical(format!("csv: {e}")))?;
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Numerical(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
