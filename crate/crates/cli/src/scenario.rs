//! Scenario files: one system state, one apparatus state, one interaction and
//! optionally a POVM to certify.
//!
//! ```json
//! {
//!   "system":      {"probs": [0.3, 0.7], "phases": [0.0, 0.0]},
//!   "apparatus":   {"eigenvalues": [1.0, 0.0], "basis": [[[1,0],[0,0]], [[0,0],[1,0]]]},
//!   "interaction": {"kind": "shift"},
//!   "povm":        [[[[1,0],[0,0]], [[0,0],[0,0]]], [[[0,0],[0,0]], [[0,0],[1,0]]]],
//!   "options":     {"tolerance": 1e-10, "saturation_tolerance": 1e-6, "seed": 0, "restarts": 8}
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. `phases`, `basis`, `povm` and every option are optional.

use std::path::Path;

use holevo_core::interactions::{phase_shift_family, shift_gate, InteractionUnitary};
use holevo_core::{ComplexMatrix, DensityMatrix, Povm, PureState};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub system: SystemSpec,
    pub apparatus: ApparatusSpec,
    pub interaction: InteractionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub povm: Option<Vec<ComplexMatrix>>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub probs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApparatusSpec {
    pub eigenvalues: Vec<f64>,
    /// Columns are the apparatus eigenvectors; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InteractionSpec {
    /// Shift gate in the apparatus eigenbasis.
    Shift,
    PhaseShift {
        phases: Vec<Vec<f64>>,
    },
    Blocks {
        blocks: Vec<ComplexMatrix>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Hermiticity, unitarity and normalization tolerance.
    pub tolerance: f64,
    /// Largest `χ − I` still reported as saturated.
    pub saturation_tolerance: f64,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            saturation_tolerance: 1e-6,
            seed: 0,
            restarts: 8,
        }
    }
}

/// Validated scenario contents.
#[derive(Debug, Clone)]
pub struct Model {
    pub system: PureState,
    pub apparatus: DensityMatrix,
    pub apparatus_basis: ComplexMatrix,
    pub interaction: InteractionUnitary,
    pub povm: Option<Povm>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!(
                "scenario line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn build(&self) -> Result<Model, CliError> {
        let tol = self.options.tolerance;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Input(format!(
                "options.tolerance {tol} must be positive"
            )));
        }

        let phases = self
            .system
            .phases
            .clone()
            .unwrap_or_else(|| vec![0.0; self.system.probs.len()]);
        let system = PureState::from_probabilities(&self.system.probs, &phases)
            .map_err(|e| CliError::core("system", e))?;

        let d_app = self.apparatus.eigenvalues.len();
        if d_app == 0 {
            return Err(CliError::Input("apparatus: no eigenvalues".into()));
        }
        let basis = self
            .apparatus
            .basis
            .clone()
            .unwrap_or_else(|| ComplexMatrix::identity(d_app));
        let apparatus = DensityMatrix::from_eigensystem_with_tolerance(
            &self.apparatus.eigenvalues,
            &basis,
            tol,
        )
        .map_err(|e| CliError::core("apparatus", e))?;

        let interaction = match &self.interaction {
            InteractionSpec::Shift => {
                check_square_family(system.dim(), d_app)?;
                shift_gate(d_app, &basis)
            }
            InteractionSpec::PhaseShift { phases } => {
                check_square_family(system.dim(), d_app)?;
                phase_shift_family(d_app, phases, &basis)
            }
            InteractionSpec::Blocks { blocks } => {
                InteractionUnitary::with_tolerance(blocks.clone(), tol)
            }
        }
        .map_err(|e| CliError::core("interaction", e))?;
        if interaction.d_sys() != system.dim() || interaction.d_app() != d_app {
            return Err(CliError::Input(format!(
                "interaction: {} blocks of size {} for system dimension {} and apparatus dimension {d_app}",
                interaction.d_sys(),
                interaction.d_app(),
                system.dim()
            )));
        }

        let povm = self
            .povm
            .as_ref()
            .map(|elements| {
                let p = Povm::with_tolerance(elements.clone(), tol)
                    .map_err(|e| CliError::core("povm", e))?;
                if p.dim() != d_app {
                    return Err(CliError::Input(format!(
                        "povm: dimension {} does not match apparatus dimension {d_app}",
                        p.dim()
                    )));
                }
                Ok(p)
            })
            .transpose()?;

        Ok(Model {
            system,
            apparatus,
            apparatus_basis: basis,
            interaction,
            povm,
        })
    }
}

fn check_square_family(d_sys: usize, d_app: usize) -> Result<(), CliError> {
    if d_sys != d_app {
        return Err(CliError::Input(format!(
            "interaction: shift families need equal system and apparatus dimensions, got {d_sys} and {d_app}"
        )));
    }
    Ok(())
}
