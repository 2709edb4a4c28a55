//! Seeded property sweeps: the Holevo inequality over random ensembles and
//! POVMs, and the search for Von Neumann families whose conditional states
//! fail to commute.
//!
//! Trial `t` of a sweep started at `seed` uses the seed `seed + t` (wrapping),
//! so any single trial can be replayed on its own. Trials run in parallel and
//! are collected in trial order.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::evolve;
use crate::information::{holevo_chi, mutual_information};
use crate::interactions::{random_von_neumann_family, FamilyMethod, InteractionUnitary};
use crate::linalg::ComplexMatrix;
use crate::random::{
    random_distribution, random_ensemble, random_povm, random_projective_povm, seeded,
    seeded_stream,
};
use crate::states::{DensityMatrix, PureState};

/// `I − χ` above this counts as a violation.
pub const BOUND_VIOLATION_TOL: f64 = 1e-9;
/// Commutator norm above which a Von Neumann family is reported.
pub const FINDING_THRESHOLD: f64 = 1e-4;

pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundTrial {
    pub seed: u64,
    pub chi_bits: f64,
    pub mutual_information_bits: f64,
}

impl BoundTrial {
    pub fn excess_bits(&self) -> f64 {
        self.mutual_information_bits - self.chi_bits
    }
}

/// One random (ensemble, POVM) pair: 1 to d+1 states of random rank, and
/// either a random projective measurement or a random POVM with 1 to 2d
/// outcomes.
pub fn bound_trial(dim: usize, seed: u64) -> BoundTrial {
    let mut rng = seeded(seed);
    let n_states = rng.random_range(1..=dim + 1);
    let ensemble = random_ensemble(dim, n_states, &mut rng);
    let povm = if rng.random_bool(0.25) {
        random_projective_povm(dim, &mut rng)
    } else {
        let outcomes = rng.random_range(1..=2 * dim);
        random_povm(dim, outcomes, &mut rng)
    };
    BoundTrial {
        seed,
        chi_bits: holevo_chi(&ensemble),
        mutual_information_bits: mutual_information(&ensemble, &povm).expect("matching dimensions"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSweep {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// Largest `I − χ` observed.
    pub max_excess_bits: f64,
    pub failures: usize,
    pub failing_seeds: Vec<u64>,
}

pub fn holevo_bound_sweep(dim: usize, trials: usize, seed: u64) -> Result<BoundSweep> {
    if !(2..=8).contains(&dim) {
        return Err(Error::InvalidArgument(format!("dim {dim} outside [2, 8]")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let results: Vec<BoundTrial> = (0..trials)
        .into_par_iter()
        .map(|t| bound_trial(dim, trial_seed(seed, t)))
        .collect();
    let failing_seeds: Vec<u64> = results
        .iter()
        .filter(|r| r.excess_bits() > BOUND_VIOLATION_TOL)
        .map(|r| r.seed)
        .collect();
    Ok(BoundSweep {
        dim,
        trials,
        seed,
        max_excess_bits: results
            .iter()
            .map(BoundTrial::excess_bits)
            .fold(f64::NEG_INFINITY, f64::max),
        failures: failing_seeds.len(),
        failing_seeds,
    })
}

/// A Von Neumann family with non-commuting conditional states.
#[derive(Debug, Clone, Serialize)]
pub struct CommutationFinding {
    pub dim: usize,
    pub seed: u64,
    pub max_commutator: f64,
    /// Recomputed from the dumped blocks and basis.
    pub von_neumann_defect: f64,
    pub apparatus_eigenvalues: Vec<f64>,
    pub apparatus_basis: ComplexMatrix,
    pub interaction: InteractionUnitary,
}

#[derive(Debug, Clone)]
pub enum CommutationTrial {
    Evaluated {
        seed: u64,
        max_commutator: f64,
        finding: Option<Box<CommutationFinding>>,
    },
    NotConverged {
        seed: u64,
        defect: f64,
    },
}

/// Draw a projection-search Von Neumann family, a random apparatus spectrum
/// in the family's basis, and measure how far the conditional states are
/// from commuting.
pub fn commutation_trial(dim: usize, seed: u64) -> Result<CommutationTrial> {
    let family = match random_von_neumann_family(dim, seed, FamilyMethod::ProjectionSearch) {
        Ok(f) => f,
        Err(Error::NoFamilyFound { defect, .. }) => {
            return Ok(CommutationTrial::NotConverged { seed, defect })
        }
        Err(e) => return Err(e),
    };
    let mut rng = seeded_stream(seed, 1);
    let spectrum = random_distribution(dim, &mut rng);
    let apparatus = DensityMatrix::from_eigensystem(&spectrum, &family.apparatus_basis)?;
    let system = PureState::basis(dim, 0)?;
    let model = evolve(&system, &apparatus, &family.interaction)?;
    let max_commutator = model.max_pairwise_commutator();
    let finding = (max_commutator > FINDING_THRESHOLD).then(|| {
        Box::new(CommutationFinding {
            dim,
            seed,
            max_commutator,
            von_neumann_defect: family
                .interaction
                .von_neumann_defect(&family.apparatus_basis)
                .expect("matching dimensions"),
            apparatus_eigenvalues: spectrum,
            apparatus_basis: family.apparatus_basis.clone(),
            interaction: family.interaction.clone(),
        })
    });
    Ok(CommutationTrial::Evaluated {
        seed,
        max_commutator,
        finding,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutationSearch {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub evaluated: usize,
    pub non_converged: usize,
    pub non_converged_seeds: Vec<u64>,
    pub max_commutator: f64,
    #[serde(skip)]
    pub findings: Vec<CommutationFinding>,
    pub finding_count: usize,
}

pub fn commutation_search(dim: usize, trials: usize, seed: u64) -> Result<CommutationSearch> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("dim {dim} < 2")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|t| commutation_trial(dim, trial_seed(seed, t)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = CommutationSearch {
        dim,
        trials,
        seed,
        evaluated: 0,
        non_converged: 0,
        non_converged_seeds: Vec::new(),
        max_commutator: 0.0,
        findings: Vec::new(),
        finding_count: 0,
    };
    for r in results {
        match r {
            CommutationTrial::Evaluated {
                max_commutator,
                finding,
                ..
            } => {
                out.evaluated += 1;
                out.max_commutator = out.max_commutator.max(max_commutator);
                if let Some(f) = finding {
                    out.findings.push(*f);
                }
            }
            CommutationTrial::NotConverged { seed, .. } => {
                out.non_converged += 1;
                out.non_converged_seeds.push(seed);
            }
        }
    }
    out.finding_count = out.findings.len();
    Ok(out)
}
