//! Controlled-block measurement interactions `U = Σ_i |i⟩⟨i| ⊗ V_i`.
//!
//! The interaction maps `|i⟩|r_k⟩ ↦ |i⟩ V_i|r_k⟩`, so the pointer states are
//! `|r_k^i⟩ = V_i |r_k⟩` for the eigenvectors `|r_k⟩` of the apparatus. The
//! Von Neumann condition asks that pointer states of distinct system labels
//! be orthogonal for every `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{polar_unitary, ComplexMatrix, C64};
use crate::random::{haar_unitary, random_phases, seeded};
use crate::states::DensityMatrix;

pub const UNITARY_TOL: f64 = 1e-10;
/// Defect below which a family counts as Von Neumann.
pub const VON_NEUMANN_TOL: f64 = 1e-8;
pub const PROJECTION_SWEEP_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInteraction")]
pub struct InteractionUnitary {
    d_sys: usize,
    d_app: usize,
    blocks: Vec<ComplexMatrix>,
}

#[derive(Deserialize)]
struct RawInteraction {
    blocks: Vec<ComplexMatrix>,
}

impl TryFrom<RawInteraction> for InteractionUnitary {
    type Error = Error;

    fn try_from(raw: RawInteraction) -> Result<Self> {
        InteractionUnitary::new(raw.blocks)
    }
}

impl InteractionUnitary {
    /// One `d_app × d_app` unitary block per system basis state.
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(blocks, UNITARY_TOL)
    }

    pub fn with_tolerance(blocks: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidArgument(
                "interaction needs at least one block".into(),
            ));
        };
        let d_app = first.square_dim()?;
        for b in &blocks {
            if b.rows() != d_app || b.cols() != d_app {
                return Err(Error::DimensionMismatch(format!(
                    "block of size {}x{} in a family of {d_app}x{d_app} blocks",
                    b.rows(),
                    b.cols()
                )));
            }
            let defect = b.unitarity_defect();
            if defect > tol {
                return Err(Error::NotUnitary { defect });
            }
        }
        Ok(Self {
            d_sys: blocks.len(),
            d_app,
            blocks,
        })
    }

    /// Extract the blocks of a block-diagonal joint unitary.
    pub fn from_full_matrix(m: &ComplexMatrix, d_sys: usize, d_app: usize) -> Result<Self> {
        let n = d_sys * d_app;
        if m.rows() != n || m.cols() != n {
            return Err(Error::BadJointDimension {
                expected: n,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let off = off_block_norm(m, d_sys, d_app);
        if off > UNITARY_TOL {
            return Err(Error::InvalidArgument(format!(
                "not of controlled form (off-block entry {off:.3e})"
            )));
        }
        let blocks = (0..d_sys)
            .map(|i| {
                let mut b = ComplexMatrix::zeros(d_app, d_app);
                for k in 0..d_app {
                    for l in 0..d_app {
                        b[(k, l)] = m[(i * d_app + k, i * d_app + l)];
                    }
                }
                b
            })
            .collect();
        Self::new(blocks)
    }

    pub fn identity(d_sys: usize, d_app: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(d_app); d_sys]).expect("identity blocks")
    }

    pub fn d_sys(&self) -> usize {
        self.d_sys
    }

    pub fn d_app(&self) -> usize {
        self.d_app
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &ComplexMatrix {
        &self.blocks[i]
    }

    /// `diag(V_0, …, V_{d_sys−1})` in system ⊗ apparatus ordering.
    pub fn full_matrix(&self) -> ComplexMatrix {
        let d = self.d_app;
        let mut m = ComplexMatrix::zeros(self.d_sys * d, self.d_sys * d);
        for (i, b) in self.blocks.iter().enumerate() {
            for k in 0..d {
                for l in 0..d {
                    m[(i * d + k, i * d + l)] = b[(k, l)];
                }
            }
        }
        m
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(ComplexMatrix::unitarity_defect)
            .fold(0.0, f64::max)
    }

    /// `max_{i≠j,k} |⟨r_k| V_i† V_j |r_k⟩|` for the columns `|r_k⟩` of `basis`.
    pub fn von_neumann_defect(&self, basis: &ComplexMatrix) -> Result<f64> {
        if basis.rows() != self.d_app || basis.cols() != self.d_app {
            return Err(Error::DimensionMismatch(format!(
                "apparatus basis is {}x{}, blocks are {d}x{d}",
                basis.rows(),
                basis.cols(),
                d = self.d_app
            )));
        }
        let mut worst: f64 = 0.0;
        for k in 0..self.d_app {
            let r = basis.column(k);
            let pointers: Vec<Vec<C64>> = self.blocks.iter().map(|v| v.apply(&r)).collect();
            for i in 0..self.d_sys {
                for j in i + 1..self.d_sys {
                    worst = worst.max(ComplexMatrix::inner(&pointers[i], &pointers[j]).norm());
                }
            }
        }
        Ok(worst)
    }
}

fn off_block_norm(m: &ComplexMatrix, d_sys: usize, d_app: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..d_sys * d_app {
        for c in 0..d_sys * d_app {
            if r / d_app != c / d_app {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

/// Cyclic shift `S|k⟩ = |k ⊕ n⟩`, i.e. entries `δ_{a,(b+n) mod d}`.
pub fn cyclic_shift(d: usize, n: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d, d);
    for b in 0..d {
        s[((b + n) % d, b)] = C64::new(1.0, 0.0);
    }
    s
}

fn check_family_args(d: usize, basis: &ComplexMatrix) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
    }
    if basis.rows() != d || basis.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "apparatus basis is {}x{}, expected {d}x{d}",
            basis.rows(),
            basis.cols()
        )));
    }
    let defect = basis.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

/// Qudit shift gate `|i⟩|r_k⟩ ↦ |i⟩|r_{k⊕i}⟩` for the apparatus basis whose
/// columns are `|r_k⟩`. Block `i` is `B S^i B†`.
pub fn shift_gate(d: usize, apparatus_basis: &ComplexMatrix) -> Result<InteractionUnitary> {
    check_family_args(d, apparatus_basis)?;
    let blocks = (0..d)
        .map(|i| cyclic_shift(d, i).conjugate_by(apparatus_basis))
        .collect();
    InteractionUnitary::new(blocks)
}

/// Controlled-NOT with the system as control.
pub fn cnot() -> InteractionUnitary {
    shift_gate(2, &ComplexMatrix::identity(2)).expect("valid shift gate")
}

/// Blocks `B Φ_i S^i B†` with `Φ_i = diag(e^{iφ_{i,0}}, …, e^{iφ_{i,d−1}})`.
pub fn phase_shift_family(
    d: usize,
    phases: &[Vec<f64>],
    apparatus_basis: &ComplexMatrix,
) -> Result<InteractionUnitary> {
    check_family_args(d, apparatus_basis)?;
    if phases.len() != d || phases.iter().any(|row| row.len() != d) {
        return Err(Error::DimensionMismatch(format!("phases must be {d}x{d}")));
    }
    if phases.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let blocks = phases
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut phi = ComplexMatrix::zeros(d, d);
            for (a, &theta) in row.iter().enumerate() {
                phi[(a, a)] = C64::from_polar(1.0, theta);
            }
            (&phi * &cyclic_shift(d, i)).conjugate_by(apparatus_basis)
        })
        .collect();
    InteractionUnitary::new(blocks)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionReport {
    /// Worst block `‖V_i†V_i − I‖_max`.
    pub unitarity_defect: f64,
    /// `max_{i≠j,k} |⟨r_k^i|r_k^j⟩|`.
    pub von_neumann_defect: f64,
    /// Full matrix is block diagonal in system ⊗ apparatus ordering.
    pub controlled_form: bool,
}

impl ConditionReport {
    pub fn is_von_neumann(&self) -> bool {
        self.von_neumann_defect <= VON_NEUMANN_TOL
    }
}

/// Evaluate the unitarity and Von Neumann conditions with respect to the
/// eigenbasis of `rho_apparatus`.
pub fn check_conditions(
    u: &InteractionUnitary,
    rho_apparatus: &DensityMatrix,
) -> Result<ConditionReport> {
    if rho_apparatus.dim() != u.d_app {
        return Err(Error::DimensionMismatch(format!(
            "apparatus state of dimension {} for blocks of dimension {}",
            rho_apparatus.dim(),
            u.d_app
        )));
    }
    let basis = rho_apparatus.eigen().eigenvectors;
    Ok(ConditionReport {
        unitarity_defect: u.unitarity_defect(),
        von_neumann_defect: u.von_neumann_defect(&basis)?,
        controlled_form: off_block_norm(&u.full_matrix(), u.d_sys, u.d_app) == 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMethod {
    PhaseShift,
    ProjectionSearch,
}

/// A Von Neumann family together with the apparatus eigenbasis it is Von
/// Neumann for.
#[derive(Debug, Clone)]
pub struct VonNeumannFamily {
    pub interaction: InteractionUnitary,
    pub apparatus_basis: ComplexMatrix,
    pub defect: f64,
    /// Projection sweeps used (0 for the phase-shift construction).
    pub sweeps: usize,
}

/// Seeded random `d × d` Von Neumann family. Each call owns its generator.
pub fn random_von_neumann_family(
    d: usize,
    seed: u64,
    method: FamilyMethod,
) -> Result<VonNeumannFamily> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
    }
    let mut rng = seeded(seed);
    let basis = haar_unitary(d, &mut rng);
    let (interaction, sweeps) = match method {
        FamilyMethod::PhaseShift => {
            let phases: Vec<Vec<f64>> = (0..d).map(|_| random_phases(d, &mut rng)).collect();
            (phase_shift_family(d, &phases, &basis)?, 0)
        }
        FamilyMethod::ProjectionSearch => {
            let start: Vec<ComplexMatrix> = (0..d).map(|_| haar_unitary(d, &mut rng)).collect();
            let (local, sweeps) = project_to_von_neumann(start, PROJECTION_SWEEP_CAP)?;
            let blocks = local.iter().map(|w| w.conjugate_by(&basis)).collect();
            (InteractionUnitary::new(blocks)?, sweeps)
        }
    };
    let defect = interaction.von_neumann_defect(&basis)?;
    if defect > VON_NEUMANN_TOL {
        return Err(Error::NoFamilyFound { defect, sweeps });
    }
    Ok(VonNeumannFamily {
        interaction,
        apparatus_basis: basis,
        defect,
        sweeps,
    })
}

/// Defect of blocks written in the apparatus eigenbasis: the largest overlap
/// between columns `k` of two distinct blocks.
fn local_defect(blocks: &[ComplexMatrix]) -> f64 {
    let d = blocks[0].rows();
    let mut worst: f64 = 0.0;
    for k in 0..d {
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                let overlap: C64 = (0..d)
                    .map(|a| blocks[i][(a, k)].conj() * blocks[j][(a, k)])
                    .sum();
                worst = worst.max(overlap.norm());
            }
        }
    }
    worst
}

/// Alternating projections in the apparatus eigenbasis. For each label `k`
/// the vectors `W_0 e_k, …, W_{n−1} e_k` are made orthonormal (which zeroes
/// the diagonals of all `W_i† W_j`), then every block is re-unitarized.
fn project_to_von_neumann(
    mut blocks: Vec<ComplexMatrix>,
    cap: usize,
) -> Result<(Vec<ComplexMatrix>, usize)> {
    let d = blocks[0].rows();
    let n = blocks.len();
    let mut defect = local_defect(&blocks);
    for sweep in 1..=cap {
        for k in 0..d {
            let mut fiber = ComplexMatrix::zeros(d, n);
            for (i, w) in blocks.iter().enumerate() {
                for a in 0..d {
                    fiber[(a, i)] = w[(a, k)];
                }
            }
            let fiber = polar_unitary(&fiber).map_err(|_| Error::NoFamilyFound {
                defect,
                sweeps: sweep,
            })?;
            for (i, w) in blocks.iter_mut().enumerate() {
                for a in 0..d {
                    w[(a, k)] = fiber[(a, i)];
                }
            }
        }
        for w in blocks.iter_mut() {
            *w = polar_unitary(w).map_err(|_| Error::NoFamilyFound {
                defect,
                sweeps: sweep,
            })?;
        }
        defect = local_defect(&blocks);
        if defect <= VON_NEUMANN_TOL {
            return Ok((blocks, sweep));
        }
    }
    Err(Error::NoFamilyFound {
        defect,
        sweeps: cap,
    })
}

/// All-zero phase table; `phase_shift_family` then reduces to `shift_gate`.
pub fn zero_phases(d: usize) -> Vec<Vec<f64>> {
    vec![vec![0.0; d]; d]
}
