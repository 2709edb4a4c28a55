//! System pure states, apparatus density matrices, ensembles and POVMs.
//!
//! Every constructor validates the type invariants, so a value of any of these
//! types can be fed to the information measures without further checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecomposition, ComplexMatrix, EigenDecomposition, C64, ZERO};

/// Default tolerance for normalization, Hermiticity and positivity checks.
pub const STATE_TOL: f64 = 1e-10;

/// Ensemble probabilities below this are stored as exact zeros.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

fn check_distribution(probs: &[f64], tol: f64) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(p) = probs.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidDistribution(format!("non-finite entry {p}")));
    }
    if let Some(p) = probs.iter().find(|&&p| p < -tol) {
        return Err(Error::InvalidDistribution(format!(
            "negative probability {p}"
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidDistribution(format!(
            "sums to {total}, not 1"
        )));
    }
    Ok(())
}

/// `ψ = Σ c_i |i⟩` on the system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPureState")]
pub struct PureState {
    amplitudes: Vec<C64>,
}

#[derive(Deserialize)]
struct RawPureState {
    amplitudes: Vec<C64>,
}

impl TryFrom<RawPureState> for PureState {
    type Error = Error;

    fn try_from(raw: RawPureState) -> Result<Self> {
        PureState::new(raw.amplitudes)
    }
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm}, not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// `c_i = √p_i · e^{iφ_i}`
    pub fn from_probabilities(probs: &[f64], phases: &[f64]) -> Result<Self> {
        if probs.len() != phases.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities but {} phases",
                probs.len(),
                phases.len()
            )));
        }
        if let Some(p) = probs.iter().find(|&&p| p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "negative probability {p}"
            )));
        }
        check_distribution(probs, STATE_TOL)?;
        let amplitudes = probs
            .iter()
            .zip(phases)
            .map(|(&p, &phi)| C64::from_polar(p.sqrt(), phi))
            .collect();
        Self::new(amplitudes)
    }

    /// Computational basis state `|i⟩`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::InvalidArgument(format!("basis index {i} >= {dim}")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[i] = C64::new(1.0, 0.0);
        Self::new(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `|c_i|²`
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix. The spectrum is
/// computed once at construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawDensityMatrix")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    #[serde(skip)]
    eigen: Option<EigenDecomposition>,
}

#[derive(Deserialize)]
struct RawDensityMatrix {
    matrix: ComplexMatrix,
}

impl TryFrom<RawDensityMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(raw: RawDensityMatrix) -> Result<Self> {
        DensityMatrix::new(raw.matrix)
    }
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, STATE_TOL)
    }

    /// Validate with a custom tolerance for Hermiticity, trace and positivity.
    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        matrix.square_dim()?;
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian { defect });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {trace}, not 1")));
        }
        // The eigensolver has its own fixed Hermiticity gate; symmetrize first
        // so that a looser caller tolerance is honored.
        let sym = (&matrix + &matrix.adjoint()).scale_real(0.5);
        let eigen = hermitian_eigendecomposition(&sym)?;
        let smallest = *eigen.eigenvalues.last().expect("nonempty spectrum");
        if smallest < -tol {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {smallest}"
            )));
        }
        Ok(Self {
            matrix,
            eigen: Some(eigen),
        })
    }

    /// `ρ = Σ_k r_k v_k v_k†` for the columns `v_k` of `basis`.
    pub fn from_eigensystem(eigenvalues: &[f64], basis: &ComplexMatrix) -> Result<Self> {
        Self::from_eigensystem_with_tolerance(eigenvalues, basis, STATE_TOL)
    }

    pub fn from_eigensystem_with_tolerance(
        eigenvalues: &[f64],
        basis: &ComplexMatrix,
        tol: f64,
    ) -> Result<Self> {
        let n = basis.square_dim()?;
        if eigenvalues.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvalues for a {n}-dimensional basis",
                eigenvalues.len()
            )));
        }
        if let Some(r) = eigenvalues.iter().find(|&&r| r < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "negative eigenvalue {r}"
            )));
        }
        check_distribution(eigenvalues, tol)?;
        let defect = basis.unitarity_defect();
        if defect > tol {
            return Err(Error::NotUnitary { defect });
        }
        let mut m = ComplexMatrix::zeros(n, n);
        for (k, &r) in eigenvalues.iter().enumerate() {
            if r == 0.0 {
                continue;
            }
            m = &m + &ComplexMatrix::outer(&basis.column(k)).scale_real(r);
        }
        Self::with_tolerance(m, tol.max(STATE_TOL))
    }

    pub fn pure(state: &PureState) -> Self {
        Self::new(state.projector())
            .expect("projector of a normalized state is a valid density matrix")
    }

    /// `I / d`
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
            .expect("I/d is a valid density matrix")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigen(&self) -> EigenDecomposition {
        match &self.eigen {
            Some(e) => e.clone(),
            None => hermitian_eigendecomposition(&self.matrix).expect("validated"),
        }
    }

    /// Descending spectrum.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match &self.eigen {
            Some(e) => e.eigenvalues.clone(),
            None => self.eigen().eigenvalues,
        }
    }
}

/// Prior-weighted list of states of one common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct Ensemble {
    entries: Vec<EnsembleEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEntry {
    pub probability: f64,
    pub state: DensityMatrix,
}

#[derive(Deserialize)]
struct RawEnsemble {
    entries: Vec<EnsembleEntry>,
}

impl TryFrom<RawEnsemble> for Ensemble {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        Ensemble::new(
            raw.entries
                .into_iter()
                .map(|e| (e.probability, e.state))
                .collect(),
        )
    }
}

impl Ensemble {
    /// Probabilities within `PROBABILITY_FLOOR` of zero are set to exactly
    /// zero and their entries kept, so indices stay aligned with the labels
    /// of the preparation.
    pub fn new(entries: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::InvalidDistribution("empty ensemble".into()));
        };
        let dim = first.1.dim();
        if let Some((_, s)) = entries.iter().find(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "ensemble mixes dimensions {dim} and {}",
                s.dim()
            )));
        }
        let probs: Vec<f64> = entries.iter().map(|(p, _)| *p).collect();
        if let Some(p) = probs.iter().find(|&&p| p > 1.0 + STATE_TOL) {
            return Err(Error::InvalidDistribution(format!("probability {p} > 1")));
        }
        if let Some(p) = probs.iter().find(|&&p| p < -PROBABILITY_FLOOR) {
            return Err(Error::InvalidDistribution(format!(
                "negative probability {p}"
            )));
        }
        check_distribution(&probs, STATE_TOL)?;
        let entries = entries
            .into_iter()
            .map(|(p, state)| EnsembleEntry {
                probability: if p.abs() < PROBABILITY_FLOOR { 0.0 } else { p },
                state,
            })
            .collect();
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].state.dim()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.probability).collect()
    }

    pub fn states(&self) -> impl Iterator<Item = &DensityMatrix> {
        self.entries.iter().map(|e| &e.state)
    }

    /// `Σ_x p_x ρ_x` without revalidation.
    pub fn average_matrix(&self) -> ComplexMatrix {
        self.weighted_sum(|_, p| p)
    }

    /// `Σ_x w(x, p_x) ρ_x`
    pub fn weighted_sum(&self, weight: impl Fn(usize, f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        self.entries
            .iter()
            .enumerate()
            .fold(ComplexMatrix::zeros(n, n), |acc, (x, e)| {
                &acc + &e.state.matrix().scale_real(weight(x, e.probability))
            })
    }

    /// `Σ_x p_x ρ_x` as a validated state.
    pub fn average_state(&self) -> DensityMatrix {
        DensityMatrix::with_tolerance(self.average_matrix(), 1e-9)
            .expect("convex combination of density matrices is a density matrix")
    }
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPovm")]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

#[derive(Deserialize)]
struct RawPovm {
    elements: Vec<ComplexMatrix>,
}

impl TryFrom<RawPovm> for Povm {
    type Error = Error;

    fn try_from(raw: RawPovm) -> Result<Self> {
        Povm::new(raw.elements)
    }
}

/// Per-element and completeness defects of a candidate POVM.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PovmReport {
    /// Max-norm of `E − E†` per element.
    pub hermiticity_defects: Vec<f64>,
    /// `max(0, −λ_min)` of the Hermitian part, per element.
    pub positivity_defects: Vec<f64>,
    /// Max-norm of `Σ E − I`.
    pub completeness_defect: f64,
    pub dimension_consistent: bool,
}

impl PovmReport {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.dimension_consistent
            && self.completeness_defect <= tol
            && self.hermiticity_defects.iter().all(|&d| d <= tol)
            && self.positivity_defects.iter().all(|&d| d <= tol)
    }

    pub fn worst_defect(&self) -> f64 {
        self.hermiticity_defects
            .iter()
            .chain(&self.positivity_defects)
            .fold(self.completeness_defect, |a, &b| a.max(b))
    }
}

/// Report-style check of arbitrary operators against the POVM invariants.
pub fn validate_povm(elements: &[ComplexMatrix]) -> PovmReport {
    let dim = elements.first().map_or(0, ComplexMatrix::rows);
    let dimension_consistent =
        dim > 0 && elements.iter().all(|e| e.rows() == dim && e.cols() == dim);
    if !dimension_consistent {
        return PovmReport {
            hermiticity_defects: vec![f64::INFINITY; elements.len()],
            positivity_defects: vec![f64::INFINITY; elements.len()],
            completeness_defect: f64::INFINITY,
            dimension_consistent,
        };
    }
    let mut hermiticity_defects = Vec::with_capacity(elements.len());
    let mut positivity_defects = Vec::with_capacity(elements.len());
    let mut total = ComplexMatrix::zeros(dim, dim);
    for e in elements {
        hermiticity_defects.push(e.hermiticity_defect());
        let sym = (e + &e.adjoint()).scale_real(0.5);
        let smallest = hermitian_eigendecomposition(&sym)
            .map(|eig| eig.eigenvalues[dim - 1])
            .unwrap_or(f64::NEG_INFINITY);
        positivity_defects.push((-smallest).max(0.0));
        total = &total + e;
    }
    let completeness_defect = (&total - &ComplexMatrix::identity(dim)).max_norm();
    PovmReport {
        hermiticity_defects,
        positivity_defects,
        completeness_defect,
        dimension_consistent,
    }
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(elements, STATE_TOL)
    }

    pub fn with_tolerance(elements: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        let report = validate_povm(&elements);
        if !report.dimension_consistent {
            return Err(Error::InvalidPovm(
                "elements must be square and of one dimension".into(),
            ));
        }
        if !report.is_valid(tol) {
            return Err(Error::InvalidPovm(format!(
                "worst defect {:.3e} exceeds {tol:.1e}",
                report.worst_defect()
            )));
        }
        Ok(Self { elements })
    }

    /// Rank-1 projectors onto the columns of a unitary.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let n = basis.square_dim()?;
        let defect = basis.unitarity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Self::new(
            (0..n)
                .map(|k| ComplexMatrix::outer(&basis.column(k)))
                .collect(),
        )
    }

    pub fn computational(dim: usize) -> Self {
        Self::projective(&ComplexMatrix::identity(dim)).expect("identity is unitary")
    }

    /// Single-outcome measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)]).expect("{I} is a POVM")
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn report(&self) -> PovmReport {
        validate_povm(&self.elements)
    }

    /// Merge outcomes `a` and `b` into one element.
    pub fn coarse_grain(&self, a: usize, b: usize) -> Result<Self> {
        let n = self.elements.len();
        if a >= n || b >= n || a == b {
            return Err(Error::InvalidArgument(format!(
                "cannot merge outcomes {a} and {b} of {n}"
            )));
        }
        let merged = &self.elements[a] + &self.elements[b];
        let mut elements: Vec<ComplexMatrix> = self
            .elements
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, e)| e.clone())
            .collect();
        elements.push(merged);
        Self::with_tolerance(elements, 1e-9)
    }
}
