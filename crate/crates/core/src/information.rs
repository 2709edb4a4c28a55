//! Entropies, Holevo χ, measured mutual information and the accessible
//! information search. All quantities are in bits.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator_norm, hermitian_eigendecomposition, ComplexMatrix, C64};
use crate::random::{haar_unitary, seeded_stream};
use crate::states::{DensityMatrix, Ensemble, Povm, STATE_TOL};

/// Eigenvalues in `[−CLAMP, 0)` are treated as zero.
const EIGENVALUE_CLAMP: f64 = 1e-10;
/// Perturbation step `ε_x = x · step` used to split accidental degeneracies.
pub const DEGENERACY_SPLIT: f64 = 1e-7;
/// Commutator norm below which an ensemble gets its common eigenbasis as a
/// search candidate.
pub const COMMUTING_TOL: f64 = 1e-8;

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// `H(p) = −Σ p log₂ p`
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {x}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidDistribution(format!(
            "sums to {total}, not 1"
        )));
    }
    Ok(-p.iter().map(|&x| xlog2x(x)).sum::<f64>())
}

fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .map(|&l| {
            debug_assert!(l >= -EIGENVALUE_CLAMP, "eigenvalue {l} below clamp");
            xlog2x(l)
        })
        .sum::<f64>()
}

/// `S(ρ) = −Σ λ log₂ λ`
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// `χ = S(Σ p_x ρ_x) − Σ p_x S(ρ_x)`
pub fn holevo_chi(e: &Ensemble) -> f64 {
    let mixed = von_neumann_entropy(&e.average_state());
    let conditional: f64 = e
        .entries()
        .iter()
        .map(|entry| entry.probability * von_neumann_entropy(&entry.state))
        .sum();
    mixed - conditional
}

/// `p(x, y) = p_x tr(E_y ρ_x)`, indexed `[x][y]`.
pub fn joint_distribution(e: &Ensemble, m: &Povm) -> Result<Vec<Vec<f64>>> {
    if e.dim() != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "ensemble of dimension {} measured by a POVM of dimension {}",
            e.dim(),
            m.dim()
        )));
    }
    Ok(e.entries()
        .iter()
        .map(|entry| {
            m.elements()
                .iter()
                .map(|el| {
                    let tr = trace_of_product(el, entry.state.matrix()).re;
                    (entry.probability * tr).max(0.0)
                })
                .collect()
        })
        .collect())
}

fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `I(X:Y)` of a joint table `p[x][y]`.
pub fn mutual_information_of_joint(joint: &[Vec<f64>]) -> f64 {
    let px: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
    let n_out = joint.first().map_or(0, Vec::len);
    let py: Vec<f64> = (0..n_out)
        .map(|y| joint.iter().map(|row| row[y]).sum())
        .collect();
    let mut info = 0.0;
    for (x, row) in joint.iter().enumerate() {
        for (y, &pxy) in row.iter().enumerate() {
            if pxy > 0.0 && px[x] > 0.0 && py[y] > 0.0 {
                info += pxy * (pxy / (px[x] * py[y])).log2();
            }
        }
    }
    // Rounding can leave a tiny negative sum for independent tables.
    info.max(0.0)
}

/// `I(X:Y)` between the labels `x` and the outcomes `y` of `m`.
pub fn mutual_information(e: &Ensemble, m: &Povm) -> Result<f64> {
    Ok(mutual_information_of_joint(&joint_distribution(e, m)?))
}

pub fn max_pairwise_commutator(states: &[&ComplexMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            worst = worst.max(commutator_norm(states[i], states[j]).expect("same dimension"));
        }
    }
    worst
}

pub fn ensemble_commutator(e: &Ensemble) -> f64 {
    let states: Vec<&ComplexMatrix> = e.states().map(DensityMatrix::matrix).collect();
    max_pairwise_commutator(&states)
}

/// Measured information against the Holevo quantity of one ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub chi_bits: f64,
    pub mutual_information_bits: f64,
    /// `χ − I`
    pub slack_bits: f64,
    pub max_pairwise_commutator: f64,
    /// `slack ≤ tol`
    pub saturated: bool,
}

pub fn certify_bound(e: &Ensemble, m: &Povm, tol: f64) -> Result<BoundCertificate> {
    let mutual_information_bits = mutual_information(e, m)?;
    let chi_bits = holevo_chi(e);
    let slack_bits = chi_bits - mutual_information_bits;
    Ok(BoundCertificate {
        chi_bits,
        mutual_information_bits,
        slack_bits,
        max_pairwise_commutator: ensemble_commutator(e),
        saturated: slack_bits <= tol,
    })
}

/// Simultaneous eigenbasis of `Σ_x (p_x + ε_x) ρ_x`, `ε_x = x · 1e-7`.
fn split_eigenbasis(e: &Ensemble) -> ComplexMatrix {
    let split = e.weighted_sum(|x, p| p + x as f64 * DEGENERACY_SPLIT);
    let split = (&split + &split.adjoint()).scale_real(0.5);
    hermitian_eigendecomposition(&split)
        .expect("weighted sum of density matrices is hermitian")
        .eigenvectors
}

/// Rank-1 projectors onto a simultaneous eigenbasis of a commuting ensemble.
pub fn common_eigenbasis_povm(e: &Ensemble, tol: f64) -> Result<Povm> {
    let commutator = ensemble_commutator(e);
    if commutator > tol {
        return Err(Error::NotCommuting { commutator });
    }
    Povm::projective(&split_eigenbasis(e))
}

/// Best projective measurement found by [`accessible_information_search`].
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub povm: Povm,
    /// Columns are the measured basis vectors.
    pub basis: ComplexMatrix,
    pub bits: f64,
    /// Index of the winning candidate; injected candidates come first.
    pub candidate: usize,
}

const MAX_ASCENT_SWEEPS: usize = 200;
const ASCENT_GRID: usize = 24;

/// Heuristic search for the accessible information over rank-1 projective
/// measurements.
///
/// Candidates are the common eigenbasis (when the ensemble commutes), the
/// eigenbasis of the average state and `restarts` Haar-random bases, each
/// refined by coordinate ascent over Givens rotations. Restarts run in
/// parallel; restart `r` draws from stream `r` of a ChaCha generator seeded
/// with `seed`, and ties go to the lower candidate index, so the result does
/// not depend on scheduling.
pub fn accessible_information_search(e: &Ensemble, restarts: usize, seed: u64) -> SearchOutcome {
    let d = e.dim();
    let mut starts: Vec<ComplexMatrix> = Vec::new();
    if ensemble_commutator(e) <= COMMUTING_TOL {
        starts.push(split_eigenbasis(e));
    }
    starts.push(
        hermitian_eigendecomposition(&e.average_matrix())
            .map(|eig| eig.eigenvectors)
            .unwrap_or_else(|_| ComplexMatrix::identity(d)),
    );
    let injected = starts.len();

    let table = ProbeTable::new(e);
    let refine = |basis: ComplexMatrix| -> (ComplexMatrix, f64) { table.ascend(basis) };

    let mut results: Vec<(ComplexMatrix, f64)> = starts.into_iter().map(refine).collect();
    let random: Vec<(ComplexMatrix, f64)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_stream(seed, r as u64);
            refine(haar_unitary(d, &mut rng))
        })
        .collect();
    results.extend(random);
    debug_assert_eq!(results.len(), injected + restarts);

    let (candidate, (basis, bits)) = results
        .into_iter()
        .enumerate()
        .reduce(|best, next| if next.1 .1 > best.1 .1 { next } else { best })
        .expect("at least one candidate");
    let povm = Povm::with_tolerance(
        (0..d)
            .map(|k| ComplexMatrix::outer(&basis.column(k)))
            .collect(),
        1e-9,
    )
    .expect("refined basis stays unitary");
    SearchOutcome {
        povm,
        basis,
        bits,
        candidate,
    }
}

/// Ensemble data for fast evaluation of projective measurements.
struct ProbeTable {
    probs: Vec<f64>,
    states: Vec<ComplexMatrix>,
    dim: usize,
}

impl ProbeTable {
    fn new(e: &Ensemble) -> Self {
        Self {
            probs: e.probabilities(),
            states: e.states().map(|s| s.matrix().clone()).collect(),
            dim: e.dim(),
        }
    }

    /// `p_x ⟨v|ρ_x|v⟩` for every `x`.
    fn column(&self, v: &[C64]) -> Vec<f64> {
        self.states
            .iter()
            .zip(&self.probs)
            .map(|(rho, &p)| (p * ComplexMatrix::inner(v, &rho.apply(v)).re).max(0.0))
            .collect()
    }

    fn information(columns: &[Vec<f64>]) -> f64 {
        // columns[k][x] = p(x, k)
        let n_x = columns.first().map_or(0, Vec::len);
        let joint: Vec<Vec<f64>> = (0..n_x)
            .map(|x| columns.iter().map(|c| c[x]).collect())
            .collect();
        mutual_information_of_joint(&joint)
    }

    /// Coordinate ascent over the one-parameter rotations
    /// `R_pq(θ) = exp(θ (E_qp − E_pq))` and `C_pq(θ) = exp(iθ (E_pq + E_qp))`.
    fn ascend(&self, basis: ComplexMatrix) -> (ComplexMatrix, f64) {
        let d = self.dim;
        let mut cols: Vec<Vec<C64>> = (0..d).map(|k| basis.column(k)).collect();
        let mut probe: Vec<Vec<f64>> = cols.iter().map(|v| self.column(v)).collect();
        let mut best = Self::information(&probe);
        if d < 2 {
            return (basis, best);
        }
        for _ in 0..MAX_ASCENT_SWEEPS {
            let start = best;
            for p in 0..d {
                for q in p + 1..d {
                    for complex in [false, true] {
                        let rotated = |theta: f64| {
                            let (s, c) = theta.sin_cos();
                            let coupling = if complex {
                                C64::new(0.0, s)
                            } else {
                                C64::new(s, 0.0)
                            };
                            let back = if complex { coupling } else { -coupling };
                            let vp: Vec<C64> = cols[p]
                                .iter()
                                .zip(&cols[q])
                                .map(|(a, b)| a * c + b * coupling)
                                .collect();
                            let vq: Vec<C64> = cols[p]
                                .iter()
                                .zip(&cols[q])
                                .map(|(a, b)| a * back + b * c)
                                .collect();
                            (vp, vq)
                        };
                        let score = |theta: f64, probe: &mut Vec<Vec<f64>>| {
                            let (vp, vq) = rotated(theta);
                            probe[p] = self.column(&vp);
                            probe[q] = self.column(&vq);
                            Self::information(probe)
                        };
                        let mut scratch = probe.clone();
                        let theta = maximize_periodic(|t| score(t, &mut scratch));
                        let value = score(theta, &mut scratch);
                        if value > best {
                            best = value;
                            let (vp, vq) = rotated(theta);
                            cols[p] = vp;
                            cols[q] = vq;
                            probe = scratch;
                        }
                    }
                }
            }
            if best - start <= 1e-13 {
                break;
            }
        }
        (ComplexMatrix::from_columns(&cols).expect("square"), best)
    }
}

/// Maximize a function of a rotation angle over `[−π/4, π/4]` (any rotation
/// by π/2 only relabels outcomes): coarse grid, then golden-section.
fn maximize_periodic(mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = std::f64::consts::FRAC_PI_4;
    let step = 2.0 * half / ASCENT_GRID as f64;
    let mut best_t = 0.0;
    let mut best_v = f(0.0);
    for i in 0..=ASCENT_GRID {
        let t = -half + i as f64 * step;
        let v = f(t);
        if v > best_v {
            best_v = v;
            best_t = t;
        }
    }
    let (mut lo, mut hi) = (best_t - step, best_t + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    let t = 0.5 * (lo + hi);
    if f(t) >= best_v {
        t
    } else {
        best_t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;
    use crate::states::PureState;
    use rand::Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(v: &[f64]) -> DensityMatrix {
        let amps = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        DensityMatrix::pure(&PureState::new(amps).unwrap())
    }

    fn zero_plus() -> Ensemble {
        Ensemble::new(vec![
            (0.5, ket(&[1.0, 0.0])),
            (0.5, ket(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])),
        ])
        .unwrap()
    }

    fn binary_entropy(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert!((shannon_entropy(&[0.3, 0.7]).unwrap() - 0.8813).abs() < 1e-4);
        assert!(shannon_entropy(&[0.3, 0.6]).is_err());
        assert!(shannon_entropy(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn von_neumann_examples() {
        assert!(von_neumann_entropy(&ket(&[0.6, 0.8])).abs() < 1e-12);
        for d in 1..=8 {
            let s = von_neumann_entropy(&DensityMatrix::maximally_mixed(d));
            assert!((s - (d as f64).log2()).abs() < 1e-10);
        }
        let s = von_neumann_entropy(
            &DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.9, 0.1])).unwrap(),
        );
        assert!((s - 0.4690).abs() < 1e-4);
        assert!((s - binary_entropy(0.9)).abs() < 1e-14);
    }

    #[test]
    fn chi_examples() {
        let single = Ensemble::new(vec![(1.0, ket(&[0.6, 0.8]))]).unwrap();
        assert!(holevo_chi(&single).abs() < 1e-12);
        let orth = Ensemble::new(vec![(0.5, ket(&[1.0, 0.0])), (0.5, ket(&[0.0, 1.0]))]).unwrap();
        assert!((holevo_chi(&orth) - 1.0).abs() < 1e-12);
        // Average state has eigenvalues (1 ± 1/√2)/2.
        let oracle = binary_entropy((1.0 + FRAC_1_SQRT_2) / 2.0);
        assert!((holevo_chi(&zero_plus()) - oracle).abs() < 1e-12);
        assert!((holevo_chi(&zero_plus()) - 0.6009).abs() < 1e-3);
    }

    #[test]
    fn mutual_information_examples() {
        let orth = Ensemble::new(vec![(0.5, ket(&[1.0, 0.0])), (0.5, ket(&[0.0, 1.0]))]).unwrap();
        assert!((mutual_information(&orth, &Povm::computational(2)).unwrap() - 1.0).abs() < 1e-12);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let blind = Povm::new(vec![half.clone(), half]).unwrap();
        assert!(mutual_information(&zero_plus(), &blind).unwrap().abs() < 1e-15);
        assert!(mutual_information(&zero_plus(), &Povm::computational(3)).is_err());
    }

    #[test]
    fn certificate_examples() {
        let commuting = Ensemble::new(vec![
            (
                0.4,
                DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.9, 0.1])).unwrap(),
            ),
            (
                0.6,
                DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.2, 0.8])).unwrap(),
            ),
        ])
        .unwrap();
        let cert = certify_bound(&commuting, &Povm::computational(2), 1e-9).unwrap();
        assert!(cert.saturated);
        assert!(cert.slack_bits.abs() <= 1e-9);
        assert_eq!(cert.max_pairwise_commutator, 0.0);

        let cert = certify_bound(&zero_plus(), &Povm::trivial(2), 1e-9).unwrap();
        assert_eq!(cert.mutual_information_bits, 0.0);
        assert!((cert.slack_bits - cert.chi_bits).abs() < 1e-15);
        assert!(!cert.saturated);
    }

    #[test]
    fn non_commuting_pair_is_never_saturated_by_random_povms() {
        let mut rng = seeded(2024);
        for _ in 0..100 {
            let outcomes = rng.random_range(1..=4);
            let povm = crate::random::random_povm(2, outcomes, &mut rng);
            let cert = certify_bound(&zero_plus(), &povm, 1e-9).unwrap();
            assert!(cert.slack_bits > 0.0);
        }
    }

    #[test]
    fn common_basis_examples() {
        let diag = Ensemble::new(vec![
            (
                0.5,
                DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.7, 0.2, 0.1])).unwrap(),
            ),
            (
                0.5,
                DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.1, 0.1, 0.8])).unwrap(),
            ),
        ])
        .unwrap();
        let povm = common_eigenbasis_povm(&diag, 1e-10).unwrap();
        // Each element is a computational projector.
        for el in povm.elements() {
            let d = el.diagonal();
            let ones = d.iter().filter(|z| (z.re - 1.0).abs() < 1e-12).count();
            assert_eq!(ones, 1);
            assert!((el.max_norm() - 1.0).abs() < 1e-12);
        }
        assert!(certify_bound(&diag, &povm, 1e-9).unwrap().saturated);

        let single = Ensemble::new(vec![(1.0, ket(&[0.6, 0.8]))]).unwrap();
        let povm = common_eigenbasis_povm(&single, 1e-10).unwrap();
        assert!(
            certify_bound(&single, &povm, 1e-12)
                .unwrap()
                .slack_bits
                .abs()
                < 1e-12
        );

        assert!(matches!(
            common_eigenbasis_povm(&zero_plus(), 1e-6),
            Err(Error::NotCommuting { .. })
        ));
    }

    #[test]
    fn search_on_trivial_and_commuting_ensembles() {
        let single = Ensemble::new(vec![(1.0, ket(&[0.6, 0.8]))]).unwrap();
        assert!(accessible_information_search(&single, 3, 1).bits.abs() < 1e-12);

        let commuting = Ensemble::new(vec![
            (
                0.3,
                DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.9, 0.05, 0.05])).unwrap(),
            ),
            (
                0.7,
                DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.1, 0.6, 0.3])).unwrap(),
            ),
        ])
        .unwrap();
        let out = accessible_information_search(&commuting, 4, 7);
        assert!((out.bits - holevo_chi(&commuting)).abs() < 1e-6);
        assert!((mutual_information(&commuting, &out.povm).unwrap() - out.bits).abs() < 1e-12);
    }

    #[test]
    fn search_is_seed_deterministic() {
        let e = crate::random::random_ensemble(3, 3, &mut seeded(1));
        let a = accessible_information_search(&e, 6, 11);
        let b = accessible_information_search(&e, 6, 11);
        assert_eq!(a.bits.to_bits(), b.bits.to_bits());
        assert_eq!(a.basis, b.basis);
        assert_eq!(a.candidate, b.candidate);
        assert!(a.bits <= holevo_chi(&e) + 1e-9);
    }
}
