//! Seeded generators for random unitaries, states, ensembles and POVMs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{hermitian_eigendecomposition, ComplexMatrix, C64};
use crate::states::{DensityMatrix, Ensemble, Povm, PureState};

/// Generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn seeded_stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Haar-distributed unitary via Gram-Schmidt on a Ginibre matrix.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        let g = ginibre(d, d, rng);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        let mut degenerate = false;
        for k in 0..d {
            let mut v = g.column(k);
            // Two passes of modified Gram-Schmidt keep the basis orthonormal
            // to machine precision.
            for _ in 0..2 {
                for u in &cols {
                    let proj = ComplexMatrix::inner(u, &v);
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= proj * ui;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
        if !degenerate {
            return ComplexMatrix::from_columns(&cols).expect("square");
        }
    }
}

/// Uniform point on the probability simplex.
pub fn random_distribution(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

pub fn random_pure_state(d: usize, rng: &mut impl Rng) -> PureState {
    let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(v.into_iter().map(|z| z / norm).collect()).expect("normalized")
}

/// `G G† / tr` for a `d × rank` Ginibre matrix `G`.
pub fn random_density_matrix(d: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(d, rank.max(1), rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    let mut m = m.scale_real(1.0 / tr);
    for i in 0..d {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    DensityMatrix::new(m).expect("Wishart matrix is a valid state")
}

/// Ensemble of `n` random states of random rank.
pub fn random_ensemble(d: usize, n: usize, rng: &mut impl Rng) -> Ensemble {
    let probs = random_distribution(n, rng);
    let entries = probs
        .into_iter()
        .map(|p| {
            let rank = rng.random_range(1..=d);
            (p, random_density_matrix(d, rank, rng))
        })
        .collect();
    Ensemble::new(entries).expect("valid ensemble")
}

/// `E_y = S^{-1/2} A_y† A_y S^{-1/2}` with `S = Σ A_y† A_y`.
pub fn random_povm(d: usize, outcomes: usize, rng: &mut impl Rng) -> Povm {
    let outcomes = outcomes.max(1);
    loop {
        let raw: Vec<ComplexMatrix> = (0..outcomes)
            .map(|_| {
                let rank = rng.random_range(1..=d);
                let a = ginibre(rank, d, rng);
                &a.adjoint() * &a
            })
            .collect();
        let total = raw
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, e| &acc + e);
        let eig = hermitian_eigendecomposition(&total).expect("hermitian");
        if eig.eigenvalues[d - 1] < 1e-6 {
            continue;
        }
        let inv_sqrt = eig.map_spectrum(|x| 1.0 / x.sqrt());
        let elements: Vec<ComplexMatrix> = raw
            .iter()
            .map(|e| {
                let mut m = &(&inv_sqrt * e) * &inv_sqrt;
                // Remove rounding asymmetry.
                m = (&m + &m.adjoint()).scale_real(0.5);
                m
            })
            .collect();
        if let Ok(p) = Povm::with_tolerance(elements, 1e-10) {
            return p;
        }
    }
}

/// Projective measurement in a Haar-random basis.
pub fn random_projective_povm(d: usize, rng: &mut impl Rng) -> Povm {
    Povm::projective(&haar_unitary(d, rng)).expect("unitary basis")
}

/// Random phases in `[0, 2π)`.
pub fn random_phases(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect()
}
