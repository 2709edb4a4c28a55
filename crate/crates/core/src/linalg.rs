//! Dense complex matrices and the handful of operations the measurement model
//! needs: products, Kronecker products, partial traces over the system factor
//! and a cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Joint matrices always use the system ⊗ apparatus ordering: row/column index
//! `i * d_app + k` labels the basis vector `|i⟩_sys |k⟩_app`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from row-major entries. Fails on ragged or empty input and on
    /// non-finite entries.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        let data: Vec<C64> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    /// Real-valued convenience constructor, mostly for literals in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// Square matrix whose k-th column is `columns[k]`.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let n = columns.len();
        if n == 0 || columns.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidArgument(
                "columns must form a square matrix".into(),
            ));
        }
        let mut m = Self::zeros(n, n);
        for (k, col) in columns.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                m[(i, k)] = z;
            }
        }
        Ok(m)
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix, or a `NotSquare` error.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.cols).map(<[C64]>::to_vec).collect()
    }

    pub fn column(&self, k: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, k)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `M v`
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `U M U†`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Max-norm of `M − M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Max-norm of `M†M − I`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&(&self.adjoint() * self) - &Self::identity(self.rows)).max_norm()
    }

    /// `⟨u|v⟩` with the first argument conjugated.
    pub fn inner(u: &[C64], v: &[C64]) -> C64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Row-major nested arrays of [re, im] pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<C64>>::deserialize(deserializer)?;
        ComplexMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Kronecker product `a ⊗ b`, with `a` as the system (outer) factor.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(a.rows * br, a.cols * bc);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Trace out the system factor of a `(d_sys·d_app)`-square joint matrix.
pub fn partial_trace_system(
    joint: &ComplexMatrix,
    d_sys: usize,
    d_app: usize,
) -> Result<ComplexMatrix> {
    let expected = d_sys * d_app;
    if expected == 0 || joint.rows != expected || joint.cols != expected {
        return Err(Error::BadJointDimension {
            expected,
            rows: joint.rows,
            cols: joint.cols,
        });
    }
    let mut out = ComplexMatrix::zeros(d_app, d_app);
    for i in 0..d_sys {
        for k in 0..d_app {
            for l in 0..d_app {
                out[(k, l)] += joint[(i * d_app + k, i * d_app + l)];
            }
        }
    }
    Ok(out)
}

/// Max-norm of `AB − BA`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let n = a.square_dim()?;
    if b.rows != n || b.cols != n {
        return Err(Error::DimensionMismatch(format!(
            "commutator of {n}x{n} with {}x{}",
            b.rows, b.cols
        )));
    }
    let ab = a * b;
    let ba = b * a;
    // Compare entry-wise in a fixed order so that the result is exactly
    // symmetric in the arguments.
    Ok(ab
        .data
        .iter()
        .zip(&ba.data)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && m.unitarity_defect() <= tol
}

/// Spectrum of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(λ) V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }

    /// `V diag(f(λ)) V†`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

pub const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi eigensolver.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = m.square_dim()?;
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL || !defect.is_finite() {
        return Err(Error::NotHermitian { defect });
    }

    let mut a = m.clone();
    // Symmetrize so that rounding in the input does not bias the rotations.
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-17 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, new_k)] = v[(i, old_k)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilate `a[p,q]` with `A ← G† A G`, `V ← V G`, where
/// `G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` on the (p, q) plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b < f64::MIN_POSITIVE {
        return;
    }
    let phase = (apq / b).conj();
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase * -s;
    let g_qq = phase * c;
    let n = a.rows;

    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Nearest unitary to `a` in Frobenius norm, `A (A†A)^{-1/2}`.
pub fn polar_unitary(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    let gram = &a.adjoint() * a;
    let eig = hermitian_eigendecomposition(&gram)?;
    let smallest = eig.eigenvalues[n - 1];
    if smallest <= 1e-24 * eig.eigenvalues[0].max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(
            "polar decomposition of a singular matrix".into(),
        ));
    }
    Ok(a * &eig.map_spectrum(|x| 1.0 / x.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[1.0, -1.0])
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn identity_tensor_x_flips_apparatus() {
        let u = tensor_product(&ComplexMatrix::identity(2), &pauli_x());
        // |0⟩|0⟩ (index 0) ↦ |0⟩|1⟩ (index 1)
        let mut e0 = vec![ZERO; 4];
        e0[0] = ONE;
        let out = u.apply(&e0);
        assert_eq!(out, vec![ZERO, ONE, ZERO, ZERO]);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(u[(i, j)], pauli_x()[(i, j)]);
            }
        }
    }

    #[test]
    fn scalar_tensor_is_identity_map() {
        let m = random_hermitian(3, &mut ChaCha8Rng::seed_from_u64(1));
        let one = ComplexMatrix::identity(1);
        assert_eq!(tensor_product(&one, &m), m);
    }

    #[test]
    fn diagonal_kronecker() {
        let out = tensor_product(
            &ComplexMatrix::from_diagonal(&[1.0, 2.0]),
            &ComplexMatrix::from_diagonal(&[3.0, 4.0]),
        );
        assert_eq!(out, ComplexMatrix::from_diagonal(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn partial_trace_of_pure_system_factor() {
        let m = random_hermitian(3, &mut ChaCha8Rng::seed_from_u64(2));
        let sys = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let out = partial_trace_system(&tensor_product(&sys, &m), 2, 3).unwrap();
        assert!((&out - &m).max_norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_cnot_on_plus_zero() {
        // Hand computation: CNOT |+⟩|0⟩ = (|00⟩ + |11⟩)/√2, whose joint
        // density matrix has 1/2 at the corners (0,0), (0,3), (3,0), (3,3).
        let cnot = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let plus = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let zero = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let joint = tensor_product(&plus, &zero).conjugate_by(&cnot);
        let bell = ComplexMatrix::from_real_rows(&[
            &[0.5, 0.0, 0.0, 0.5],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.5, 0.0, 0.0, 0.5],
        ])
        .unwrap();
        assert!((&joint - &bell).max_norm() < 1e-15);
        let reduced = partial_trace_system(&joint, 2, 2).unwrap();
        assert!((&reduced - &ComplexMatrix::from_diagonal(&[0.5, 0.5])).max_norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dimension() {
        let err = partial_trace_system(&ComplexMatrix::identity(5), 2, 2).unwrap_err();
        assert!(err.to_string().contains("bad joint dimension"));
        assert!(partial_trace_system(&ComplexMatrix::zeros(4, 2), 2, 2).is_err());
    }

    #[test]
    fn eigen_of_diagonal() {
        let eig = hermitian_eigendecomposition(&ComplexMatrix::from_diagonal(&[0.9, 0.1])).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.9, 0.1]);
        assert_eq!(eig.eigenvectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn eigen_of_pauli_x() {
        let x = pauli_x();
        let eig = hermitian_eigendecomposition(&x).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let xv = x.apply(&v);
            for i in 0..2 {
                assert!((xv[i] - v[i] * lambda).norm() < 1e-14);
                assert!((v[i].norm() - h).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random_hermitian(5, &mut rng);
            let eig = hermitian_eigendecomposition(&m).unwrap();
            assert!((&eig.reconstruct() - &m).max_norm() < 1e-9);
            assert!(eig.eigenvectors.unitarity_defect() < 1e-10);
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
                let v = eig.eigenvectors.column(k);
                let mv = m.apply(&v);
                let residual = mv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * lambda).norm())
                    .fold(0.0, f64::max);
                assert!(residual < 1e-10);
            }
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let err = hermitian_eigendecomposition(&m).unwrap_err();
        assert!(err.to_string().contains("not hermitian"));
    }

    #[test]
    fn commutator_examples() {
        let m = random_hermitian(3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(commutator_norm(&m, &m).unwrap(), 0.0);
        let d1 = ComplexMatrix::from_diagonal(&[0.3, -1.2]);
        let d2 = ComplexMatrix::from_diagonal(&[2.0, 5.0]);
        assert_eq!(commutator_norm(&d1, &d2).unwrap(), 0.0);
        // XZ − ZX = [[0, -2], [2, 0]]
        assert_eq!(commutator_norm(&pauli_x(), &pauli_z()).unwrap(), 2.0);
        assert!(commutator_norm(&m, &ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn unitary_examples() {
        assert!(is_unitary(&ComplexMatrix::identity(4), 1e-10));
        assert!(!is_unitary(
            &ComplexMatrix::from_diagonal(&[1.0, 2.0]),
            1e-10
        ));
        assert!(!is_unitary(&ComplexMatrix::zeros(2, 3), 1e-10));
    }

    #[test]
    fn polar_of_scaled_unitary_is_the_unitary() {
        let x = pauli_x().scale(C64::new(0.0, 3.0));
        let u = polar_unitary(&x).unwrap();
        assert!((&u - &pauli_x().scale(C64::new(0.0, 1.0))).max_norm() < 1e-14);
        assert!(polar_unitary(&ComplexMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn matrix_json_is_nested_pairs() {
        let m = ComplexMatrix::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), C64::new(2.0, 0.0)],
        ])
        .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[[1.0,0.0],[0.0,-1.0]],[[0.0,1.0],[2.0,0.0]]]");
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexMatrix>("[[[1.0,0.0]],[]]").is_err());
    }
}
