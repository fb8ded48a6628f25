//! Dense complex matrices and Hermitian spectral calculus.
//!
//! Everything here is sized for the small systems this crate deals with
//! (a handful of qubits or qutrits). Matrices are stored row-major.
//! The eigensolver is a cyclic complex Jacobi iteration.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative Hermiticity tolerance accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius mass drops below this
/// fraction of the Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-14;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues within `PSD_CLAMP * max eigenvalue` of zero are treated as
/// rounding noise and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-12;

/// Square dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data; `data.len()` must be a perfect square.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::InvalidMatrix(format!(
                    "row of length {} in a {dim}x{dim} matrix",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data
            .chunks(self.dim.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `trace(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Matrix) -> Complex64 {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from Hermiticity, `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    fn check_same_dim(&self, other: &Matrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                if z.im == 0.0 {
                    write!(f, "{:>12.6} ", z.re)?;
                } else {
                    write!(f, "{:>12.6}{:+.6}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let real = self.is_real();
        for i in 0..self.dim {
            write!(f, "[")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                if real {
                    write!(f, "{:.10}", z.re)?;
                } else {
                    write!(f, "{:.10}{:+.10}i", z.re, z.im)?;
                }
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A square complex matrix that is Hermitian by construction.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    /// Accepts `m` if it is Hermitian up to `HERMITIAN_TOL * max|entry|`,
    /// then stores its exact Hermitian part.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if m.data
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let defect = m.hermitian_defect();
        let bound = HERMITIAN_TOL * m.max_abs();
        if defect > bound {
            return Err(Error::InvalidMatrix(format!(
                "not Hermitian (defect {defect:e} exceeds {bound:e})"
            )));
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Projects an arbitrary square matrix onto its Hermitian part.
    pub fn symmetrize(m: &Matrix) -> Self {
        assert!(m.dim() >= 1, "dimension must be at least 1");
        Self(m.hermitian_part())
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self(Matrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(Matrix::zeros(dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(Matrix::from_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Real trace; Hermitian matrices have a real diagonal.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<Self> {
        self.0.check_same_dim(&other.0)?;
        Ok(Self(&self.0 + &other.0))
    }

    /// Unitary conjugation `U A U*`.
    pub fn conjugate_by(&self, u: &Matrix) -> Result<Self> {
        let tmp = u.try_mul(&self.0)?;
        Ok(Self::symmetrize(&tmp.try_mul(&u.adjoint())?))
    }
}

impl std::ops::Deref for HermitianMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.0
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Eigenvalues in ascending order with the matching unitary eigenvector
/// matrix (eigenvectors are columns).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenDecomposition {
    /// `V diag(values) V*`.
    pub fn compose(&self, values: &[f64]) -> HermitianMatrix {
        let n = self.vectors.dim();
        let v = &self.vectors;
        let m = Matrix::from_fn(n, |i, j| {
            let mut acc = ZERO;
            for (k, &d) in values.iter().enumerate() {
                acc += v[(i, k)] * v[(j, k)].conj() * d;
            }
            acc
        });
        HermitianMatrix::symmetrize(&m)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.compose(&self.eigenvalues)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues with rounding-level values clamped to zero.
    ///
    /// With `τ = PSD_CLAMP * max eigenvalue`, eigenvalues in `[-τ, τ]` become 0
    /// (positive noise matters too: `sqrt(1e-17)` is not negligible). Fails
    /// if some eigenvalue lies below `-τ`.
    pub fn clamped_eigenvalues(&self) -> Result<Vec<f64>> {
        let threshold = PSD_CLAMP * self.max_eigenvalue().max(0.0);
        self.eigenvalues
            .iter()
            .map(|&l| {
                if l > threshold {
                    Ok(l)
                } else if l >= -threshold {
                    Ok(0.0)
                } else {
                    Err(Error::NotPositiveSemiDefinite {
                        eigenvalue: l,
                        threshold,
                    })
                }
            })
            .collect()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eigh(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let norm = m.frobenius_norm();
    let target = JACOBI_TOL * norm;

    let off_mass = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_mass(&m);
    while off > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        off = off_mass(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        vectors,
    })
}

/// One Jacobi rotation annihilating `m[p][q]`. Applies `m <- G* m G`, `v <- v G`.
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip rotations whose effect would be lost below rounding of the diagonal.
    if app.abs() + 1e3 * r == app.abs() && aqq.abs() + 1e3 * r == aqq.abs() {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / r; // e^{i phi}
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = m.dim();
    // columns: m <- m G
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
    }
    // rows: m <- G* m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// `f(A) = V diag(f(eigenvalues)) V*`.
///
/// Fails if `f` returns a non-finite value at any eigenvalue.
pub fn apply_spectral_function(
    a: &HermitianMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix> {
    let eig = eigh(a)?;
    let values = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            let y = f(l);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::SpectralFunctionUndefined { eigenvalue: l })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(eig.compose(&values))
}

/// `x^p` on clamped eigenvalues, with `p = 1/2` routed through `sqrt`.
pub(crate) fn scalar_power(x: f64, p: f64) -> f64 {
    if p == 0.5 {
        x.sqrt()
    } else if x == 0.0 {
        if p == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        x.powf(p)
    }
}

/// Powers `A^p` of a positive semi-definite matrix for each `p` in `exponents`,
/// sharing one eigendecomposition.
pub fn psd_powers(a: &HermitianMatrix, exponents: &[f64]) -> Result<Vec<HermitianMatrix>> {
    let eig = eigh(a)?;
    let values = eig.clamped_eigenvalues()?;
    Ok(exponents
        .iter()
        .map(|&p| {
            let powered: Vec<f64> = values.iter().map(|&x| scalar_power(x, p)).collect();
            eig.compose(&powered)
        })
        .collect())
}

pub fn psd_power(a: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    Ok(psd_powers(a, &[p])?.remove(0))
}

/// Positive semi-definite square root.
pub fn psd_sqrt(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    psd_power(a, 0.5)
}

/// `AB - BA`; anti-Hermitian for Hermitian inputs.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    Ok(&ab - &ba)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho12() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[
            [7.0, 5.0, 5.0, 6.0],
            [5.0, 6.0, 2.0, 5.0],
            [5.0, 2.0, 6.0, 5.0],
            [6.0, 5.0, 5.0, 7.0],
        ])
        .unwrap()
    }

    #[test]
    fn eigh_counterexample_spectrum() {
        let eig = eigh(&rho12()).unwrap();
        let s17 = 17f64.sqrt();
        let expected = [0.5 * (21.0 - 5.0 * s17), 1.0, 4.0, 0.5 * (21.0 + 5.0 * s17)];
        for (got, want) in eig.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(eig.reconstruct().max_abs_diff(&rho12()) < 1e-12);
    }

    #[test]
    fn eigh_two_by_two() {
        let r1 = HermitianMatrix::from_real_rows(&[[13.0, 10.0], [10.0, 13.0]]).unwrap();
        let eig = eigh(&r1).unwrap();
        assert!((eig.eigenvalues[0] - 3.0).abs() < 1e-13);
        assert!((eig.eigenvalues[1] - 23.0).abs() < 1e-13);
    }

    #[test]
    fn eigh_identity() {
        let eig = eigh(&HermitianMatrix::identity(4)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0; 4]);
        assert_eq!(eig.vectors, Matrix::identity(4));
    }

    #[test]
    fn eigh_complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = Matrix::from_rows(&[
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        let eig = eigh(&h).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&h) < 1e-14);
    }

    #[test]
    fn eigh_zero_matrix() {
        let eig = eigh(&HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn new_rejects_non_hermitian() {
        let m = Matrix::from_real_rows(&[[1.0, 2.0], [3.0, 1.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::InvalidMatrix(_))
        ));
        assert!(HermitianMatrix::new(Matrix::zeros(0)).is_err());
    }

    #[test]
    fn sqrt_of_counterexample_is_integer_matrix() {
        let root = apply_spectral_function(&rho12(), f64::sqrt).unwrap();
        let want = Matrix::from_real_rows(&[
            [2.0, 1.0, 1.0, 1.0],
            [1.0, 2.0, 0.0, 1.0],
            [1.0, 0.0, 2.0, 1.0],
            [1.0, 1.0, 1.0, 2.0],
        ])
        .unwrap();
        assert!(root.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn sqrt_of_marginal() {
        let r1 = HermitianMatrix::from_real_rows(&[[13.0, 10.0], [10.0, 13.0]]).unwrap();
        let root = apply_spectral_function(&r1, f64::sqrt).unwrap();
        let (s3, s23) = (3f64.sqrt(), 23f64.sqrt());
        let want = Matrix::from_real_rows(&[
            [(s3 + s23) / 2.0, (s23 - s3) / 2.0],
            [(s23 - s3) / 2.0, (s3 + s23) / 2.0],
        ])
        .unwrap();
        assert!(root.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn identity_function_is_identity() {
        let a = rho12();
        let b = apply_spectral_function(&a, |x| x).unwrap();
        assert!(b.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn spectral_function_undefined() {
        let a = HermitianMatrix::from_diagonal(&[-1.0, 2.0]);
        assert!(matches!(
            apply_spectral_function(&a, f64::sqrt),
            Err(Error::SpectralFunctionUndefined { .. })
        ));
    }

    #[test]
    fn psd_clamp_policy() {
        // Tiny negative eigenvalue: clamped.
        let a = HermitianMatrix::from_diagonal(&[-1e-14, 4.0]);
        let r = psd_sqrt(&a).unwrap();
        assert_eq!(r[(0, 0)].re, 0.0);
        assert_eq!(r[(1, 1)].re, 2.0);
        // Genuinely indefinite: rejected.
        let b = HermitianMatrix::from_diagonal(&[-1e-6, 4.0]);
        assert!(matches!(
            psd_power(&b, 0.3),
            Err(Error::NotPositiveSemiDefinite { .. })
        ));
    }

    #[test]
    fn commutators_from_the_worked_example() {
        let root = psd_sqrt(&rho12()).unwrap();
        let k12 = HermitianMatrix::from_real_rows(&[
            [11.0, 1.0, 1.0, 0.0],
            [1.0, 20.0, 0.0, 1.0],
            [1.0, 0.0, 2.0, 1.0],
            [0.0, 1.0, 1.0, 11.0],
        ])
        .unwrap();
        let c = commutator(&root, &k12).unwrap();
        let want = Matrix::from_real_rows(&[
            [0.0, 10.0, -8.0, 0.0],
            [-10.0, 0.0, 0.0, -10.0],
            [8.0, 0.0, 0.0, 8.0],
            [0.0, 10.0, -8.0, 0.0],
        ])
        .unwrap();
        assert!(c.max_abs_diff(&want) < 1e-11);

        let r1 = HermitianMatrix::from_real_rows(&[[13.0, 10.0], [10.0, 13.0]]).unwrap();
        let k1 = HermitianMatrix::from_real_rows(&[[10.0, 1.0], [1.0, 1.0]]).unwrap();
        let c1 = commutator(&psd_sqrt(&r1).unwrap(), &k1).unwrap();
        let off = 4.5 * (23f64.sqrt() - 3f64.sqrt());
        assert!(c1[(0, 0)].norm() < 1e-13 && c1[(1, 1)].norm() < 1e-13);
        assert!((c1[(0, 1)].re + off).abs() < 1e-12);
        assert!((c1[(1, 0)].re - off).abs() < 1e-12);
    }

    #[test]
    fn self_commutator_vanishes() {
        let a = rho12();
        let c = commutator(&a, &a).unwrap();
        assert_eq!(c.max_abs(), 0.0);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        assert!(matches!(
            commutator(&Matrix::identity(2), &Matrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
