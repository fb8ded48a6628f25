//! Seeded generators for random states, observables and unitaries.
//!
//! All generators draw from ChaCha8 streams so results are reproducible
//! across platforms for a given `(seed, stream)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{HermitianMatrix, Matrix};

/// Generator keyed by `seed` on the given stream.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn uniform_complex<R: Rng>(r: &mut R, half_width: f64) -> Complex64 {
    Complex64::new(
        r.random_range(-half_width..=half_width),
        r.random_range(-half_width..=half_width),
    )
}

/// Real matrix with entries uniform in `[-half_width, half_width]`.
pub fn real_matrix<R: Rng>(r: &mut R, dim: usize, half_width: f64) -> Matrix {
    Matrix::from_fn(dim, |_, _| {
        Complex64::new(r.random_range(-half_width..=half_width), 0.0)
    })
}

/// Complex matrix with real and imaginary parts uniform in `[-half_width, half_width]`.
pub fn complex_matrix<R: Rng>(r: &mut R, dim: usize, half_width: f64) -> Matrix {
    Matrix::from_fn(dim, |_, _| uniform_complex(r, half_width))
}

/// Real symmetric matrix; the upper triangle (row-major, with diagonal) is
/// drawn uniformly from `[-half_width, half_width]` and mirrored.
pub fn real_symmetric<R: Rng>(r: &mut R, dim: usize, half_width: f64) -> HermitianMatrix {
    let mut m = Matrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let x = Complex64::new(r.random_range(-half_width..=half_width), 0.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    HermitianMatrix::symmetrize(&m)
}

/// Complex Hermitian matrix with entries of magnitude at most about `half_width`.
pub fn hermitian<R: Rng>(r: &mut R, dim: usize, half_width: f64) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&complex_matrix(r, dim, half_width))
}

/// `G G* + eps I` with `G` of the given rank (full rank if `rank >= dim`).
pub fn psd<R: Rng>(r: &mut R, dim: usize, rank: usize, eps: f64, complex: bool) -> HermitianMatrix {
    let rank = rank.clamp(1, dim);
    let g = Matrix::from_fn(dim, |_, j| {
        if j >= rank {
            Complex64::new(0.0, 0.0)
        } else if complex {
            uniform_complex(r, 1.0)
        } else {
            Complex64::new(r.random_range(-1.0..=1.0), 0.0)
        }
    });
    let gg = &g * &g.adjoint();
    HermitianMatrix::symmetrize(&(&gg + &Matrix::identity(dim).scale(eps)))
}

/// Full-rank positive definite state normalized to trace one.
pub fn density_matrix<R: Rng>(r: &mut R, dim: usize, complex: bool) -> HermitianMatrix {
    let m = psd(r, dim, dim, 1e-3, complex);
    let t = m.trace();
    m.scale(1.0 / t)
}

/// Normalized rank-one projection `|ψ⟩⟨ψ|`.
pub fn pure_state<R: Rng>(r: &mut R, dim: usize, complex: bool) -> HermitianMatrix {
    let psi: Vec<Complex64> = (0..dim)
        .map(|_| {
            if complex {
                uniform_complex(r, 1.0)
            } else {
                Complex64::new(r.random_range(-1.0..=1.0), 0.0)
            }
        })
        .collect();
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let m = Matrix::from_fn(dim, |i, j| psi[i] * psi[j].conj() / norm2);
    HermitianMatrix::symmetrize(&m)
}

/// Unitary from Gram-Schmidt orthonormalization of a random complex matrix.
pub fn unitary<R: Rng>(r: &mut R, dim: usize) -> Matrix {
    let a = complex_matrix(r, dim, 1.0);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|i| a[(i, j)]).collect();
        // Two passes of modified Gram-Schmidt for orthogonality at rounding level.
        for _ in 0..2 {
            for q in &cols {
                let dot: Complex64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= dot * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in &mut v {
            *vi /= norm;
        }
        cols.push(v);
    }
    Matrix::from_fn(dim, |i, j| cols[j][i])
}
