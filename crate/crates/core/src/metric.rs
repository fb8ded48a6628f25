//! λ-entropies built from the extreme Morozova-Chentsov functions, and the
//! integral representation of the Wigner-Yanase-Dyson entropy over them.
//!
//! For a state with eigenvalues `d_i` and the observable `k̃` expressed in
//! the state's eigenbasis, `f(L_ρ, R_ρ) k` acts entrywise as `f(d_i, d_j) k̃_ij`.
//! The λ-entropy is then
//!
//! ```text
//! E_λ(ρ, k) = -tr ρk² + Σ_ij f_λ(d_i, d_j) |k̃_ij|²
//!           = -½ Σ_ij (d_i + d_j - 2 f_λ(d_i, d_j)) |k̃_ij|²
//!           = -½ Σ_ij λ (d_i + d_j)(d_i - d_j)² / ((d_i + λ d_j)(λ d_i + d_j)) |k̃_ij|²
//! ```
//!
//! The last form has no cancellation and makes `E_λ / λ` well defined as
//! `λ → 0`, which is what the quadrature needs.

use std::f64::consts::PI;

use crate::entropy::check_exponent;
use crate::error::{Error, Result};
use crate::linalg::{eigh, HermitianMatrix, Matrix};
use crate::quadrature::{integrate, QuadratureConfig, QuadratureResult};

/// Eigenvalues below this fraction of the largest are not positive definite.
pub const PD_TOL: f64 = 1e-12;

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: v,
            range: "(0, inf)",
        })
    }
}

fn check_lambda(lam: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero {
        (0.0..=1.0).contains(&lam)
    } else {
        lam > 0.0 && lam <= 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "lambda",
            value: lam,
            range: if allow_zero { "[0, 1]" } else { "(0, 1]" },
        })
    }
}

/// Extreme Morozova-Chentsov function
/// `c_λ(x, y) = (1+λ)/2 · (1/(x+λy) + 1/(λx+y))`.
pub fn c_lambda(lam: f64, x: f64, y: f64) -> Result<f64> {
    check_lambda(lam, true)?;
    check_positive("x", x)?;
    check_positive("y", y)?;
    Ok(0.5 * (1.0 + lam) * (1.0 / (x + lam * y) + 1.0 / (lam * x + y)))
}

/// `f_λ(x, y) = xy · c_λ(x, y)`; a mean with `f_λ(x, x) = x`.
pub fn f_lambda(lam: f64, x: f64, y: f64) -> Result<f64> {
    Ok(x * y * c_lambda(lam, x, y)?)
}

/// `(x + y - 2 f_λ(x, y)) / λ` in closed form.
#[inline]
fn defect_over_lambda(lam: f64, x: f64, y: f64) -> f64 {
    let d = x - y;
    (x + y) * d * d / ((x + lam * y) * (lam * x + y))
}

/// A state's spectrum together with an observable rotated into its eigenbasis.
#[derive(Debug, Clone)]
pub struct LeftRightSpectrum {
    pub eigenvalues: Vec<f64>,
    pub k_tilde: Matrix,
}

impl LeftRightSpectrum {
    /// Diagonalizes `rho`; requires it to be positive definite.
    pub fn new(rho: &HermitianMatrix, k: &HermitianMatrix) -> Result<Self> {
        if rho.dim() != k.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: k.dim(),
            });
        }
        let eig = eigh(rho)?;
        let threshold = PD_TOL * eig.max_eigenvalue().max(0.0);
        let min = eig.min_eigenvalue();
        if !(min > threshold) || min <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                eigenvalue: min,
                threshold,
            });
        }
        let v = &eig.vectors;
        let k_tilde = &(&v.adjoint() * k.as_matrix()) * v;
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            k_tilde,
        })
    }

    /// `E_λ / λ`, finite for every `λ ∈ [0, 1]`.
    pub fn lambda_entropy_over_lambda(&self, lam: f64) -> f64 {
        let d = &self.eigenvalues;
        let n = d.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                acc += defect_over_lambda(lam, d[i], d[j]) * self.k_tilde[(i, j)].norm_sqr();
            }
        }
        -0.5 * acc
    }

    /// `E_λ(ρ, k)` for `λ ∈ (0, 1]`.
    pub fn lambda_entropy(&self, lam: f64) -> Result<f64> {
        check_lambda(lam, false)?;
        Ok(lam * self.lambda_entropy_over_lambda(lam))
    }
}

/// λ-entropy `E_λ(ρ, k) = -tr ρk² + tr k f_λ(L_ρ, R_ρ) k`, minus the
/// metric adjusted skew information for `c_λ`.
pub fn lambda_entropy(rho: &HermitianMatrix, k: &HermitianMatrix, lam: f64) -> Result<f64> {
    check_lambda(lam, false)?;
    LeftRightSpectrum::new(rho, k)?.lambda_entropy(lam)
}

/// Density of the probability measure `μ_p` on `[0, 1]`:
/// `2 sin(pπ) / (π p (1-p)) · (λ^p + λ^{1-p}) / (1+λ)³`.
pub fn mu_p_density(p: f64, lam: f64) -> Result<f64> {
    check_exponent(p)?;
    check_lambda(lam, false)?;
    Ok(mu_density_unchecked(p, lam))
}

fn mu_prefactor(p: f64) -> f64 {
    2.0 * (p * PI).sin() / (PI * p * (1.0 - p))
}

fn mu_density_unchecked(p: f64, lam: f64) -> f64 {
    let onep = 1.0 + lam;
    mu_prefactor(p) * (lam.powf(p) + lam.powf(1.0 - p)) / (onep * onep * onep)
}

/// Integrates `h(λ)` over `[0, 1]` after substituting `λ = u^s`.
/// `h` receives `λ` and must return the value of the integrand there,
/// including at `λ = 0` (as a limit).
fn integrate_in_lambda(
    h: impl Fn(f64) -> f64,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    integrate(
        |u: f64| {
            if u == 0.0 {
                if s == 1.0 {
                    h(0.0)
                } else {
                    0.0
                }
            } else {
                h(u.powf(s)) * s * u.powf(s - 1.0)
            }
        },
        0.0,
        1.0,
        cfg.abs_tol,
        cfg.max_panels,
    )
}

/// Total mass of `μ_p` by quadrature; equals 1.
pub fn mu_p_total_mass(p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_exponent(p)?;
    cfg.validate()?;
    let r = integrate_in_lambda(
        |lam| {
            if lam == 0.0 {
                0.0
            } else {
                mu_density_unchecked(p, lam)
            }
        },
        cfg.substitution_exponent,
        cfg,
    )?;
    Ok(r.value)
}

/// `∫_0^1 λ^{-1} dμ_p(λ)`, which must be finite for the integral
/// representation of `S_p` to make sense.
///
/// The integrand behaves like `λ^{min(p,1-p) - 1}` at zero, so this uses the
/// stronger substitution `λ = u^s` with `s = 2 / min(p, 1-p)`.
pub fn mu_p_inverse_moment(p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_exponent(p)?;
    cfg.validate()?;
    let s = 2.0 / p.min(1.0 - p);
    let pre = mu_prefactor(p);
    let h = |lam: f64| {
        let onep = 1.0 + lam;
        pre * (lam.powf(p - 1.0) + lam.powf(-p)) / (onep * onep * onep)
    };
    // h(u^s)·s·u^{s-1} ~ u^{s·min(p,1-p) - 1} = u at zero.
    let r = integrate(
        |u: f64| {
            if u == 0.0 {
                0.0
            } else {
                h(u.powf(s)) * s * u.powf(s - 1.0)
            }
        },
        0.0,
        1.0,
        cfg.abs_tol,
        cfg.max_panels,
    )?;
    Ok(r.value)
}

/// Reconstructs `S_p(ρ, k)` from the λ-entropies:
/// `p(1-p)/2 · ∫_0^1 E_λ(ρ, k) (1+λ)²/λ dμ_p(λ)`.
pub fn wyd_via_quadrature(
    rho: &HermitianMatrix,
    k: &HermitianMatrix,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    Ok(wyd_via_quadrature_detailed(rho, k, p, cfg)?.value)
}

/// As [`wyd_via_quadrature`], also returning the error estimate and panel count.
pub fn wyd_via_quadrature_detailed(
    rho: &HermitianMatrix,
    k: &HermitianMatrix,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    check_exponent(p)?;
    cfg.validate()?;
    let spec = LeftRightSpectrum::new(rho, k)?;
    let pre = 0.5 * p * (1.0 - p) * mu_prefactor(p);
    let h = |lam: f64| {
        if lam == 0.0 {
            return 0.0;
        }
        let onep = 1.0 + lam;
        // E_λ (1+λ)²/λ · μ_p(λ), with the (1+λ) powers partly cancelled.
        pre * spec.lambda_entropy_over_lambda(lam) * (lam.powf(p) + lam.powf(1.0 - p)) / onep
    };
    integrate_in_lambda(h, cfg.substitution_exponent, cfg)
}
