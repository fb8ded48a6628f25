//! Wigner-Yanase-Dyson, Wigner-Yanase and von Neumann entropies.
//!
//! States need not be normalized: `S_p` is homogeneous of degree one in the
//! state, so any positive multiple of a density matrix may be used.

use crate::error::{Error, Result};
use crate::linalg::{commutator, eigh, psd_powers, psd_sqrt, HermitianMatrix, Matrix};

/// Relative bound on the imaginary part of traces that are real in exact arithmetic.
pub const IMAG_TOL: f64 = 1e-10;

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "(0, 1)",
        })
    }
}

fn check_dims(rho: &HermitianMatrix, k: &HermitianMatrix) -> Result<()> {
    if rho.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: k.dim(),
        });
    }
    Ok(())
}

/// Natural magnitude of `tr(ρ k²)`-type quantities, used to scale tolerances.
pub fn entropy_scale(rho: &HermitianMatrix, k: &HermitianMatrix) -> f64 {
    let kn = k.frobenius_norm();
    rho.frobenius_norm() * kn * kn
}

fn half_real_trace(a: &Matrix, b: &Matrix, scale: f64) -> Result<f64> {
    let t = a.trace_product(b);
    if t.im.abs() > IMAG_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonRealTrace {
            imaginary: t.im,
            scale,
        });
    }
    Ok(0.5 * t.re)
}

/// `S_p(ρ, k) = ½ tr [ρ^p, k][ρ^{1-p}, k]`, minus the Wigner-Yanase-Dyson
/// skew information. Always `≤ 0` up to rounding.
pub fn wyd_entropy(rho: &HermitianMatrix, k: &HermitianMatrix, p: f64) -> Result<f64> {
    check_exponent(p)?;
    check_dims(rho, k)?;
    if p == 0.5 {
        return wy_entropy(rho, k);
    }
    let powers = psd_powers(rho, &[p, 1.0 - p])?;
    let a = commutator(&powers[0], k)?;
    let b = commutator(&powers[1], k)?;
    half_real_trace(&a, &b, entropy_scale(rho, k))
}

/// Wigner-Yanase entropy `S(ρ, k) = ½ tr [ρ^{1/2}, k]²`.
pub fn wy_entropy(rho: &HermitianMatrix, k: &HermitianMatrix) -> Result<f64> {
    check_dims(rho, k)?;
    let root = psd_sqrt(rho)?;
    let c = commutator(&root, k)?;
    half_real_trace(&c, &c, entropy_scale(rho, k))
}

/// `-tr ρ log ρ` in nats, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    let eig = eigh(rho)?;
    let values = eig.clamped_eigenvalues()?;
    Ok(-values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum::<f64>())
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

    fn k12() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[
            [11.0, 1.0, 1.0, 0.0],
            [1.0, 20.0, 0.0, 1.0],
            [1.0, 0.0, 2.0, 1.0],
            [0.0, 1.0, 1.0, 11.0],
        ])
        .unwrap()
    }

    #[test]
    fn wy_entropy_of_counterexample() {
        let s = wy_entropy(&rho12(), &k12()).unwrap();
        assert!((s + 328.0).abs() < 1e-10, "{s}");
        let s = wyd_entropy(&rho12(), &k12(), 0.5).unwrap();
        assert!((s + 328.0).abs() < 1e-10, "{s}");
    }

    #[test]
    fn wy_entropy_of_marginal() {
        let r1 = HermitianMatrix::from_real_rows(&[[13.0, 10.0], [10.0, 13.0]]).unwrap();
        let k1 = HermitianMatrix::from_real_rows(&[[10.0, 1.0], [1.0, 1.0]]).unwrap();
        let want = -526.5 + 40.5 * 69f64.sqrt();
        let s = wy_entropy(&r1, &k1).unwrap();
        assert!((s - want).abs() < 1e-9 * want.abs(), "{s} vs {want}");
        assert!((s + 190.0817).abs() < 1e-4);
    }

    #[test]
    fn homogeneity_of_worked_example() {
        // Direct evaluation at the scaled matrix.
        let s = wyd_entropy(&rho12().scale(2.0), &k12(), 0.5).unwrap();
        assert!((s + 656.0).abs() < 1e-9, "{s}");
    }

    #[test]
    fn commuting_pair_vanishes() {
        let rho = HermitianMatrix::from_diagonal(&[0.2, 0.3, 0.5]);
        let k = HermitianMatrix::from_diagonal(&[1.0, -4.0, 7.0]);
        for p in [0.1, 0.37, 0.5, 0.9] {
            assert_eq!(wyd_entropy(&rho, &k, p).unwrap(), 0.0);
        }
        assert_eq!(
            wy_entropy(&rho12(), &HermitianMatrix::identity(4)).unwrap(),
            0.0
        );
    }

    #[test]
    fn exponent_out_of_range() {
        for p in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(
                wyd_entropy(&rho12(), &k12(), p),
                Err(Error::OutOfRange { .. })
            ));
        }
    }

    #[test]
    fn indefinite_state_rejected() {
        let rho = HermitianMatrix::from_diagonal(&[1.0, -0.5]);
        let k = HermitianMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            wyd_entropy(&rho, &k, 0.3),
            Err(Error::NotPositiveSemiDefinite { .. })
        ));
        assert!(von_neumann_entropy(&rho).is_err());
    }

    #[test]
    fn von_neumann_special_cases() {
        let pure = HermitianMatrix::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-14);
        for d in [2usize, 3, 5] {
            let mixed = HermitianMatrix::identity(d).scale(1.0 / d as f64);
            let s = von_neumann_entropy(&mixed).unwrap();
            assert!((s - (d as f64).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn von_neumann_of_normalized_counterexample() {
        let s17 = 17f64.sqrt();
        let oracle: f64 = [0.5 * (21.0 + 5.0 * s17), 4.0, 1.0, 0.5 * (21.0 - 5.0 * s17)]
            .iter()
            .map(|l| {
                let x = l / 26.0;
                -x * x.ln()
            })
            .sum();
        let s = von_neumann_entropy(&rho12().scale(1.0 / 26.0)).unwrap();
        assert!((s - oracle).abs() < 1e-13, "{s} vs {oracle}");
    }
}
