//! The two-qubit counterexample to subadditivity of the Wigner-Yanase
//! entropy, and an end-to-end check of every intermediate quantity.
//!
//! `ρ_12` below has trace 26 rather than 1; all entropies involved are
//! homogeneous of degree one in the state, so normalization only rescales
//! the gap.

use serde::Serialize;

use crate::entropy::{wy_entropy, wyd_entropy};
use crate::error::Result;
use crate::inequality::{sa_gap, BipartiteInstance};
use crate::io::InstanceFile;
use crate::linalg::{commutator, eigh, psd_sqrt, HermitianMatrix, Matrix};
use crate::tensor::{kron, local_sum, partial_trace};

/// The instance as shipped in `data/counterexample.json`.
pub const INSTANCE_JSON: &str = include_str!("../data/counterexample.json");

/// Default absolute tolerance of [`verify`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// `ρ_12`, `k_1`, `k_2` at `p = 1/2`.
pub fn instance() -> BipartiteInstance {
    InstanceFile::from_json(INSTANCE_JSON)
        .and_then(|f| f.to_bipartite(None))
        .expect("embedded instance is valid")
}

fn h(rows: &[[f64; 4]]) -> Matrix {
    Matrix::from_real_rows(rows).expect("square")
}

pub fn sqrt_rho12() -> Matrix {
    h(&[
        [2.0, 1.0, 1.0, 1.0],
        [1.0, 2.0, 0.0, 1.0],
        [1.0, 0.0, 2.0, 1.0],
        [1.0, 1.0, 1.0, 2.0],
    ])
}

pub fn k1_lifted() -> Matrix {
    h(&[
        [10.0, 0.0, 1.0, 0.0],
        [0.0, 10.0, 0.0, 1.0],
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
    ])
}

pub fn k2_lifted() -> Matrix {
    h(&[
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 10.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 1.0, 10.0],
    ])
}

pub fn k12() -> Matrix {
    h(&[
        [11.0, 1.0, 1.0, 0.0],
        [1.0, 20.0, 0.0, 1.0],
        [1.0, 0.0, 2.0, 1.0],
        [0.0, 1.0, 1.0, 11.0],
    ])
}

pub fn commutator_sqrt_k12() -> Matrix {
    h(&[
        [0.0, 10.0, -8.0, 0.0],
        [-10.0, 0.0, 0.0, -10.0],
        [8.0, 0.0, 0.0, 8.0],
        [0.0, 10.0, -8.0, 0.0],
    ])
}

pub fn commutator_squared() -> Matrix {
    h(&[
        [-164.0, 0.0, 0.0, -164.0],
        [0.0, -200.0, 160.0, 0.0],
        [0.0, 160.0, -128.0, 0.0],
        [-164.0, 0.0, 0.0, -164.0],
    ])
}

pub fn marginal() -> Matrix {
    Matrix::from_real_rows(&[[13.0, 10.0], [10.0, 13.0]]).expect("square")
}

/// Spectrum of `ρ_12`, ascending: `½(21 ∓ 5√17)`, 1, 4.
pub fn rho12_spectrum() -> [f64; 4] {
    let s17 = 17f64.sqrt();
    [0.5 * (21.0 - 5.0 * s17), 1.0, 4.0, 0.5 * (21.0 + 5.0 * s17)]
}

/// `S(ρ_1, k_1) = S(ρ_2, k_2) = -(81/4)(√23 - √3)²`.
pub fn marginal_entropy() -> f64 {
    let d = 23f64.sqrt() - 3f64.sqrt();
    -20.25 * d * d
}

/// Subadditivity gap `-725 + 81√69 ≈ -52.1635`.
pub fn expected_gap() -> f64 {
    -725.0 + 81.0 * 69f64.sqrt()
}

pub const EXPECTED_S12: f64 = -328.0;

/// One verified quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Observed deviation from the expected value.
    pub error: f64,
    /// Bound the deviation was compared with.
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub s12: f64,
    pub s1: f64,
    pub s2: f64,
    pub gap: f64,
    pub violated: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn within(&mut self, name: &'static str, error: f64, bound: f64) {
        self.0.push(Check {
            name,
            passed: error <= bound,
            error,
            bound,
        });
    }

    fn exact(&mut self, name: &'static str, got: &Matrix, want: &Matrix) {
        self.within(name, got.max_abs_diff(want), 0.0);
    }
}

/// Recomputes every intermediate quantity of the counterexample.
///
/// Integer-valued matrices that involve no rounding (the lifted observables
/// and the marginals) are compared exactly; everything else to within `tol`
/// absolute, except the marginal entropies which are compared relatively.
/// With `p = None` the Wigner-Yanase entropy is evaluated through a single
/// square root; `Some(p)` goes through the general exponent path.
pub fn verify(tol: f64, p: Option<f64>) -> Result<VerificationReport> {
    let inst = instance();
    let rho12 = inst.rho12.matrix();
    let mut checks = Checks(Vec::new());
    let entropy = |rho: &HermitianMatrix, k: &HermitianMatrix| match p {
        None => wy_entropy(rho, k),
        Some(p) => wyd_entropy(rho, k, p),
    };

    let eig = eigh(rho12)?;
    let spec_err = eig
        .eigenvalues
        .iter()
        .zip(rho12_spectrum())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    checks.within("rho12 eigenvalues", spec_err, tol);

    let root = psd_sqrt(rho12)?;
    checks.within("rho12^(1/2)", root.max_abs_diff(&sqrt_rho12()), tol);

    let id = HermitianMatrix::identity(2);
    checks.exact("k1 (x) 1", kron(&inst.k1, &id).as_matrix(), &k1_lifted());
    checks.exact("1 (x) k2", kron(&id, &inst.k2).as_matrix(), &k2_lifted());
    let k12_op = local_sum(&[inst.k1.clone(), inst.k2.clone()], &[2, 2])?;
    checks.exact("k12", k12_op.matrix().as_matrix(), &k12());

    let c = commutator(&root, k12_op.matrix())?;
    checks.within(
        "[rho12^(1/2), k12]",
        c.max_abs_diff(&commutator_sqrt_k12()),
        tol,
    );
    checks.within(
        "[rho12^(1/2), k12]^2",
        (&c * &c).max_abs_diff(&commutator_squared()),
        tol,
    );

    let s12 = entropy(rho12, k12_op.matrix())?;
    checks.within("S(rho12, k12) = -328", (s12 - EXPECTED_S12).abs(), tol);

    let rho1 = partial_trace(&inst.rho12, &[0])?;
    let rho2 = partial_trace(&inst.rho12, &[1])?;
    checks.exact("rho1", rho1.matrix(), &marginal());
    checks.exact("rho2", rho2.matrix(), &marginal());

    let eig1 = eigh(rho1.matrix())?;
    let e1 = (eig1.eigenvalues[0] - 3.0)
        .abs()
        .max((eig1.eigenvalues[1] - 23.0).abs());
    checks.within("rho1 eigenvalues (3, 23)", e1, tol);

    let s1 = entropy(rho1.matrix(), &inst.k1)?;
    let s2 = entropy(rho2.matrix(), &inst.k2)?;
    let want = marginal_entropy();
    checks.within("S(rho1, k1)", (s1 - want).abs(), tol * want.abs());
    checks.within("S(rho2, k2)", (s2 - want).abs(), tol * want.abs());

    let inst_p = match p {
        Some(p) => inst.with_p(p)?,
        None => inst.clone(),
    };
    let report = sa_gap(&inst_p, None)?;
    let gap = s1 + s2 - s12;
    checks.within(
        "gap = -725 + 81 sqrt(69)",
        (gap - expected_gap()).abs(),
        tol,
    );
    checks.0.push(Check {
        name: "gap flagged as violation",
        passed: report.violated,
        error: 0.0,
        bound: 0.0,
    });

    Ok(VerificationReport {
        checks: checks.0,
        s12,
        s1,
        s2,
        gap,
        violated: report.violated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_verification_passes() {
        let r = verify(DEFAULT_TOL, None).unwrap();
        if let Some(c) = r.failures().next() {
            panic!("{} failed: {:e} > {:e}", c.name, c.error, c.bound);
        }
        assert!((r.gap + 52.1635).abs() < 1e-4);
    }

    #[test]
    fn explicit_half_matches_default() {
        let a = verify(DEFAULT_TOL, None).unwrap();
        let b = verify(DEFAULT_TOL, Some(0.5)).unwrap();
        assert!(b.passed());
        assert_eq!(a.gap, b.gap);
        assert_eq!(a.s12, b.s12);
    }

    #[test]
    fn zero_tolerance_keeps_exact_checks() {
        let r = verify(0.0, None).unwrap();
        for name in [
            "k1 (x) 1",
            "1 (x) k2",
            "k12",
            "rho1",
            "rho2",
            "gap flagged as violation",
        ] {
            let c = r.checks.iter().find(|c| c.name == name).unwrap();
            assert!(c.passed, "{name}");
        }
    }

    #[test]
    fn other_exponent_fails_the_half_checks() {
        let r = verify(DEFAULT_TOL, Some(0.3)).unwrap();
        assert!(!r.passed());
        assert!(r.violated);
    }
}
