//! Subadditivity and strong subadditivity gaps for the Wigner-Yanase-Dyson
//! entropy, the reduction of one to the other, and concavity probes.
//!
//! A gap is the signed slack of an inequality: non-negative when the
//! inequality holds, negative when it is violated.

use serde::{Deserialize, Serialize};

use crate::entropy::{check_exponent, wyd_entropy};
use crate::error::{Error, Result};
use crate::linalg::{eigh, HermitianMatrix};
use crate::tensor::{local_sum, partial_trace, MultipartiteOperator};

/// Relative factor of the default violation tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// `DEFAULT_REL_TOL · max(1, |reference|)`.
pub fn default_tolerance(reference: f64) -> f64 {
    DEFAULT_REL_TOL * reference.abs().max(1.0)
}

/// Rejects states with eigenvalues below the clamping threshold.
fn check_state(rho: &HermitianMatrix) -> Result<()> {
    eigh(rho)?.clamped_eigenvalues().map(|_| ())
}

fn check_observables(dims: &[usize], ks: &[&HermitianMatrix]) -> Result<()> {
    for (d, k) in dims.iter().zip(ks) {
        if k.dim() != *d {
            return Err(Error::DimensionMismatch {
                expected: *d,
                found: k.dim(),
            });
        }
    }
    Ok(())
}

/// State on `H_1 ⊗ H_2` with local observables and an exponent.
///
/// The state must be positive semi-definite (positive definite in physical
/// use; rank-deficient states are accepted for the pure-state case).
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteInstance {
    pub rho12: MultipartiteOperator,
    pub k1: HermitianMatrix,
    pub k2: HermitianMatrix,
    pub p: f64,
}

impl BipartiteInstance {
    pub fn new(
        rho12: MultipartiteOperator,
        k1: HermitianMatrix,
        k2: HermitianMatrix,
        p: f64,
    ) -> Result<Self> {
        if rho12.num_factors() != 2 {
            return Err(Error::InvalidFactors(format!(
                "bipartite instance needs 2 factors, got {}",
                rho12.num_factors()
            )));
        }
        check_exponent(p)?;
        check_observables(rho12.dims(), &[&k1, &k2])?;
        check_state(rho12.matrix())?;
        Ok(Self { rho12, k1, k2, p })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rho12.dims()[0], self.rho12.dims()[1])
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(Self { p, ..self.clone() })
    }

    /// Same instance with the state multiplied by `t > 0`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            rho12: self.rho12.scale(t),
            ..self.clone()
        }
    }

    /// `k_12 = k_1 ⊗ 1 + 1 ⊗ k_2`.
    pub fn k12(&self) -> Result<HermitianMatrix> {
        Ok(local_sum(&[self.k1.clone(), self.k2.clone()], self.rho12.dims())?.into_matrix())
    }
}

/// State on `H_1 ⊗ H_2 ⊗ H_3` with local observables and an exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteInstance {
    pub rho123: MultipartiteOperator,
    pub k1: HermitianMatrix,
    pub k2: HermitianMatrix,
    pub k3: HermitianMatrix,
    pub p: f64,
}

impl TripartiteInstance {
    pub fn new(
        rho123: MultipartiteOperator,
        k1: HermitianMatrix,
        k2: HermitianMatrix,
        k3: HermitianMatrix,
        p: f64,
    ) -> Result<Self> {
        if rho123.num_factors() != 3 {
            return Err(Error::InvalidFactors(format!(
                "tripartite instance needs 3 factors, got {}",
                rho123.num_factors()
            )));
        }
        check_exponent(p)?;
        check_observables(rho123.dims(), &[&k1, &k2, &k3])?;
        check_state(rho123.matrix())?;
        Ok(Self {
            rho123,
            k1,
            k2,
            k3,
            p,
        })
    }
}

/// Outcome of an inequality check: every entropy term, the gap, and
/// whether the gap is negative beyond the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    /// Named entropy terms, in the order they enter the gap.
    pub terms: Vec<(String, f64)>,
    pub gap: f64,
    pub violated: bool,
    pub tolerance: f64,
    pub p: f64,
}

impl GapReport {
    fn new(terms: Vec<(String, f64)>, gap: f64, tolerance: f64, p: f64) -> Self {
        Self {
            terms,
            gap,
            violated: gap < -tolerance,
            tolerance,
            p,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

/// Subadditivity gap `S_p(ρ_1,k_1) + S_p(ρ_2,k_2) - S_p(ρ_12,k_12)`.
///
/// `tolerance = None` selects [`default_tolerance`] of `S_p(ρ_12, k_12)`.
pub fn sa_gap(inst: &BipartiteInstance, tolerance: Option<f64>) -> Result<GapReport> {
    let p = inst.p;
    let rho1 = partial_trace(&inst.rho12, &[0])?;
    let rho2 = partial_trace(&inst.rho12, &[1])?;
    let s12 = wyd_entropy(inst.rho12.matrix(), &inst.k12()?, p)?;
    let s1 = wyd_entropy(rho1.matrix(), &inst.k1, p)?;
    let s2 = wyd_entropy(rho2.matrix(), &inst.k2, p)?;
    let gap = s1 + s2 - s12;
    let tol = tolerance.unwrap_or_else(|| default_tolerance(s12));
    Ok(GapReport::new(
        vec![("S12".into(), s12), ("S1".into(), s1), ("S2".into(), s2)],
        gap,
        tol,
        p,
    ))
}

/// Strong subadditivity gap
/// `S_p(ρ_12,k_12) + S_p(ρ_23,k_23) - S_p(ρ_123,k_123) - S_p(ρ_2,k_2)`.
///
/// `tolerance = None` selects [`default_tolerance`] of `S_p(ρ_123, k_123)`.
pub fn ssa_gap(inst: &TripartiteInstance, tolerance: Option<f64>) -> Result<GapReport> {
    let p = inst.p;
    let dims = inst.rho123.dims();
    let rho12 = partial_trace(&inst.rho123, &[0, 1])?;
    let rho23 = partial_trace(&inst.rho123, &[1, 2])?;
    let rho2 = partial_trace(&inst.rho123, &[1])?;
    let k123 = local_sum(&[inst.k1.clone(), inst.k2.clone(), inst.k3.clone()], dims)?;
    let k12 = local_sum(&[inst.k1.clone(), inst.k2.clone()], &dims[..2])?;
    let k23 = local_sum(&[inst.k2.clone(), inst.k3.clone()], &dims[1..])?;

    let s123 = wyd_entropy(inst.rho123.matrix(), k123.matrix(), p)?;
    let s2 = wyd_entropy(rho2.matrix(), &inst.k2, p)?;
    let s12 = wyd_entropy(rho12.matrix(), k12.matrix(), p)?;
    let s23 = wyd_entropy(rho23.matrix(), k23.matrix(), p)?;
    let gap = s12 + s23 - s123 - s2;
    let tol = tolerance.unwrap_or_else(|| default_tolerance(s123));
    Ok(GapReport::new(
        vec![
            ("S123".into(), s123),
            ("S2".into(), s2),
            ("S12".into(), s12),
            ("S23".into(), s23),
        ],
        gap,
        tol,
        p,
    ))
}

/// Views a bipartite instance on `H_1 ⊗ H_3` as a tripartite one with a
/// one-dimensional middle factor carrying the observable `1`.
///
/// Under this embedding `S_p(ρ_123, k_123) = S_p(ρ_13, k_13)`, `S_p(ρ_2, k_2) = 0`,
/// `ρ_12 ≅ ρ_1` and `ρ_23 ≅ ρ_3`, so the strong subadditivity gap equals the
/// subadditivity gap of the input.
pub fn embed_sa_as_ssa(inst: &BipartiteInstance) -> TripartiteInstance {
    let (d1, d3) = inst.dims();
    let rho123 = MultipartiteOperator::new(inst.rho12.matrix().clone(), vec![d1, 1, d3])
        .expect("product of dims is unchanged by a unit factor");
    TripartiteInstance {
        rho123,
        k1: inst.k1.clone(),
        k2: HermitianMatrix::identity(1),
        k3: inst.k2.clone(),
        p: inst.p,
    }
}

/// `S_p(tρ_a + (1-t)ρ_b, k) - t S_p(ρ_a, k) - (1-t) S_p(ρ_b, k)`;
/// non-negative by concavity of `S_p` in the state.
pub fn concavity_probe(
    rho_a: &HermitianMatrix,
    rho_b: &HermitianMatrix,
    t: f64,
    k: &HermitianMatrix,
    p: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[0, 1]",
        });
    }
    if rho_a.dim() != rho_b.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_a.dim(),
            found: rho_b.dim(),
        });
    }
    if rho_a == rho_b || t == 0.0 || t == 1.0 {
        let (rho, _) = if t == 0.0 {
            (rho_b, rho_a)
        } else {
            (rho_a, rho_b)
        };
        // Degenerate mixtures: validate inputs, then the deficit is exactly zero.
        wyd_entropy(rho, k, p)?;
        return Ok(0.0);
    }
    let mix = rho_a.scale(t).add(&rho_b.scale(1.0 - t))?;
    let s_mix = wyd_entropy(&mix, k, p)?;
    let s_a = wyd_entropy(rho_a, k, p)?;
    let s_b = wyd_entropy(rho_b, k, p)?;
    Ok(s_mix - t * s_a - (1.0 - t) * s_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn counterexample_violates_subadditivity() {
        let inst = reference::instance();
        let r = sa_gap(&inst, None).unwrap();
        let want = -725.0 + 81.0 * 69f64.sqrt();
        assert!((r.gap - want).abs() < 1e-9, "{} vs {want}", r.gap);
        assert!(r.violated);
        assert!((r.term("S12").unwrap() + 328.0).abs() < 1e-10);
        assert_eq!(r.tolerance, default_tolerance(r.term("S12").unwrap()));
        let sum: f64 = r.term("S1").unwrap() + r.term("S2").unwrap() - r.term("S12").unwrap();
        assert!((sum - r.gap).abs() <= 1e-12);
    }

    #[test]
    fn embedding_preserves_gap() {
        let inst = reference::instance();
        let sa = sa_gap(&inst, None).unwrap();
        let emb = embed_sa_as_ssa(&inst);
        assert_eq!(emb.rho123.dims(), &[2, 1, 2]);
        let ssa = ssa_gap(&emb, None).unwrap();
        assert!(
            (ssa.gap - sa.gap).abs() < 1e-10,
            "{} vs {}",
            ssa.gap,
            sa.gap
        );
        assert!(ssa.violated);
        assert_eq!(ssa.term("S2"), Some(0.0));
    }

    #[test]
    fn zero_observables_give_zero_gap() {
        let inst = reference::instance();
        let z = BipartiteInstance {
            k1: HermitianMatrix::zeros(2),
            k2: HermitianMatrix::zeros(2),
            ..inst
        };
        let emb = embed_sa_as_ssa(&z);
        let r = ssa_gap(&emb, None).unwrap();
        assert_eq!(r.gap, 0.0);
        assert!(!r.violated);
    }

    #[test]
    fn ssa_all_zero_observables() {
        let rho =
            MultipartiteOperator::new(HermitianMatrix::identity(8).scale(0.125), vec![2, 2, 2])
                .unwrap();
        let z = HermitianMatrix::zeros(2);
        let inst = TripartiteInstance::new(rho, z.clone(), z.clone(), z, 0.3).unwrap();
        let r = ssa_gap(&inst, Some(0.0)).unwrap();
        assert_eq!(r.gap, 0.0);
        assert!(!r.violated);
    }

    #[test]
    fn instance_validation() {
        let inst = reference::instance();
        assert!(BipartiteInstance::new(
            inst.rho12.clone(),
            HermitianMatrix::identity(3),
            inst.k2.clone(),
            0.5
        )
        .is_err());
        assert!(
            BipartiteInstance::new(inst.rho12.clone(), inst.k1.clone(), inst.k2.clone(), 1.0)
                .is_err()
        );
        let indefinite = MultipartiteOperator::new(
            HermitianMatrix::from_diagonal(&[1.0, -1.0, 1.0, 1.0]),
            vec![2, 2],
        )
        .unwrap();
        assert!(matches!(
            BipartiteInstance::new(indefinite, inst.k1.clone(), inst.k2.clone(), 0.5),
            Err(Error::NotPositiveSemiDefinite { .. })
        ));
    }

    #[test]
    fn concavity_degenerate_cases() {
        let inst = reference::instance();
        let rho = inst.rho12.matrix();
        let k = inst.k12().unwrap();
        assert_eq!(concavity_probe(rho, rho, 0.3, &k, 0.5).unwrap(), 0.0);
        let other = HermitianMatrix::identity(4);
        assert_eq!(concavity_probe(rho, &other, 0.0, &k, 0.5).unwrap(), 0.0);
        assert!(concavity_probe(rho, &other, 1.5, &k, 0.5).is_err());
        let d = concavity_probe(rho, &other, 0.5, &k, 0.5).unwrap();
        assert!(d >= -1e-9 * 328.0, "{d}");
    }
}
