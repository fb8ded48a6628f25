//! Kronecker products, local observables and partial traces.
//!
//! Factor indices are 0-based here. The basis of a product space is ordered
//! lexicographically, so `e_i ⊗ f_j` sits at index `i * dim(f) + j`.

use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, Matrix};

/// A Hermitian operator on a tensor product space with known factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteOperator {
    matrix: HermitianMatrix,
    dims: Vec<usize>,
}

impl MultipartiteOperator {
    pub fn new(matrix: HermitianMatrix, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidFactors("no factors given".into()));
        }
        if let Some(&0) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidFactors("factor of dimension 0".into()));
        }
        let total: usize = dims.iter().product();
        if total != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: matrix.dim(),
            });
        }
        Ok(Self { matrix, dims })
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
            dims: self.dims.clone(),
        }
    }

    /// Reduced operator on the factors in `keep`; see [`partial_trace`].
    pub fn reduce(&self, keep: &[usize]) -> Result<MultipartiteOperator> {
        partial_trace(self, keep)
    }
}

/// Kronecker product of two square matrices.
pub fn kron_matrix(a: &Matrix, b: &Matrix) -> Matrix {
    let (m, n) = (a.dim(), b.dim());
    Matrix::from_fn(m * n, |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        a[(i, k)] * b[(j, l)]
    })
}

pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&kron_matrix(a, b))
}

/// `1 ⊗ … ⊗ k ⊗ … ⊗ 1` with `k` placed at factor `index`.
pub fn lift(k: &HermitianMatrix, index: usize, dims: &[usize]) -> Result<HermitianMatrix> {
    if index >= dims.len() {
        return Err(Error::InvalidFactors(format!(
            "factor {index} out of range for {} factors",
            dims.len()
        )));
    }
    if k.dim() != dims[index] {
        return Err(Error::DimensionMismatch {
            expected: dims[index],
            found: k.dim(),
        });
    }
    let left: usize = dims[..index].iter().product();
    let right: usize = dims[index + 1..].iter().product();
    let lifted = kron_matrix(
        &kron_matrix(&Matrix::identity(left), k),
        &Matrix::identity(right),
    );
    Ok(HermitianMatrix::symmetrize(&lifted))
}

/// `Σ_i 1 ⊗ … ⊗ k_i ⊗ … ⊗ 1`, the observable of a composite system with
/// non-interacting local parts.
pub fn local_sum(observables: &[HermitianMatrix], dims: &[usize]) -> Result<MultipartiteOperator> {
    if observables.len() != dims.len() {
        return Err(Error::InvalidFactors(format!(
            "{} observables for {} factors",
            observables.len(),
            dims.len()
        )));
    }
    let total: usize = dims.iter().product();
    let mut acc = Matrix::zeros(total);
    for (i, k) in observables.iter().enumerate() {
        let lifted = lift(k, i, dims)?;
        acc = &acc + lifted.as_matrix();
    }
    MultipartiteOperator::new(HermitianMatrix::symmetrize(&acc), dims.to_vec())
}

/// Partial trace keeping the factors listed in `keep` (in ascending order of
/// their original position); every other factor is summed out over its
/// standard basis.
pub fn partial_trace(op: &MultipartiteOperator, keep: &[usize]) -> Result<MultipartiteOperator> {
    let dims = op.dims();
    let nf = dims.len();
    if keep.is_empty() {
        return Err(Error::InvalidFactors("keep set is empty".into()));
    }
    let mut kept = vec![false; nf];
    for &k in keep {
        if k >= nf {
            return Err(Error::InvalidFactors(format!(
                "factor {k} out of range for {nf} factors"
            )));
        }
        if kept[k] {
            return Err(Error::InvalidFactors(format!("factor {k} listed twice")));
        }
        kept[k] = true;
    }
    let kept_dims: Vec<usize> = (0..nf).filter(|&i| kept[i]).map(|i| dims[i]).collect();
    let traced_dims: Vec<usize> = (0..nf).filter(|&i| !kept[i]).map(|i| dims[i]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let env_dim: usize = traced_dims.iter().product();

    // Row-major strides of the full space.
    let mut strides = vec![1usize; nf];
    for i in (0..nf.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let kept_idx: Vec<usize> = (0..nf).filter(|&i| kept[i]).collect();
    let traced_idx: Vec<usize> = (0..nf).filter(|&i| !kept[i]).collect();

    let offset = |flat: usize, factors: &[usize], factor_dims: &[usize]| -> usize {
        let mut rem = flat;
        let mut off = 0;
        for pos in (0..factors.len()).rev() {
            let d = factor_dims[pos];
            off += (rem % d) * strides[factors[pos]];
            rem /= d;
        }
        off
    };
    let kept_off: Vec<usize> = (0..out_dim)
        .map(|a| offset(a, &kept_idx, &kept_dims))
        .collect();
    let env_off: Vec<usize> = (0..env_dim)
        .map(|e| offset(e, &traced_idx, &traced_dims))
        .collect();

    let m = op.matrix();
    let reduced = Matrix::from_fn(out_dim, |a, b| {
        env_off
            .iter()
            .map(|&e| m[(kept_off[a] + e, kept_off[b] + e)])
            .sum()
    });
    MultipartiteOperator::new(HermitianMatrix::symmetrize(&reduced), kept_dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(rows: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(rows).unwrap()
    }

    fn k1() -> HermitianMatrix {
        h(&[&[10.0, 1.0], &[1.0, 1.0]])
    }

    fn k2() -> HermitianMatrix {
        h(&[&[1.0, 1.0], &[1.0, 10.0]])
    }

    #[test]
    fn kron_lifts_match_worked_example() {
        let id = HermitianMatrix::identity(2);
        let a = kron(&k1(), &id);
        let want_a = h(&[
            &[10.0, 0.0, 1.0, 0.0],
            &[0.0, 10.0, 0.0, 1.0],
            &[1.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 1.0],
        ]);
        assert_eq!(a, want_a);
        let b = kron(&id, &k2());
        let want_b = h(&[
            &[1.0, 1.0, 0.0, 0.0],
            &[1.0, 10.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 1.0],
            &[0.0, 0.0, 1.0, 10.0],
        ]);
        assert_eq!(b, want_b);
    }

    #[test]
    fn kron_of_identities() {
        let k = kron(&HermitianMatrix::identity(3), &HermitianMatrix::identity(2));
        assert_eq!(k.as_matrix(), &Matrix::identity(6));
    }

    #[test]
    fn local_sum_worked_example() {
        let k12 = local_sum(&[k1(), k2()], &[2, 2]).unwrap();
        let want = h(&[
            &[11.0, 1.0, 1.0, 0.0],
            &[1.0, 20.0, 0.0, 1.0],
            &[1.0, 0.0, 2.0, 1.0],
            &[0.0, 1.0, 1.0, 11.0],
        ]);
        assert_eq!(k12.matrix(), &want);
    }

    #[test]
    fn local_sum_zero_observables() {
        let z = local_sum(
            &[HermitianMatrix::zeros(2), HermitianMatrix::zeros(3)],
            &[2, 3],
        )
        .unwrap();
        assert_eq!(z.matrix().max_abs(), 0.0);
    }

    #[test]
    fn local_sum_with_trivial_middle_factor() {
        let one = HermitianMatrix::identity(1);
        let three = local_sum(&[k1(), one, k2()], &[2, 1, 2]).unwrap();
        let two = local_sum(&[k1(), k2()], &[2, 2]).unwrap();
        // Hand expansion: k1⊗1⊗1 = k1⊗1, 1⊗[1]⊗1 = I_4, 1⊗1⊗k2 = 1⊗k2.
        let want = two.matrix().add(&HermitianMatrix::identity(4)).unwrap();
        assert_eq!(three.matrix(), &want);
        assert_eq!(three.dims(), &[2, 1, 2]);
    }

    #[test]
    fn local_sum_dimension_mismatch() {
        assert!(matches!(
            local_sum(&[k1(), HermitianMatrix::identity(3)], &[2, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(local_sum(&[k1()], &[2, 2]).is_err());
    }

    #[test]
    fn partial_traces_of_counterexample() {
        let rho = MultipartiteOperator::new(
            h(&[
                &[7.0, 5.0, 5.0, 6.0],
                &[5.0, 6.0, 2.0, 5.0],
                &[5.0, 2.0, 6.0, 5.0],
                &[6.0, 5.0, 5.0, 7.0],
            ]),
            vec![2, 2],
        )
        .unwrap();
        let want = h(&[&[13.0, 10.0], &[10.0, 13.0]]);
        let r1 = partial_trace(&rho, &[0]).unwrap();
        let r2 = partial_trace(&rho, &[1]).unwrap();
        assert_eq!(r1.matrix(), &want);
        assert_eq!(r2.matrix(), &want);
        assert_eq!(r1.matrix().trace(), 26.0);
        let all = partial_trace(&rho, &[0, 1]).unwrap();
        assert_eq!(all.matrix(), rho.matrix());
    }

    #[test]
    fn partial_trace_of_product() {
        let b = h(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 0.5], &[0.0, 0.5, 1.5]]);
        let prod = MultipartiteOperator::new(kron(&k1(), &b), vec![2, 3]).unwrap();
        let r = partial_trace(&prod, &[0]).unwrap();
        assert!(r.matrix().max_abs_diff(&k1().scale(b.trace())) < 1e-13);
        let r = partial_trace(&prod, &[1]).unwrap();
        assert!(r.matrix().max_abs_diff(&b.scale(k1().trace())) < 1e-13);
    }

    #[test]
    fn partial_trace_middle_of_three() {
        let a = k1();
        let b = k2();
        let c = h(&[&[1.0, 0.5, 0.0], &[0.5, 2.0, 0.0], &[0.0, 0.0, 3.0]]);
        let abc = kron(&kron(&a, &b), &c);
        let op = MultipartiteOperator::new(abc, vec![2, 2, 3]).unwrap();
        let r = partial_trace(&op, &[0, 2]).unwrap();
        let want = kron(&a, &c).scale(b.trace());
        assert!(r.matrix().max_abs_diff(&want) < 1e-12);
        assert_eq!(r.dims(), &[2, 3]);
    }

    #[test]
    fn partial_trace_errors() {
        let op = MultipartiteOperator::new(HermitianMatrix::identity(4), vec![2, 2]).unwrap();
        assert!(matches!(
            partial_trace(&op, &[]),
            Err(Error::InvalidFactors(_))
        ));
        assert!(matches!(
            partial_trace(&op, &[2]),
            Err(Error::InvalidFactors(_))
        ));
        assert!(MultipartiteOperator::new(HermitianMatrix::identity(4), vec![2, 3]).is_err());
    }
}
