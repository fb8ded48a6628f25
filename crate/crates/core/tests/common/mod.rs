#![allow(dead_code)]

use skewnum_core::random;
use skewnum_core::{local_sum, HermitianMatrix, MultipartiteOperator};

pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    random::rng(seed, 0)
}

/// Random full-rank state on `d1 ⊗ d2`, optionally normalized.
pub fn bipartite_state(
    r: &mut ChaCha8Rng,
    d1: usize,
    d2: usize,
    complex: bool,
) -> MultipartiteOperator {
    let rho = random::density_matrix(r, d1 * d2, complex);
    MultipartiteOperator::new(rho, vec![d1, d2]).unwrap()
}

pub fn observable(r: &mut ChaCha8Rng, d: usize, complex: bool) -> HermitianMatrix {
    if complex {
        random::hermitian(r, d, 1.0)
    } else {
        random::real_symmetric(r, d, 1.0)
    }
}

pub fn k12(k1: &HermitianMatrix, k2: &HermitianMatrix) -> HermitianMatrix {
    local_sum(&[k1.clone(), k2.clone()], &[k1.dim(), k2.dim()])
        .unwrap()
        .into_matrix()
}

pub fn rel_close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(floor)
}
