//! # skewnum
//!
//! Numerics for Wigner-Yanase-Dyson skew information and the entropies
//! built from it.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`linalg`] | dense complex matrices, Jacobi `eigh`, spectral functions, commutators |
//! | [`tensor`] | Kronecker products, local observables `k_1 ⊗ 1 + 1 ⊗ k_2`, partial traces |
//! | [`entropy`] | `S_p(ρ, k) = ½ tr [ρ^p, k][ρ^{1-p}, k]`, Wigner-Yanase and von Neumann entropies |
//! | [`metric`] | λ-entropies from the extreme Morozova-Chentsov functions, integral representation of `S_p` |
//! | [`inequality`] | subadditivity / strong subadditivity gaps, embedding, concavity probes |
//! | [`search`] | random instances, Nelder-Mead search for violations, exponent sweeps |
//! | [`reference`] | the built-in two-qubit counterexample and its verification |
//!
//! ```
//! use skewnum_core::{reference, sa_gap};
//!
//! let report = sa_gap(&reference::instance(), None).unwrap();
//! assert!(report.violated);
//! assert!((report.gap - (-725.0 + 81.0 * 69f64.sqrt())).abs() < 1e-9);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod inequality;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod optimize;
pub mod quadrature;
pub mod random;
pub mod reference;
pub mod search;
pub mod tensor;

pub use num_complex::Complex64;

pub use entropy::{von_neumann_entropy, wy_entropy, wyd_entropy};
pub use error::{Error, Result};
pub use inequality::{
    concavity_probe, embed_sa_as_ssa, sa_gap, ssa_gap, BipartiteInstance, GapReport,
    TripartiteInstance,
};
pub use io::InstanceFile;
pub use linalg::{
    apply_spectral_function, commutator, eigh, EigenDecomposition, HermitianMatrix, Matrix,
};
pub use metric::{
    c_lambda, f_lambda, lambda_entropy, mu_p_density, wyd_via_quadrature, LeftRightSpectrum,
};
pub use quadrature::QuadratureConfig;
pub use search::{p_sweep, random_instance, search_sa_violation, SearchConfig, SearchOutcome};
pub use tensor::{kron, local_sum, partial_trace, MultipartiteOperator};
