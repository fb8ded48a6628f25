//! Random instances and derivative-free search for subadditivity violations.
//!
//! The search minimizes the subadditivity gap over a parameterization that
//! keeps every state positive definite: `ρ_12 = L L* + ε I` with `L` lower
//! triangular, followed by the local observables' independent entries.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::check_exponent;
use crate::error::{Error, Result};
use crate::inequality::{sa_gap, BipartiteInstance, GapReport};
use crate::linalg::{HermitianMatrix, Matrix};
use crate::optimize::{nelder_mead, NelderMeadResult, SimplexParams};
use crate::random;
use crate::tensor::MultipartiteOperator;

/// Trace every iterate is rescaled to before evaluating the gap. The gap is
/// homogeneous of degree one in the state, so this only affects conditioning.
pub const REFERENCE_TRACE: f64 = 26.0;
/// Entries of random observables are drawn from `[-OBSERVABLE_RANGE, OBSERVABLE_RANGE]`.
pub const OBSERVABLE_RANGE: f64 = 10.0;
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Default combined Frobenius norm of the traceless parts of `(k_1, k_2)`
/// that iterates are rescaled to. `√85` is the value for the built-in
/// counterexample, so that instance is a fixed point of the rescaling.
pub fn default_observable_norm() -> f64 {
    85f64.sqrt()
}

/// Whether the search space is real symmetric or complex Hermitian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Field {
    #[default]
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dims: (usize, usize),
    pub p: f64,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub simplex: SimplexParams,
    /// Regularizer `ε` in `ρ = L L* + ε I`.
    pub epsilon: f64,
    pub field: Field,
    /// Pin `k_2 = 0` (subadditivity is then known to hold).
    pub k2_zero: bool,
    /// Worker threads for restarts; 0 picks a default.
    pub threads: usize,
    /// Rescale the observables of every iterate so that their traceless
    /// parts have this combined Frobenius norm. The gap is homogeneous of
    /// degree two in the observables, so without this the minimum is
    /// `-inf` and descents mostly inflate `k`. `None` searches the raw gap.
    pub observable_norm: Option<f64>,
}

impl SearchConfig {
    pub fn new(dims: (usize, usize), p: f64, restarts: usize, seed: u64) -> Self {
        Self {
            dims,
            p,
            restarts,
            seed,
            max_iters: 500,
            simplex: SimplexParams::default(),
            epsilon: DEFAULT_EPSILON,
            field: Field::Real,
            k2_zero: false,
            threads: 0,
            observable_norm: Some(default_observable_norm()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent(self.p)?;
        if self.dims.0 == 0 || self.dims.1 == 0 {
            return Err(Error::InvalidFactors(
                "dimensions must be at least 1".into(),
            ));
        }
        if self.restarts == 0 {
            return Err(Error::OutOfRange {
                name: "restarts",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        if let Some(n) = self.observable_norm {
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::OutOfRange {
                    name: "observable_norm",
                    value: n,
                    range: "(0, inf)",
                });
            }
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: self.epsilon,
                range: "(0, inf)",
            });
        }
        Ok(())
    }

    pub fn layout(&self) -> ParameterLayout {
        ParameterLayout {
            dims: self.dims,
            field: self.field,
            k2_zero: self.k2_zero,
            epsilon: self.epsilon,
            observable_norm: self.observable_norm,
        }
    }
}

/// Flat real coordinates of a bipartite instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector(pub Vec<f64>);

/// How a [`ParameterVector`] maps onto `(L, k_1, k_2)`.
///
/// Real field: the lower triangle of `L` row by row, then the upper
/// triangle of each observable row by row. Complex field: real diagonal
/// entries, and `(re, im)` pairs for each off-diagonal entry in the same order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterLayout {
    pub dims: (usize, usize),
    pub field: Field,
    pub k2_zero: bool,
    pub epsilon: f64,
    pub observable_norm: Option<f64>,
}

impl ParameterLayout {
    fn triangle_len(&self, d: usize) -> usize {
        match self.field {
            Field::Real => d * (d + 1) / 2,
            Field::Complex => d * d,
        }
    }

    pub fn len(&self) -> usize {
        let (d1, d2) = self.dims;
        let mut n = self.triangle_len(d1 * d2) + self.triangle_len(d1);
        if !self.k2_zero {
            n += self.triangle_len(d2);
        }
        n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn push_entry(&self, out: &mut Vec<f64>, z: Complex64, diagonal: bool) {
        out.push(z.re);
        if self.field == Field::Complex && !diagonal {
            out.push(z.im);
        }
    }

    fn read_entry(&self, it: &mut std::slice::Iter<'_, f64>, diagonal: bool) -> Complex64 {
        let re = *it.next().expect("parameter vector too short");
        let im = if self.field == Field::Complex && !diagonal {
            *it.next().expect("parameter vector too short")
        } else {
            0.0
        };
        Complex64::new(re, im)
    }

    fn encode_observable(&self, out: &mut Vec<f64>, k: &HermitianMatrix) {
        let d = k.dim();
        for i in 0..d {
            for j in i..d {
                self.push_entry(out, k[(i, j)], i == j);
            }
        }
    }

    fn decode_observable(&self, it: &mut std::slice::Iter<'_, f64>, d: usize) -> HermitianMatrix {
        let mut m = Matrix::zeros(d);
        for i in 0..d {
            for j in i..d {
                let z = self.read_entry(it, i == j);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        HermitianMatrix::symmetrize(&m)
    }

    /// Encodes an instance. The factor `L` comes from a Cholesky factorization
    /// of `ρ - ε I`, with non-positive pivots clamped to zero.
    pub fn encode(&self, inst: &BipartiteInstance) -> Result<ParameterVector> {
        if inst.dims() != self.dims {
            return Err(Error::InvalidFactors(format!(
                "instance dims {:?} do not match search dims {:?}",
                inst.dims(),
                self.dims
            )));
        }
        let rho = inst.rho12.matrix();
        if self.field == Field::Real && !(rho.is_real() && inst.k1.is_real() && inst.k2.is_real()) {
            return Err(Error::InvalidMatrix(
                "complex instance cannot seed a real search".into(),
            ));
        }
        let d = rho.dim();
        let shifted = rho.as_matrix() - &Matrix::identity(d).scale(self.epsilon);
        let l = clamped_cholesky(&shifted);
        let mut out = Vec::with_capacity(self.len());
        for i in 0..d {
            for j in 0..=i {
                self.push_entry(&mut out, l[(i, j)], i == j);
            }
        }
        self.encode_observable(&mut out, &inst.k1);
        if !self.k2_zero {
            self.encode_observable(&mut out, &inst.k2);
        }
        Ok(ParameterVector(out))
    }

    /// `(ρ = L L* + ε I, k_1, k_2)`; `ρ` is positive definite by construction.
    pub fn decode(
        &self,
        x: &ParameterVector,
    ) -> (HermitianMatrix, HermitianMatrix, HermitianMatrix) {
        assert_eq!(x.0.len(), self.len(), "parameter vector length");
        let (d1, d2) = self.dims;
        let d = d1 * d2;
        let mut it = x.0.iter();
        let mut l = Matrix::zeros(d);
        for i in 0..d {
            for j in 0..=i {
                l[(i, j)] = self.read_entry(&mut it, i == j);
            }
        }
        let llt = &l * &l.adjoint();
        let rho = HermitianMatrix::symmetrize(&(&llt + &Matrix::identity(d).scale(self.epsilon)));
        let k1 = self.decode_observable(&mut it, d1);
        let k2 = if self.k2_zero {
            HermitianMatrix::zeros(d2)
        } else {
            self.decode_observable(&mut it, d2)
        };
        (rho, k1, k2)
    }

    /// Decoded instance with the state rescaled to [`REFERENCE_TRACE`] and
    /// the observables to `observable_norm`, if set.
    pub fn decode_instance(&self, x: &ParameterVector, p: f64) -> Result<BipartiteInstance> {
        let (rho, k1, k2) = self.decode(x);
        Ok(self.normalize(rho, k1, k2, p))
    }

    /// Applies the trace and observable rescaling used for every iterate.
    pub fn normalize(
        &self,
        rho: HermitianMatrix,
        k1: HermitianMatrix,
        k2: HermitianMatrix,
        p: f64,
    ) -> BipartiteInstance {
        let rho = rho.scale(REFERENCE_TRACE / rho.trace());
        let (k1, k2) = match self.observable_norm {
            Some(target) => {
                let norm = (traceless_norm_sqr(&k1) + traceless_norm_sqr(&k2)).sqrt();
                if norm > 0.0 && norm.is_finite() {
                    let s = target / norm;
                    (k1.scale(s), k2.scale(s))
                } else {
                    (k1, k2)
                }
            }
            None => (k1, k2),
        };
        BipartiteInstance {
            rho12: MultipartiteOperator::new(rho, vec![self.dims.0, self.dims.1])
                .expect("dims multiply to the state size"),
            k1,
            k2,
            p,
        }
    }
}

/// `‖k - tr(k)/d · 1‖_F²`; adding multiples of the identity to an
/// observable changes no entropy.
fn traceless_norm_sqr(k: &HermitianMatrix) -> f64 {
    let d = k.dim() as f64;
    let mean = k.trace() / d;
    let f2: f64 = k.as_slice().iter().map(|z| z.norm_sqr()).sum();
    (f2 - d * mean * mean).max(0.0)
}

/// Lower-triangular `L` with `L L* ≈ a`, zeroing columns whose pivot is not positive.
fn clamped_cholesky(a: &Matrix) -> Matrix {
    let n = a.dim();
    let mut l = Matrix::zeros(n);
    for j in 0..n {
        let mut s = a[(j, j)].re;
        for k in 0..j {
            s -= l[(j, k)].norm_sqr();
        }
        if s <= 0.0 {
            continue;
        }
        let pivot = s.sqrt();
        l[(j, j)] = Complex64::new(pivot, 0.0);
        for i in (j + 1)..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / pivot;
        }
    }
    l
}

/// Random instance on the given stream: `ρ = G G* + ε I` with `G` uniform in
/// `[-1, 1]`, observables uniform in `[-10, 10]`, `p = 1/2`.
pub fn random_instance_on_stream(
    dims: (usize, usize),
    seed: u64,
    stream: u64,
    epsilon: f64,
    field: Field,
) -> BipartiteInstance {
    assert!(dims.0 >= 1 && dims.1 >= 1, "dimensions must be at least 1");
    let mut r = random::rng(seed, stream);
    let d = dims.0 * dims.1;
    let complex = field == Field::Complex;
    let rho = random::psd(&mut r, d, d, epsilon, complex);
    let (k1, k2) = if complex {
        (
            random::hermitian(&mut r, dims.0, OBSERVABLE_RANGE),
            random::hermitian(&mut r, dims.1, OBSERVABLE_RANGE),
        )
    } else {
        (
            random::real_symmetric(&mut r, dims.0, OBSERVABLE_RANGE),
            random::real_symmetric(&mut r, dims.1, OBSERVABLE_RANGE),
        )
    };
    BipartiteInstance {
        rho12: MultipartiteOperator::new(rho, vec![dims.0, dims.1]).expect("dims multiply to d"),
        k1,
        k2,
        p: 0.5,
    }
}

/// Deterministic real random instance for `(dims, seed)`.
pub fn random_instance(dims: (usize, usize), seed: u64) -> BipartiteInstance {
    random_instance_on_stream(dims, seed, 0, DEFAULT_EPSILON, Field::Real)
}

/// Where the best instance of a search came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    /// The warm start itself, unchanged.
    WarmStart,
    /// Simplex descent from the warm start.
    WarmDescent,
    /// Simplex descent from the random start of this restart.
    Restart(usize),
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub report: GapReport,
    pub instance: BipartiteInstance,
    pub origin: Origin,
    /// Final gap of every candidate in candidate order.
    pub candidate_gaps: Vec<f64>,
    pub violations: usize,
}

fn objective(layout: &ParameterLayout, p: f64, x: &[f64]) -> f64 {
    let pv = ParameterVector(x.to_vec());
    match layout.decode_instance(&pv, p) {
        Ok(inst) => match sa_gap(&inst, None) {
            Ok(r) => r.gap,
            Err(_) => f64::INFINITY,
        },
        Err(_) => f64::INFINITY,
    }
}

/// Runs one simplex descent from `start`.
pub fn descend(cfg: &SearchConfig, start: &ParameterVector) -> NelderMeadResult {
    let layout = cfg.layout();
    nelder_mead(
        |x| objective(&layout, cfg.p, x),
        &start.0,
        &cfg.simplex,
        cfg.max_iters,
    )
}

/// Searches for the most negative subadditivity gap.
///
/// Candidates are the warm start (if any), its descent, and one descent per
/// restart from a random start on stream `restart index`. The best
/// candidate is the smallest gap, ties going to the earliest candidate, so
/// the result does not depend on the thread count.
pub fn search_sa_violation(
    cfg: &SearchConfig,
    warm_start: Option<&BipartiteInstance>,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let layout = cfg.layout();

    let mut candidates: Vec<(Origin, BipartiteInstance)> = Vec::new();
    if let Some(ws) = warm_start {
        let mut ws = ws.with_p(cfg.p)?;
        if cfg.k2_zero {
            ws.k2 = HermitianMatrix::zeros(ws.k2.dim());
        }
        let ws = layout.normalize(ws.rho12.matrix().clone(), ws.k1, ws.k2, cfg.p);
        let start = layout.encode(&ws)?;
        candidates.push((Origin::WarmStart, ws));
        let run = descend(cfg, &start);
        candidates.push((
            Origin::WarmDescent,
            layout.decode_instance(&ParameterVector(run.x), cfg.p)?,
        ));
    }

    let run_restart = |r: usize| -> Result<BipartiteInstance> {
        let mut start =
            random_instance_on_stream(cfg.dims, cfg.seed, r as u64, cfg.epsilon, cfg.field);
        if cfg.k2_zero {
            start.k2 = HermitianMatrix::zeros(cfg.dims.1);
        }
        let x0 = layout.encode(&start)?;
        let run = descend(cfg, &x0);
        layout.decode_instance(&ParameterVector(run.x), cfg.p)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidFactors(format!("thread pool: {e}")))?;
    let restarts: Vec<Result<BipartiteInstance>> =
        pool.install(|| (0..cfg.restarts).into_par_iter().map(run_restart).collect());
    for (r, inst) in restarts.into_iter().enumerate() {
        candidates.push((Origin::Restart(r), inst?));
    }

    let reports: Vec<GapReport> = candidates
        .iter()
        .map(|(_, inst)| sa_gap(inst, None))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, r) in reports.iter().enumerate() {
        if r.gap < reports[best].gap {
            best = i;
        }
    }
    let violations = reports.iter().filter(|r| r.violated).count();
    let candidate_gaps = reports.iter().map(|r| r.gap).collect();
    let (origin, instance) = candidates.swap_remove(best);
    Ok(SearchOutcome {
        report: reports[best].clone(),
        instance,
        origin,
        candidate_gaps,
        violations,
    })
}

/// Subadditivity gap of `inst` at every exponent in `grid`, in grid order.
pub fn p_sweep(inst: &BipartiteInstance, grid: &[f64]) -> Result<Vec<GapReport>> {
    if grid.is_empty() {
        return Err(Error::InvalidFactors("empty exponent grid".into()));
    }
    grid.iter()
        .map(|&p| sa_gap(&inst.with_p(p)?, None))
        .collect()
}

/// `start, start+step, …` up to `stop` inclusive (within half a step).
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) {
        return Err(Error::OutOfRange {
            name: "step",
            value: step,
            range: "(0, inf) with start <= stop",
        });
    }
    let n = ((stop - start) / step + 0.5).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}
