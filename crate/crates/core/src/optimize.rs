//! Nelder-Mead simplex minimization.

use serde::{Deserialize, Serialize};

/// Simplex move coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexParams {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
}

impl Default for SimplexParams {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Best objective value after each iteration (index 0 is the initial simplex).
    pub history: Vec<f64>,
}

/// Initial step along coordinate `i`: `0.05 · (1 + |x_i|)`.
pub fn initial_step(xi: f64) -> f64 {
    0.05 * (1.0 + xi.abs())
}

/// Minimizes `f` from `x0` for at most `max_iters` iterations.
///
/// NaN objective values are treated as `+inf`. The best vertex never gets
/// worse, so `history` is non-increasing.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    params: &SimplexParams,
    max_iters: usize,
) -> NelderMeadResult {
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += initial_step(x0[i]);
        let v = eval(&x);
        simplex.push((x, v));
    }
    // Stable sort keeps earlier vertices first among equals.
    let order = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    order(&mut simplex);

    let mut history = vec![simplex[0].1];
    let mut iterations = 0;
    if n == 0 {
        return NelderMeadResult {
            x: simplex[0].0.clone(),
            value: simplex[0].1,
            iterations,
            evaluations,
            history,
        };
    }

    while iterations < max_iters {
        iterations += 1;
        let worst = simplex[n].clone();
        let second_worst = simplex[n - 1].1;
        let best = simplex[0].1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi;
            }
        }
        for c in &mut centroid {
            *c /= n as f64;
        }
        let along = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(params.reflection, &worst.0);
        let fr = eval(&xr);
        let mut accepted: Option<(Vec<f64>, f64)> = None;
        if fr < best {
            let xe: Vec<f64> = centroid
                .iter()
                .zip(&xr)
                .map(|(c, r)| c + params.expansion * (r - c))
                .collect();
            let fe = eval(&xe);
            accepted = Some(if fe < fr { (xe, fe) } else { (xr, fr) });
        } else if fr < second_worst {
            accepted = Some((xr, fr));
        } else if fr < worst.1 {
            let xc: Vec<f64> = centroid
                .iter()
                .zip(&xr)
                .map(|(c, r)| c + params.contraction * (r - c))
                .collect();
            let fc = eval(&xc);
            if fc <= fr {
                accepted = Some((xc, fc));
            }
        } else {
            let xc = along(-params.contraction, &worst.0);
            let fc = eval(&xc);
            if fc < worst.1 {
                accepted = Some((xc, fc));
            }
        }

        match accepted {
            Some(v) => simplex[n] = v,
            None => {
                let x_best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = x_best
                        .iter()
                        .zip(&vertex.0)
                        .map(|(b, xi)| b + params.shrink * (xi - b))
                        .collect();
                    let v = eval(&x);
                    *vertex = (x, v);
                }
            }
        }
        order(&mut simplex);
        history.push(simplex[0].1);

        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() <= f64::EPSILON * simplex[0].1.abs() && simplex_diameter(&simplex) < 1e-14 {
            break;
        }
    }

    NelderMeadResult {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        iterations,
        evaluations,
        history,
    }
}

fn simplex_diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let x0 = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(x, _)| {
            x.iter()
                .zip(x0)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let r = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &SimplexParams::default(),
            2000,
        );
        assert!((r.x[0] - 1.0).abs() < 1e-6);
        assert!((r.x[1] + 2.0).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock() {
        let r = nelder_mead(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &SimplexParams::default(),
            5000,
        );
        assert!(r.value < 1e-10, "{}", r.value);
    }

    #[test]
    fn history_is_monotone() {
        let r = nelder_mead(
            |x| x.iter().map(|v| (v * v - 1.0).powi(2) + v.sin()).sum(),
            &[0.3, -0.2, 2.0, 1.0],
            &SimplexParams::default(),
            300,
        );
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*r.history.last().unwrap(), r.value);
    }

    #[test]
    fn nan_is_rejected() {
        let r = nelder_mead(
            |x| {
                if x[0] > 0.5 {
                    f64::NAN
                } else {
                    (x[0] - 0.4).powi(2) + x[1] * x[1]
                }
            },
            &[0.0, 0.1],
            &SimplexParams::default(),
            500,
        );
        assert!(r.value.is_finite());
        assert!(r.x[0] <= 0.5);
    }
}
