//! Globally adaptive Simpson quadrature.
//!
//! Each panel carries a Simpson estimate on its two halves together with a
//! Richardson-extrapolated value and error estimate. The panel with the
//! largest error is bisected until the summed error estimate meets the
//! tolerance or the panel budget is exhausted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Settings for [`integrate`] and the integral representations built on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Target absolute error of the full integral.
    pub abs_tol: f64,
    /// Upper bound on the number of leaf panels.
    pub max_panels: usize,
    /// Exponent `s` of the substitution `λ = u^s` used to smooth the
    /// endpoint behaviour at zero.
    pub substitution_exponent: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            max_panels: 4096,
            substitution_exponent: 2.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::OutOfRange {
                name: "abs_tol",
                value: self.abs_tol,
                range: "(0, inf)",
            });
        }
        if self.max_panels < 4 {
            return Err(Error::OutOfRange {
                name: "max_panels",
                value: self.max_panels as f64,
                range: "[4, inf)",
            });
        }
        if !(self.substitution_exponent >= 1.0) {
            return Err(Error::OutOfRange {
                name: "substitution_exponent",
                value: self.substitution_exponent,
                range: "[1, inf)",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    // f at a, a+h/4, a+h/2, a+3h/4, b
    f: [f64; 5],
    value: f64,
    error: f64,
}

impl Panel {
    fn new(a: f64, b: f64, f: [f64; 5]) -> Self {
        let h = b - a;
        let whole = h / 6.0 * (f[0] + 4.0 * f[2] + f[4]);
        let left = h / 12.0 * (f[0] + 4.0 * f[1] + f[2]);
        let right = h / 12.0 * (f[2] + 4.0 * f[3] + f[4]);
        let halves = left + right;
        let diff = halves - whole;
        Self {
            a,
            b,
            f,
            value: halves + diff / 15.0,
            error: diff.abs() / 15.0,
        }
    }

    fn eval(a: f64, b: f64, g: &impl Fn(f64) -> f64) -> Self {
        let h = b - a;
        let f = [g(a), g(a + 0.25 * h), g(a + 0.5 * h), g(a + 0.75 * h), g(b)];
        Self::new(a, b, f)
    }

    fn split(&self, g: &impl Fn(f64) -> f64) -> (Panel, Panel) {
        let m = 0.5 * (self.a + self.b);
        let h = self.b - self.a;
        let l1 = g(self.a + 0.125 * h);
        let l3 = g(self.a + 0.375 * h);
        let r1 = g(self.a + 0.625 * h);
        let r3 = g(self.a + 0.875 * h);
        let f = self.f;
        (
            Panel::new(self.a, m, [f[0], l1, f[1], l3, f[2]]),
            Panel::new(m, self.b, [f[2], r1, f[3], r3, f[4]]),
        )
    }
}

const INITIAL_PANELS: usize = 4;

/// Integrates `g` over `[a, b]`.
///
/// The integrand must be finite at every sample point, including the
/// endpoints; singular endpoints should be removed by substitution first.
pub fn integrate(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadratureResult> {
    let width = (b - a) / INITIAL_PANELS as f64;
    let mut panels: Vec<Panel> = (0..INITIAL_PANELS)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == INITIAL_PANELS {
                b
            } else {
                lo + width
            };
            Panel::eval(lo, hi, &g)
        })
        .collect();

    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        let magnitude: f64 = panels.iter().map(|p| p.value.abs()).sum();
        let tol = abs_tol.max(64.0 * f64::EPSILON * magnitude);
        if !total_err.is_finite() || panels.iter().any(|p| !p.value.is_finite()) {
            return Err(Error::QuadratureNoConvergence {
                panels: panels.len(),
                error_estimate: total_err,
                value: f64::NAN,
            });
        }
        if total_err <= tol {
            break;
        }
        if panels.len() >= max_panels {
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            return Err(Error::QuadratureNoConvergence {
                panels: panels.len(),
                error_estimate: total_err,
                value: panels.iter().map(|p| p.value).sum(),
            });
        }
        // Largest error first; ties go to the lowest index.
        let worst = panels.iter().enumerate().fold(0, |best, (i, p)| {
            if p.error > panels[best].error {
                i
            } else {
                best
            }
        });
        let (left, right) = panels[worst].split(&g);
        panels[worst] = left;
        panels.push(right);
    }

    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(QuadratureResult {
        value: panels.iter().map(|p| p.value).sum(),
        error_estimate: panels.iter().map(|p| p.error).sum(),
        panels: panels.len(),
    })
}
