//! The fixed point `B(x)` of `B = exp(-x B)` and the quantities built on it.
//!
//! `B(x) = W(x)/x` for the principal Lambert W branch. It fixes the decay rate
//! `u_c = -lambda (1 - B(lambda s))` of the no-close-pair probability and the
//! prefactor `A(x) = 1 / (B (1 + x B))` of its large-horizon asymptote.

use crate::error::{Error, Result};
use crate::exact::log_phi_exact;
use crate::params::{ProcessParams, ReducedParams};

const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointSolution {
    pub x: f64,
    /// The root, strictly inside `(0, 1)`.
    pub b: f64,
    /// `exp(-x b) - b` at the returned root.
    pub residual: f64,
    pub iterations: usize,
}

impl FixedPointSolution {
    /// `1 - B`, computed as `-expm1(-x B)` so it keeps full relative
    /// precision when `x` is tiny.
    pub fn one_minus_b(&self) -> f64 {
        -(-self.x * self.b).exp_m1()
    }

    /// `ln A(x) = x B - ln(1 + x B)`, using `ln B = -x B`.
    pub fn ln_a(&self) -> f64 {
        let xb = self.x * self.b;
        xb - xb.ln_1p()
    }

    pub fn a(&self) -> f64 {
        1.0 / (self.b * (1.0 + self.x * self.b))
    }
}

/// Safeguarded Newton iteration on `h(B) = exp(-x B) - B` over the bracket `(0, 1)`.
///
/// `h` is strictly decreasing, so the sign of `h` at every iterate shrinks the
/// bracket; a Newton step that would leave it is replaced by bisection.
pub fn solve_b(x: f64) -> Result<FixedPointSolution> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be finite and > 0",
        });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut b = 1.0 / (1.0 + x);
    for iter in 1..=MAX_ITERATIONS {
        let e = (-x * b).exp();
        let h = e - b;
        if h == 0.0 {
            return Ok(finish(x, b, iter));
        }
        if h > 0.0 {
            lo = b;
        } else {
            hi = b;
        }
        let step = h / (x * e + 1.0);
        let mut next = b + step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let moved = (next - b).abs();
        b = next;
        if moved <= 4.0 * f64::EPSILON * b {
            return Ok(finish(x, b, iter));
        }
    }
    Err(Error::NoConvergence {
        what: "fixed point B(x)",
        iterations: MAX_ITERATIONS,
    })
}

fn finish(x: f64, b: f64, iterations: usize) -> FixedPointSolution {
    FixedPointSolution {
        x,
        b,
        residual: (-x * b).exp() - b,
        iterations,
    }
}

pub fn a_of(x: f64) -> Result<f64> {
    Ok(solve_b(x)?.a())
}

/// `A(x, r) = phi(x, r) exp(x (1 - B) r)`, the finite-horizon counterpart of
/// `A(x)`. Evaluated in log space since `exp(lambda t)` overflows long before
/// the ratio does.
pub fn a_xr(reduced: &ReducedParams) -> Result<f64> {
    let sol = solve_b(reduced.x)?;
    let ln_phi = log_phi_exact(&reduced.to_params())?;
    Ok((ln_phi + reduced.x * sol.one_minus_b() * reduced.r).exp())
}

/// Abscissa of convergence `u_c = -lambda (1 - B(lambda s))` of the Laplace
/// transform of `phi` in `t`.
pub fn u_c(params: &ProcessParams) -> Result<f64> {
    let sol = solve_b(params.lambda_s())?;
    Ok(-params.lambda() * sol.one_minus_b())
}

/// Root `p` of `p exp(s p) = lambda`, equal to `lambda B(lambda s)`.
pub fn p_gates_westcott(lambda: f64, s: f64) -> Result<f64> {
    let params = ProcessParams::new(lambda, s, 0.0)?;
    Ok(lambda * solve_b(params.lambda_s())?.b)
}
