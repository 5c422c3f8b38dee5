use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method};
use crate::params::ProcessParams;

const MAX_STEPS: usize = 50_000_000;

/// Grid values `phi(i h)` for `i = 0..=n` from the renewal equation
/// `phi(t) = e^{-lambda t}(1 + lambda s) + lambda e^{-lambda s} int_0^{t-s} e^{-lambda(t-s-v)} phi(v) dv`,
/// marched with the trapezoidal rule. `h = s / m`.
fn march(lambda: f64, s: f64, m: usize, n: usize) -> Vec<f64> {
    let h = s / m as f64;
    let decay = (-lambda * h).exp();
    let head = (-lambda * s).exp();
    let mut phi = Vec::with_capacity(n + 1);
    for i in 0..=n.min(m) {
        let t = i as f64 * h;
        phi.push((-lambda * t).exp() * (1.0 + lambda * t));
    }
    let mut j = 0.0;
    let mut front = (-lambda * s).exp();
    for i in m + 1..=n {
        j = decay * j + 0.5 * h * lambda * head * (decay * phi[i - 1 - m] + phi[i - m]);
        front *= decay;
        phi.push(front * (1.0 + lambda * s) + j);
    }
    phi
}

fn at(lambda: f64, s: f64, t: f64, m: usize) -> Result<f64> {
    let h = s / m as f64;
    let pos = t / h;
    if pos > MAX_STEPS as f64 {
        return Err(Error::CapExceeded {
            what: "renewal grid steps",
            value: pos as usize,
            cap: MAX_STEPS,
        });
    }
    let i = pos.floor() as usize;
    let grid = march(lambda, s, m, i + 1);
    let frac = pos - i as f64;
    Ok(grid[i] + frac * (grid[i + 1] - grid[i]))
}

/// `phi(s, t; lambda)` by numerically solving the renewal equation on a grid
/// of step at most `grid_step` (rounded down to divide `s`).
///
/// The value is taken from the halved grid; `error_bound` is the difference
/// from the coarser grid.
pub fn renewal_phi(params: &ProcessParams, grid_step: f64) -> Result<Estimate> {
    let (lambda, s, t) = (params.lambda(), params.s(), params.t());
    if t <= s {
        let v = (-lambda * t).exp() * (1.0 + lambda * t);
        return Ok(Estimate::new(v, Method::Quadrature).with_bound(0.0));
    }
    if !(grid_step.is_finite() && grid_step > 0.0 && grid_step <= s / 16.0) {
        return Err(Error::InvalidParameter {
            name: "grid_step",
            value: grid_step,
            reason: "must lie in (0, s/16]",
        });
    }
    let m = (s / grid_step).ceil() as usize;
    let coarse = at(lambda, s, t, m)?;
    let fine = at(lambda, s, t, 2 * m)?;
    let err = (fine - coarse).abs();
    Ok(Estimate::new(fine.clamp(0.0, 1.0), Method::Quadrature)
        .with_bound(err)
        .with_diag("grid_step", s / (2 * m) as f64))
}
