//! The fixed-point approximation `phi* = A(lambda s) exp(-lambda (1 - B(lambda s)) t)`
//! and the quantities derived from it.

use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method, EPS_CLAMP};
use crate::fixedpoint::solve_b;
use crate::params::ProcessParams;

/// `ln phi* = ln A(lambda s) + u_c t`.
pub fn log_phi_star(params: &ProcessParams) -> Result<f64> {
    let sol = solve_b(params.lambda_s())?;
    Ok(sol.ln_a() - params.lambda() * sol.one_minus_b() * params.t())
}

fn flagged(value: f64) -> Result<Estimate> {
    if value > 1.0 + EPS_CLAMP {
        // built for t large relative to s; at tiny t the prefactor A > 1 shows through
        Ok(Estimate::new(value, Method::Star).with_diag("out_of_domain", 1.0))
    } else {
        Estimate::probability(value, Method::Star)
    }
}

pub fn phi_star(params: &ProcessParams) -> Result<Estimate> {
    flagged(log_phi_star(params)?.exp())
}

/// `phi2* = B(lambda s) phi* = exp(u_c t) / (1 + lambda s B)`.
pub fn phi2_star(params: &ProcessParams) -> Result<Estimate> {
    let b = solve_b(params.lambda_s())?.b;
    flagged(b * log_phi_star(params)?.exp())
}

/// Approximate waiting-time distribution `P(tau <= t) ~ 1 - phi*`, for `t >= s`.
pub fn tau_cdf_approx(params: &ProcessParams) -> Result<f64> {
    if params.t() < params.s() {
        return Err(Error::domain(
            "tau_cdf_approx",
            format!("t = {} is below s = {}", params.t(), params.s()),
        ));
    }
    Ok(1.0 - log_phi_star(params)?.exp())
}

/// Closed-form Laplace transform of `t -> phi(s, t; lambda)`, valid for `u > u_c`.
pub fn laplace_phi_closed(u: f64, params: &ProcessParams) -> Result<f64> {
    let uc = crate::fixedpoint::u_c(params)?;
    if !(u.is_finite() && u > uc) {
        return Err(Error::domain(
            "laplace_phi_closed",
            format!("u = {u} is not above the abscissa of convergence {uc}"),
        ));
    }
    let lambda = params.lambda();
    let w = u + lambda;
    Ok(1.0 / w + lambda / w / (w - lambda * (-w * params.s()).exp()))
}

/// `exp(-c)` with `c = lambda^2 s t`: the limit of `phi` when the window
/// shrinks while the horizon grows (or the rate grows) with `c` held fixed.
pub fn heavy_window_limit(c: f64) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter {
            name: "c",
            value: c,
            reason: "must be finite and > 0",
        });
    }
    Ok((-c).exp())
}
