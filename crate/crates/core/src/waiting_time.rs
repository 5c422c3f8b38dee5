//! Waiting times until the first pair of events closer than `s`.
//!
//! `tau2` counts from the first event: it is the sum of inter-arrival times up
//! to and including the first one shorter than `s`. `tau` adds the initial
//! exponential wait for that first event.

use crate::error::Result;
use crate::exact::{phi2_exact, phi_exact};
use crate::params::ProcessParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitingTimeMoments {
    pub mean: f64,
    pub variance: f64,
}

/// `1 - exp(-lambda s)` without cancellation.
fn short_gap_probability(lambda: f64, s: f64) -> f64 {
    -(-lambda * s).exp_m1()
}

/// `P(Y = i)` for the index `Y` of the first inter-arrival time below `s`.
pub fn geometric_y_pmf(i: u64, lambda: f64, s: f64) -> f64 {
    if i == 0 {
        return 0.0;
    }
    (-lambda * s * (i - 1) as f64).exp() * short_gap_probability(lambda, s)
}

pub fn tau2_moments(lambda: f64, s: f64) -> WaitingTimeMoments {
    let q = short_gap_probability(lambda, s);
    let x = lambda * s;
    WaitingTimeMoments {
        mean: 1.0 / (lambda * q),
        variance: (1.0 + 2.0 * x * (-x).exp()) / (lambda * lambda * q * q),
    }
}

pub fn tau_moments(lambda: f64, s: f64) -> WaitingTimeMoments {
    let m = tau2_moments(lambda, s);
    WaitingTimeMoments {
        mean: 1.0 / lambda + m.mean,
        variance: 1.0 / (lambda * lambda) + m.variance,
    }
}

/// `P(tau2 <= t) = 1 - phi2(s, t; lambda)`.
pub fn tau2_cdf_exact(params: &ProcessParams) -> Result<f64> {
    Ok(1.0 - phi2_exact(params)?.value)
}

/// `P(tau <= t) = 1 - phi(s, t; lambda)`.
pub fn tau_cdf_exact(params: &ProcessParams) -> Result<f64> {
    Ok(1.0 - phi_exact(params, None)?.value)
}
