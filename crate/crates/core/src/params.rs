//! Process parameters and their scale-free reductions.
//!
//! The probability of no close pair depends on `(lambda, s, t)` only through
//! two dimensionless combinations. [`ReducedParams`] carries both the
//! `(x, r) = (lambda*s, t/s)` pair and `lambda*t = x*r`.

use crate::error::{Error, Result};

/// Rate `lambda`, minimum-gap window `s` and horizon `t` of a Poisson process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessParams {
    lambda: f64,
    s: f64,
    t: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

fn nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

impl ProcessParams {
    pub fn new(lambda: f64, s: f64, t: f64) -> Result<Self> {
        Ok(ProcessParams {
            lambda: positive("lambda", lambda)?,
            s: positive("s", s)?,
            t: nonnegative("t", t)?,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `x = lambda * s`.
    pub fn lambda_s(&self) -> f64 {
        self.lambda * self.s
    }

    pub fn lambda_t(&self) -> f64 {
        self.lambda * self.t
    }

    /// Same process and window, different horizon.
    pub fn with_t(&self, t: f64) -> Result<Self> {
        ProcessParams::new(self.lambda, self.s, t)
    }
}

/// Dimensionless parameters `x = lambda*s`, `r = t/s` and `lambda*t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    pub x: f64,
    pub r: f64,
    pub lambda_t: f64,
}

impl ReducedParams {
    pub fn new(x: f64, r: f64) -> Result<Self> {
        let x = positive("x", x)?;
        let r = nonnegative("r", r)?;
        Ok(ReducedParams {
            x,
            r,
            lambda_t: x * r,
        })
    }

    /// The canonical representative `(lambda, s, t) = (x, 1, r)`.
    pub fn to_params(&self) -> ProcessParams {
        ProcessParams {
            lambda: self.x,
            s: 1.0,
            t: self.r,
        }
    }
}

pub fn reduce(params: &ProcessParams) -> ReducedParams {
    ReducedParams {
        x: params.lambda_s(),
        r: params.t / params.s,
        lambda_t: params.lambda_t(),
    }
}
