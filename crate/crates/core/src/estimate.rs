use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tolerance for probability values that stray outside `[0, 1]` by rounding.
pub const EPS_CLAMP: f64 = 1e-10;

/// How an [`Estimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ExactFull,
    ExactWindow,
    Star,
    Series,
    MonteCarlo,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactFull => "exact-full",
            Method::ExactWindow => "exact-window",
            Method::Star => "star",
            Method::Series => "series",
            Method::MonteCarlo => "monte-carlo",
            Method::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "exact-full" => Method::ExactFull,
            "exact-window" => Method::ExactWindow,
            "star" => Method::Star,
            "series" => Method::Series,
            "monte-carlo" => Method::MonteCarlo,
            "quadrature" => Method::Quadrature,
            other => return Err(format!("unknown method `{other}`")),
        })
    }
}

/// A computed value together with how it was obtained and how far it can be trusted.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub method: Method,
    /// Truncation bound or standard error, depending on the method.
    pub error_bound: Option<f64>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl Estimate {
    pub fn new(value: f64, method: Method) -> Self {
        Estimate {
            value,
            method,
            error_bound: None,
            diagnostics: BTreeMap::new(),
        }
    }

    /// Applies the clamp policy: values within [`EPS_CLAMP`] of `[0, 1]` are
    /// pulled in and flagged with a `clamped` diagnostic, anything further out
    /// is an error.
    pub fn probability(value: f64, method: Method) -> Result<Self> {
        if !(-EPS_CLAMP..=1.0 + EPS_CLAMP).contains(&value) {
            return Err(Error::OutOfRange { value });
        }
        let clamped = value.clamp(0.0, 1.0);
        let mut est = Estimate::new(clamped, method);
        if clamped != value {
            est.diagnostics.insert("clamped".into(), 1.0);
        }
        Ok(est)
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.error_bound = Some(bound);
        self
    }

    pub fn with_diag(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_owned(), value);
        self
    }

    pub fn diag(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).copied()
    }

    /// Set when an approximation was asked for outside the range it is built for.
    pub fn is_out_of_domain(&self) -> bool {
        self.diag("out_of_domain").is_some_and(|v| v != 0.0)
    }
}
