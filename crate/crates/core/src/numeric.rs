//! Shared numeric kernels: special functions, compensated summation and
//! log-space accumulation.

use crate::error::{Error, Result};
use crate::params::ProcessParams;

/// Natural log of the gamma function (musl/fdlibm algorithm, < 1e-15 relative).
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln k!`.
pub fn ln_factorial(k: u64) -> f64 {
    ln_gamma(k as f64 + 1.0)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Two-sided standard normal tail `2 (1 - Phi(a))`.
pub fn normal_two_sided_tail(a: f64) -> f64 {
    erfc(a / std::f64::consts::SQRT_2)
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn scale(&mut self, factor: f64) {
        self.sum *= factor;
        self.comp *= factor;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        s.extend(iter);
        s
    }
}

/// Streaming `ln sum exp(v_i)` against the running maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSumExp {
    max: f64,
    scaled: NeumaierSum,
    count: u64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled: NeumaierSum::new(),
            count: 0,
        }
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        self.count += 1;
        if v == f64::NEG_INFINITY {
            return;
        }
        if v > self.max {
            if self.max != f64::NEG_INFINITY {
                self.scaled.scale((self.max - v).exp());
            }
            self.max = v;
        }
        self.scaled.add((v - self.max).exp());
    }

    /// Number of terms pushed, including `-inf` ones.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.max + self.scaled.value().ln()
    }
}

impl Extend<f64> for LogSumExp {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// `ln sum_i exp(log_terms[i])`; `-inf` for an empty slice.
pub fn log_sum_exp(log_terms: &[f64]) -> f64 {
    let max = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: NeumaierSum = log_terms.iter().map(|&v| (v - max).exp()).collect();
    max + sum.value().ln()
}

/// `k ln(lambda * base) - ln k!`, the log of `(lambda base)^k / k!`.
pub(crate) fn ln_power_over_factorial(k: u64, lambda: f64, base: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    k as f64 * (lambda * base).ln() - ln_factorial(k)
}

/// `ln a_k` where `a_k = lambda^k [t - (k-1)s]^k / k!` is the k-th term of the
/// exact sum.
pub fn log_term(k: u64, params: &ProcessParams) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("log_term", "k must be >= 1"));
    }
    let base = params.t() - (k - 1) as f64 * params.s();
    if !(base > 0.0) {
        return Err(Error::domain(
            "log_term",
            format!("t - (k-1)s = {base} is not positive for k = {k}"),
        ));
    }
    Ok(ln_power_over_factorial(k, params.lambda(), base))
}
