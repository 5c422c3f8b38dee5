//! Exact evaluation of `phi` (no two consecutive events closer than `s`) and
//! of `phi2` (every event preceded by an event-free stretch longer than `s`).
//!
//! Both are `exp(-lambda t) (1 + sum_k a_k)` with a finite sum. Every term is
//! handled as a logarithm so nothing overflows; the sum is accumulated
//! against its running maximum. The term sequence `k -> ln a_k` is concave,
//! which gives a cheap peak search and a geometric bound on any tail left out.

use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method};
use crate::numeric::{ln_power_over_factorial, normal_two_sided_tail, LogSumExp, NeumaierSum};
use crate::params::ProcessParams;

/// The default policy sums every term up to this many; beyond it the sum is
/// restricted to the terms within [`PEAK_DROP`] log-units of the largest one.
pub const FULL_SUM_MAX_TERMS: u64 = 1_000_000;

/// Terms smaller than the largest by this factor in log space are dropped by
/// the automatic window (their total is still bounded and reported).
pub const PEAK_DROP: f64 = 50.0;

/// Central-limit truncation of the exact sum to `|k - lambda t| < a sqrt(lambda t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWindow {
    pub a: f64,
    pub k_lo: u64,
    pub k_hi: u64,
    /// `2 (1 - Phi(a))`. Nominal: the term weights are only close to Poisson,
    /// and the true truncation error can exceed this by a modest factor.
    pub error_bound: f64,
}

impl TruncationWindow {
    pub fn terms(&self) -> u64 {
        self.k_hi - self.k_lo + 1
    }

    pub fn contains(&self, k: u64) -> bool {
        (self.k_lo..=self.k_hi).contains(&k)
    }
}

/// Largest `k` with `t - (k - 1 + shift) s > 0`, robust to `t/s` landing
/// next to an integer in floating point.
fn last_index(t: f64, s: f64, shift: u64) -> u64 {
    if t <= 0.0 {
        return 0;
    }
    let base = |k: u64| t - (k + shift) as f64 * s + s;
    let ratio = (t / s).ceil();
    let mut k = if ratio >= u64::MAX as f64 {
        u64::MAX / 2
    } else {
        ratio as u64
    };
    k = k.saturating_sub(shift);
    while k > 0 && !(base(k) > 0.0) {
        k -= 1;
    }
    while base(k + 1) > 0.0 {
        k += 1;
    }
    k
}

/// Number of terms `K = ceil(t/s)` in the exact sum for `phi`, adjusted so
/// that the last base `t - (K-1)s` is positive in floating point.
pub fn term_count(params: &ProcessParams) -> u64 {
    last_index(params.t(), params.s(), 0)
}

/// `ln` of the terms `1, a_1, ..., a_last` where
/// `a_k = (lambda (t - (k - 1 + shift) s))^k / k!`.
struct Terms {
    lambda: f64,
    s: f64,
    t: f64,
    shift: u64,
    last: u64,
}

impl Terms {
    fn new(params: &ProcessParams, shift: u64) -> Self {
        Terms {
            lambda: params.lambda(),
            s: params.s(),
            t: params.t(),
            shift,
            last: last_index(params.t(), params.s(), shift),
        }
    }

    fn ln(&self, k: u64) -> f64 {
        let base = self.t - (k + self.shift) as f64 * self.s + self.s;
        ln_power_over_factorial(k, self.lambda, base)
    }

    fn ln_sum(&self, lo: u64, hi: u64) -> LogSumExp {
        let mut acc = LogSumExp::new();
        acc.extend((lo..=hi.min(self.last)).map(|k| self.ln(k)));
        acc
    }

    /// Index of the largest term.
    fn peak(&self) -> u64 {
        let (mut lo, mut hi) = (0u64, self.last);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.ln(mid + 1) > self.ln(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Range around the peak keeping every term within `PEAK_DROP` of the
    /// maximum, plus `ln` of a bound on the sum of the terms outside it.
    fn peak_window(&self) -> (u64, u64, f64) {
        let peak = self.peak();
        let floor = self.ln(peak) - PEAK_DROP;
        // right of the peak the terms decrease: largest k with ln(k) >= floor
        let (mut lo, mut hi) = (peak, self.last);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.ln(mid) >= floor {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let k_hi = lo;
        // left of the peak the terms increase: smallest k with ln(k) >= floor
        let (mut lo, mut hi) = (0, peak);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.ln(mid) >= floor {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let k_lo = lo;

        let mut tail = LogSumExp::new();
        if k_hi < self.last {
            let first = self.ln(k_hi + 1);
            let ratio = if k_hi + 2 <= self.last {
                self.ln(k_hi + 2) - first
            } else {
                f64::NEG_INFINITY
            };
            tail.add(first - (-ratio.exp_m1()).ln());
        }
        if k_lo > 0 {
            let first = self.ln(k_lo - 1);
            let ratio = if k_lo >= 2 {
                self.ln(k_lo - 2) - first
            } else {
                f64::NEG_INFINITY
            };
            tail.add(first - (-ratio.exp_m1()).ln());
        }
        (k_lo, k_hi, tail.value())
    }
}

#[derive(Debug, Clone, Copy)]
enum Policy<'a> {
    Auto,
    Full,
    Window(&'a TruncationWindow),
}

#[derive(Debug, Clone, Copy)]
struct LogEval {
    ln_value: f64,
    method: Method,
    terms: u64,
    k_lo: u64,
    k_hi: u64,
    bound: f64,
    window_a: Option<f64>,
}

impl LogEval {
    fn closed_form(ln_value: f64, terms: u64) -> Self {
        LogEval {
            ln_value,
            method: Method::ExactFull,
            terms,
            k_lo: 0,
            k_hi: terms.saturating_sub(1),
            bound: 0.0,
            window_a: None,
        }
    }

    fn into_estimate(self) -> Result<Estimate> {
        let mut est = Estimate::probability(self.ln_value.exp(), self.method)?
            .with_bound(self.bound)
            .with_diag("terms_summed", self.terms as f64)
            .with_diag("k_lo", self.k_lo as f64)
            .with_diag("k_hi", self.k_hi as f64);
        if let Some(a) = self.window_a {
            est = est.with_diag("window_a", a);
        }
        Ok(est)
    }
}

fn evaluate(params: &ProcessParams, shift: u64, policy: Policy<'_>) -> Result<LogEval> {
    let lt = params.lambda_t();
    if params.t() == 0.0 {
        return Ok(LogEval::closed_form(0.0, 0));
    }
    if params.t() <= params.s() {
        return Ok(match shift {
            0 => LogEval::closed_form(-lt + lt.ln_1p(), 2),
            _ => LogEval::closed_form(-lt, 1),
        });
    }
    let terms = Terms::new(params, shift);
    let policy = match policy {
        Policy::Auto if terms.last <= FULL_SUM_MAX_TERMS => Policy::Full,
        other => other,
    };
    Ok(match policy {
        Policy::Full => {
            let acc = terms.ln_sum(0, terms.last);
            LogEval {
                ln_value: acc.value() - lt,
                method: Method::ExactFull,
                terms: acc.count(),
                k_lo: 0,
                k_hi: terms.last,
                bound: 0.0,
                window_a: None,
            }
        }
        Policy::Auto => {
            let (k_lo, k_hi, ln_tail) = terms.peak_window();
            let acc = terms.ln_sum(k_lo, k_hi);
            LogEval {
                ln_value: acc.value() - lt,
                method: Method::ExactWindow,
                terms: acc.count(),
                k_lo,
                k_hi,
                bound: (ln_tail - lt).exp(),
                window_a: None,
            }
        }
        Policy::Window(w) => {
            let k_hi = w.k_hi.min(terms.last);
            if w.k_lo > k_hi {
                return Err(Error::EmptyWindow { k_lo: w.k_lo, k_hi });
            }
            let acc = terms.ln_sum(w.k_lo, k_hi);
            LogEval {
                ln_value: acc.value() - lt,
                method: Method::ExactWindow,
                terms: acc.count(),
                k_lo: w.k_lo,
                k_hi,
                bound: w.error_bound,
                window_a: Some(w.a),
            }
        }
    })
}

/// CLT window `|k - lambda t| < a sqrt(lambda t)` (open interval), clipped to
/// `[0, K]`.
pub fn make_window(params: &ProcessParams, a: f64) -> Result<TruncationWindow> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
            reason: "must be finite and > 0",
        });
    }
    let lt = params.lambda_t();
    if !(lt > 0.0) {
        return Err(Error::domain("make_window", "lambda * t must be positive"));
    }
    let half = a * lt.sqrt();
    let lower = lt - half;
    let k_lo = if lower < 0.0 {
        0
    } else {
        lower.floor() as u64 + 1
    };
    let k_hi = ((lt + half).ceil() as u64)
        .saturating_sub(1)
        .min(term_count(params));
    if k_lo > k_hi {
        return Err(Error::EmptyWindow { k_lo, k_hi });
    }
    Ok(TruncationWindow {
        a,
        k_lo,
        k_hi,
        error_bound: normal_two_sided_tail(a),
    })
}

/// Exact `phi(s, t; lambda)`.
///
/// With a window only the terms `k_lo..=k_hi` are summed (the constant term
/// counts as `k = 0`). Without one, all `K` terms are summed when
/// `K <= FULL_SUM_MAX_TERMS`; otherwise the sum is restricted to the terms
/// around the peak and the dropped mass is bounded in `error_bound`.
pub fn phi_exact(params: &ProcessParams, window: Option<&TruncationWindow>) -> Result<Estimate> {
    let policy = window.map_or(Policy::Auto, Policy::Window);
    evaluate(params, 0, policy)?.into_estimate()
}

/// Exact `phi` summing every term regardless of `K`.
pub fn phi_exact_full(params: &ProcessParams) -> Result<Estimate> {
    evaluate(params, 0, Policy::Full)?.into_estimate()
}

/// `ln phi(s, t; lambda)` under the default policy, valid far below the
/// smallest positive double.
pub fn log_phi_exact(params: &ProcessParams) -> Result<f64> {
    Ok(evaluate(params, 0, Policy::Auto)?.ln_value)
}

/// Exact `phi2(s, t; lambda) = exp(-lambda t) (1 + sum_{k < ceil(t/s)} (lambda (t - k s))^k / k!)`.
pub fn phi2_exact(params: &ProcessParams) -> Result<Estimate> {
    evaluate(params, 1, Policy::Auto)?.into_estimate()
}

pub fn log_phi2_exact(params: &ProcessParams) -> Result<f64> {
    Ok(evaluate(params, 1, Policy::Auto)?.ln_value)
}

/// Probability that `n` uniform order statistics on `[0, t]` have successive
/// gaps exceeding `gaps[i]`: `(1 - sum(gaps)/t)^n`.
pub fn spacing_probability(t: f64, gaps: &[f64], n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("spacing_probability", "n must be >= 1"));
    }
    if gaps.len() + 1 != n {
        return Err(Error::domain(
            "spacing_probability",
            format!("expected {} gaps for n = {n}, got {}", n - 1, gaps.len()),
        ));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be finite and > 0",
        });
    }
    if let Some(&g) = gaps.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
        return Err(Error::InvalidParameter {
            name: "gap",
            value: g,
            reason: "must be finite and >= 0",
        });
    }
    let total = gaps.iter().copied().collect::<NeumaierSum>().value();
    if total > t {
        return Err(Error::domain(
            "spacing_probability",
            format!("gaps sum to {total} > t = {t}"),
        ));
    }
    Ok((1.0 - total / t).powi(n as i32))
}
