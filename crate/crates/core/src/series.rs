//! Small-window expansion of `phi` in powers of `lambda s`.
//!
//! The coefficients are the polynomials
//! `P_n(x) = sum_k e^{-x} x^k / k! (k + n - 1)^n`, whose integer coefficients
//! follow from Stirling numbers of the second kind. They are kept exact and
//! only converted to floating point when evaluated.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method};
use crate::numeric::{ln_factorial, LogSumExp, NeumaierSum};
use crate::params::ProcessParams;

pub const STIRLING_MAX: usize = 64;
pub const SERIES_MAX_ORDER: usize = 30;

/// Triangle of Stirling numbers of the second kind `S(i, j)`, `0 <= j <= i <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S(i, j)`; zero for `j > i`.
    pub fn get(&self, i: usize, j: usize) -> BigUint {
        self.rows[i].get(j).cloned().unwrap_or_default()
    }

    pub fn row(&self, i: usize) -> &[BigUint] {
        &self.rows[i]
    }
}

pub fn stirling_table(n_max: usize) -> Result<StirlingTable> {
    if n_max > STIRLING_MAX {
        return Err(Error::CapExceeded {
            what: "n_max",
            value: n_max,
            cap: STIRLING_MAX,
        });
    }
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for i in 1..=n_max {
        let prev = &rows[i - 1];
        let mut row = vec![BigUint::zero(); i + 1];
        row[1] = BigUint::one();
        row[i] = BigUint::one();
        for j in 2..i {
            row[j] = &prev[j - 1] + &prev[j] * j;
        }
        rows.push(row);
    }
    Ok(StirlingTable { rows })
}

/// Polynomial with exact nonnegative integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigUint>,
}

impl IntPolynomial {
    pub fn coefficients(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation in double precision.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// `ln P(x)` for `x > 0`, safe when `P(x)` overflows.
    pub fn ln_eval(&self, x: f64) -> f64 {
        let lx = x.ln();
        let mut acc = LogSumExp::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc.add(ln_biguint(c) + j as f64 * lx);
            }
        }
        acc.value()
    }
}

fn to_f64(c: &BigUint) -> f64 {
    c.to_f64().unwrap_or(f64::INFINITY)
}

fn ln_biguint(c: &BigUint) -> f64 {
    let bits = c.bits();
    if bits < 1000 {
        return to_f64(c).ln();
    }
    let shift = bits - 60;
    to_f64(&(c >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
}

fn check_order(n: usize) -> Result<()> {
    if n > SERIES_MAX_ORDER {
        Err(Error::CapExceeded {
            what: "n",
            value: n,
            cap: SERIES_MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

fn binomials(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one(); n + 1];
    for i in 1..n {
        row[i] = &row[i - 1] * (n - i + 1) / i;
    }
    row
}

/// `(n - 1)^p` with `0^0 = 1`; `n = 0` never reaches odd powers here since `i <= n`.
fn shift_powers(n: usize) -> Vec<BigUint> {
    let base = BigUint::from(n.saturating_sub(1));
    let mut pows = vec![BigUint::one(); n + 1];
    for p in 1..=n {
        pows[p] = &pows[p - 1] * &base;
    }
    pows
}

/// `P_n` with coefficients grouped by power:
/// `c_j = sum_{i=j..n} C(n, i) (n-1)^(n-i) S(i, j)`.
pub fn pn_polynomial(n: usize) -> Result<IntPolynomial> {
    check_order(n)?;
    let st = stirling_table(n)?;
    let binom = binomials(n);
    let pows = shift_powers(n);
    let coeffs = (0..=n)
        .map(|j| {
            (j..=n)
                .map(|i| &binom[i] * &pows[n - i] * st.get(i, j))
                .sum::<BigUint>()
        })
        .collect();
    Ok(IntPolynomial { coeffs })
}

/// `P_n` accumulated moment by moment:
/// `sum_i C(n, i) (n-1)^(n-i) sum_j S(i, j) x^j`.
pub fn pn_polynomial_by_moments(n: usize) -> Result<IntPolynomial> {
    check_order(n)?;
    let st = stirling_table(n)?;
    let binom = binomials(n);
    let pows = shift_powers(n);
    let mut coeffs = vec![BigUint::zero(); n + 1];
    for i in 0..=n {
        let weight = &binom[i] * &pows[n - i];
        for (j, s) in st.row(i).iter().enumerate() {
            coeffs[j] += &weight * s;
        }
    }
    Ok(IntPolynomial { coeffs })
}

pub fn pn_eval(n: usize, x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be finite and >= 0",
        });
    }
    Ok(pn_polynomial(n)?.eval(x))
}

/// Signed terms `(-1)^n P_n(lambda t) (lambda s)^n / n!` for `n = 1..=order`.
fn series_terms(params: &ProcessParams, order: usize) -> Result<Vec<f64>> {
    check_order(order)?;
    let (x, lt) = (params.lambda_s(), params.lambda_t());
    (1..=order)
        .map(|n| {
            let poly = pn_polynomial(n)?;
            let p = poly.eval(lt);
            let scale: f64 = (1..=n).map(|i| x / i as f64).product();
            let mut mag = p * scale;
            if !(mag.is_finite() && (mag > 0.0 || x == 0.0 || lt == 0.0)) {
                mag = (poly.ln_eval(lt) + n as f64 * x.ln() - ln_factorial(n as u64)).exp();
            }
            Ok(if n % 2 == 0 { mag } else { -mag })
        })
        .collect()
}

/// `S_N = sum_{n=1..N} (-1)^(n+1) P_n(lambda t) (lambda s)^n / n!`, the
/// truncated expansion of `1 - phi`.
pub fn series_sn(params: &ProcessParams, order: usize) -> Result<f64> {
    let sum: NeumaierSum = series_terms(params, order)?.into_iter().collect();
    Ok(-sum.value())
}

/// Truncated expansion `sum_{n=0..N} (-1)^n P_n(lambda t) (lambda s)^n / n!`.
/// Partial sums are not clamped.
pub fn series_phi(params: &ProcessParams, order: usize) -> Result<Estimate> {
    let value = 1.0 - series_sn(params, order)?;
    Ok(Estimate::new(value, Method::Series).with_diag("N", order as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(p: &IntPolynomial) -> Vec<u64> {
        p.coefficients()
            .iter()
            .map(|c| c.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn stirling_values() {
        let st = stirling_table(12).unwrap();
        for i in 1..=12 {
            assert_eq!(st.get(i, i), BigUint::one());
            assert_eq!(st.get(i, 1), BigUint::one());
            assert!(st.get(i, 0).is_zero());
        }
        assert_eq!(st.get(0, 0), BigUint::one());
        assert!(st.get(3, 0).is_zero());
        assert_eq!(st.get(4, 2), BigUint::from(7u32));
        assert_eq!(st.get(10, 5), BigUint::from(42525u32));
        assert!(st.get(2, 5).is_zero());
    }

    #[test]
    fn stirling_rows_sum_to_bell_numbers() {
        let st = stirling_table(6).unwrap();
        let bell: Vec<u64> = (0..=6)
            .map(|i| st.row(i).iter().sum::<BigUint>().to_u64().unwrap())
            .collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn stirling_cap() {
        assert!(stirling_table(64).is_ok());
        assert!(stirling_table(65).is_err());
    }

    #[test]
    fn low_order_polynomials() {
        assert_eq!(coeffs(&pn_polynomial(0).unwrap()), vec![1]);
        assert_eq!(coeffs(&pn_polynomial(1).unwrap()), vec![0, 1]);
        assert_eq!(coeffs(&pn_polynomial(2).unwrap()), vec![1, 3, 1]);
        assert_eq!(coeffs(&pn_polynomial(3).unwrap()), vec![8, 19, 9, 1]);
        assert_eq!(
            coeffs(&pn_polynomial(7).unwrap()),
            vec![279936, 543607, 365001, 113701, 18200, 1526, 63, 1]
        );
        assert!(pn_polynomial(31).is_err());
    }

    #[test]
    fn large_order_structure() {
        // c_0 = (n-1)^n overflows u64 from n = 17 on
        for n in [17usize, 25, 30] {
            let p = pn_polynomial(n).unwrap();
            assert_eq!(p.degree(), n);
            assert_eq!(p.coefficients()[0], BigUint::from(n - 1).pow(n as u32));
            assert_eq!(p.coefficients()[n], BigUint::one());
        }
    }

    #[test]
    fn evaluation() {
        assert_eq!(pn_eval(0, 123.4).unwrap(), 1.0);
        assert_eq!(pn_eval(1, 7.3).unwrap(), 7.3);
        assert_eq!(pn_eval(2, 10.0).unwrap(), 131.0);
        assert!(pn_eval(2, -1.0).is_err());
        let p = pn_polynomial(9).unwrap();
        assert!(((p.ln_eval(3.3) - p.eval(3.3).ln()) / p.eval(3.3).ln()).abs() < 1e-14);
    }

    #[test]
    fn series_examples() {
        let p = ProcessParams::new(1.0, 0.01, 1.0).unwrap();
        assert_eq!(series_phi(&p, 0).unwrap().value, 1.0);
        assert!((series_phi(&p, 1).unwrap().value - 0.99).abs() < 1e-15);
        assert!((series_sn(&p, 1).unwrap() - 0.01).abs() < 1e-15);
        assert!(series_phi(&p, 31).is_err());
    }

    #[test]
    fn complement_identity() {
        let p = ProcessParams::new(1.7, 0.003, 2.2).unwrap();
        for n in 1..=12 {
            let sn = series_sn(&p, n).unwrap();
            let phi = series_phi(&p, n).unwrap().value;
            assert_eq!(phi, 1.0 - sn);
        }
    }

    #[test]
    fn huge_lambda_t_uses_log_path() {
        // P_30(1e12) overflows a double; the term itself is modest
        let p = ProcessParams::new(1.0, 1e-13, 1e12).unwrap();
        let terms = series_terms(&p, 30).unwrap();
        assert!(terms.iter().all(|v| v.is_finite()));
        // leading behaviour: P_n(x) x'^n / n! ~ (x x')^n / n! with x x' = 0.1
        assert!((terms[0] + 0.1).abs() < 1e-9);
        assert!(
            (terms[29] - 0.1f64.powi(30) / (1..=30).map(|i| i as f64).product::<f64>()).abs()
                < 1e-40
        );
    }
}
