use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method};
use crate::exact::phi_exact_full;
use crate::fixedpoint::{a_of, u_c};
use crate::params::ProcessParams;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_W: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS_W: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;
const MAX_PANELS: usize = 100_000;

fn gk15<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, &x) in GK_NODES.iter().enumerate() {
        let vals = if x == 0.0 {
            f(c)?
        } else {
            f(c - h * x)? + f(c + h * x)?
        };
        kronrod += KRONROD_W[i] * vals;
        if i % 2 == 1 {
            gauss += GAUSS_W[i / 2] * vals;
        }
    }
    Ok((kronrod * h, ((kronrod - gauss) * h).abs()))
}

fn adapt<F: Fn(f64) -> Result<f64>>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Result<(f64, f64)> {
    let (v, e) = gk15(f, a, b)?;
    if e <= tol || depth >= MAX_DEPTH {
        if e > tol {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                iterations: depth as usize,
            });
        }
        return Ok((v, e));
    }
    let c = 0.5 * (a + b);
    let (v1, e1) = adapt(f, a, c, 0.5 * tol, depth + 1)?;
    let (v2, e2) = adapt(f, c, b, 0.5 * tol, depth + 1)?;
    Ok((v1 + v2, e1 + e2))
}

/// Adaptive Gauss-Kronrod (7/15) integral of `f` over `[a, b]` with absolute
/// tolerance `tol`. Returns the value and the estimated error.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    adapt(&f, a, b, tol, 0)
}

/// `int_0^inf e^{-u t} phi(s, t; lambda) dt` by quadrature of the exact
/// probability, on panels between multiples of `s` (where `phi` has kinks),
/// truncated where the tail bound `2 A e^{(u_c - u) T} / (u - u_c)` drops
/// below `tail_tol`. Requires `u > u_c + 0.1 |u_c|`.
pub fn laplace_phi_quadrature(u: f64, params: &ProcessParams, tail_tol: f64) -> Result<Estimate> {
    let (lambda, s) = (params.lambda(), params.s());
    let uc = u_c(params)?;
    if !(u.is_finite() && u > uc + 0.1 * uc.abs()) {
        return Err(Error::domain(
            "laplace_phi_quadrature",
            format!("u = {u} is too close to the abscissa {uc}"),
        ));
    }
    if !(tail_tol.is_finite() && tail_tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tail_tol",
            value: tail_tol,
            reason: "must be finite and > 0",
        });
    }
    let gap = u - uc;
    let a = a_of(lambda * s)?;
    let horizon = ((2.0 * a / (gap * tail_tol)).ln() / gap).max(s);
    let panels = (horizon / s).ceil();
    if panels > MAX_PANELS as f64 {
        return Err(Error::CapExceeded {
            what: "quadrature panels",
            value: panels as usize,
            cap: MAX_PANELS,
        });
    }
    let panels = panels as usize;
    let integrand = |t: f64| -> Result<f64> {
        let p = ProcessParams::new(lambda, s, t)?;
        Ok((-u * t).exp() * phi_exact_full(&p)?.value)
    };
    let panel_tol = tail_tol / panels as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for k in 0..panels {
        let (v, e) = integrate_adaptive(integrand, k as f64 * s, (k + 1) as f64 * s, panel_tol)?;
        total += v;
        err += e;
    }
    Ok(Estimate::new(total, Method::Quadrature)
        .with_bound(err + tail_tol)
        .with_diag("horizon", panels as f64 * s)
        .with_diag("panels", panels as f64))
}
