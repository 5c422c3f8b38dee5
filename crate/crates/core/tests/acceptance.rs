//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use scanstat::approx::{laplace_phi_closed, log_phi_star, phi_star};
use scanstat::exact::{log_phi_exact, make_window, phi2_exact, phi_exact, phi_exact_full};
use scanstat::fixedpoint::{a_of, a_xr, p_gates_westcott, solve_b, u_c};
use scanstat::oracle::{
    ks_critical_value, ks_two_sample, laplace_phi_quadrature, mc_phi, mc_tau2_moments, renewal_phi,
    tau2_samples, SimConfig, Tau2Route,
};
use scanstat::series::{pn_polynomial, pn_polynomial_by_moments, series_phi};
use scanstat::{ProcessParams, ReducedParams};

type Outcome = (bool, String);

fn pp(lambda: f64, s: f64, t: f64) -> ProcessParams {
    ProcessParams::new(lambda, s, t).expect("valid parameters")
}

/// Median wall time of `f` over several runs.
fn timed<T>(mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut times = Vec::new();
    let mut out = f();
    for _ in 0..11 {
        let start = Instant::now();
        out = f();
        times.push(start.elapsed());
    }
    times.sort();
    (out, times[times.len() / 2])
}

fn within(v: f64, target: f64, tol: f64) -> bool {
    (v - target).abs() <= tol
}

/// Same sign and equal after rounding to one significant figure of `reference`.
fn one_figure(v: f64, reference: f64) -> bool {
    let unit = 10f64.powi(reference.abs().log10().floor() as i32);
    (v - reference).abs() <= 0.5 * unit && v.signum() == reference.signum()
}

fn sci(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.3e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn reference_point_values() -> Outcome {
    let p = pp(0.2, 1.0, 20.0);
    let (phi, t_phi) = timed(|| phi_exact(&p, None).unwrap().value);
    let (star, t_star) = timed(|| phi_star(&p).unwrap().value);
    let phi_ok = within(phi, 0.5439808, 5e-8);
    let star_ok = within(star, 0.5439807, 5e-8);
    let fast = t_phi < Duration::from_millis(1) && t_star < Duration::from_millis(1);
    (
        phi_ok && star_ok && fast,
        format!(
            "phi = {phi:.10} (|d| = {:.2e}, {}), phi* = {star:.10} (|d| = {:.2e}, {}), tol 5e-8; times {t_phi:?}, {t_star:?}",
            (phi - 0.5439808).abs(),
            if phi_ok { "ok" } else { "off" },
            (star - 0.5439807).abs(),
            if star_ok { "ok" } else { "off" },
        ),
    )
}

fn underflow_regime() -> Outcome {
    let p = pp(2.0, 0.1, 400.0);
    let star = phi_star(&p).unwrap().value;
    let ln_exact = log_phi_exact(&p).unwrap();
    let ln_star = log_phi_star(&p).unwrap();
    let digits = rel(ln_exact, ln_star);
    let far = phi_exact(&pp(2.0, 0.1, 500.0), None).unwrap();
    let far_ok = far.value.is_finite() && far.value > 0.0 && far.value < 1e-60;
    let ok = (0.5e-54..=2e-54).contains(&star) && digits <= 1e-10 && far_ok;
    (
        ok,
        format!(
            "phi*(0.1,400;2) = {star:.4e}; ln phi = {ln_exact:.12}, ln phi* = {ln_star:.12}, rel {digits:.1e}; phi(0.1,500;2) = {:.4e}",
            far.value
        ),
    )
}

fn heavy_window_convergence() -> Outcome {
    let r: f64 = 4e6;
    let p = pp(1.0, 1.0 / r.sqrt(), r.sqrt());
    let (star, t) = timed(|| phi_star(&p).unwrap().value);
    let e1 = (-1.0f64).exp();
    let ratio = (star - e1) * r.sqrt() / (1.5 * e1);
    let ok = within(star, 0.36815525, 1e-7)
        && (0.99..=1.01).contains(&ratio)
        && t < Duration::from_millis(1);
    (
        ok,
        format!("phi* = {star:.10}, scaled gap ratio = {ratio:.5}, time {t:?}"),
    )
}

fn finite_horizon_ratio() -> Outcome {
    let cases = [(100.0, 2e-2), (50.0, 1e-3), (25.0, -5e-4)];
    let start = Instant::now();
    let diffs: Vec<f64> = cases
        .iter()
        .map(|&(x, _)| a_xr(&ReducedParams::new(x, 10.0).unwrap()).unwrap() - a_of(x).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let ok = cases
        .iter()
        .zip(&diffs)
        .all(|(&(_, r), &d)| one_figure(d, r))
        && elapsed < Duration::from_millis(100);
    (
        ok,
        format!(
            "A(x,10) - A(x) at x = 100, 50, 25: {}; time {elapsed:?}",
            sci(&diffs)
        ),
    )
}

fn series_gap_row() -> Outcome {
    let refs = [-1.8e-4, 2.2e-5, -2.5e-6, 2.6e-7, -2.3e-8];
    let p = pp(1.0, 1e-4, 1e4);
    let star = phi_star(&p).unwrap().value;
    let gaps: Vec<f64> = (6..=10)
        .map(|n| star - series_phi(&p, n).unwrap().value)
        .collect();
    let ok = gaps.iter().zip(&refs).all(|(&g, &r)| one_figure(g, r));
    (ok, format!("N = 6..10: {}", sci(&gaps)))
}

fn truncation_windows() -> Outcome {
    let p = pp(1.0, 1.0 / 400.0, 400.0);
    let full = phi_exact_full(&p).unwrap().value;
    let mut ok = true;
    let mut detail = Vec::new();
    for (a, expected_err, bound, terms) in
        [(5.0, 2.24e-7, 5.73e-7, 199), (6.0, 1.07e-9, 1.97e-9, 239)]
    {
        let w = make_window(&p, a).unwrap();
        let err = (full - phi_exact(&p, Some(&w)).unwrap().value).abs();
        ok &= err >= expected_err / 2.0
            && err <= expected_err * 2.0
            && err <= bound
            && w.terms() == terms;
        detail.push(format!(
            "a={a}: {} terms, error {err:.4e}, bound {:.4e}",
            w.terms(),
            w.error_bound
        ));
    }
    (ok, detail.join("; "))
}

fn large_rate_horizon() -> Outcome {
    let e4 = (-4.0f64).exp();
    let g1 = phi_star(&pp(1.0, 1e-3, 4e3)).unwrap().value - e4;
    let g2 = phi_star(&pp(1.0, 1e-5, 4e5)).unwrap().value - e4;
    let ok = within(g1, 1.1e-4, 0.11e-4) && within(g2, 1.1e-6, 0.11e-6);
    (
        ok,
        format!("phi* - e^-4 = {g1:.4e} (lambda s = 1e-3), {g2:.4e} (lambda s = 1e-5)"),
    )
}

fn polynomial_coefficients() -> Outcome {
    let table: [&[u64]; 8] = [
        &[1],
        &[0, 1],
        &[1, 3, 1],
        &[8, 19, 9, 1],
        &[81, 175, 97, 18, 1],
        &[1024, 2101, 1275, 305, 30, 1],
        &[15625, 31031, 19981, 5590, 740, 45, 1],
        &[279936, 543607, 365001, 113701, 18200, 1526, 63, 1],
    ];
    let table_ok = table.iter().enumerate().all(|(n, row)| {
        let expected: Vec<BigUint> = row.iter().map(|&c| BigUint::from(c)).collect();
        pn_polynomial(n).unwrap().coefficients() == expected.as_slice()
    });
    let dual_ok =
        (0..=30).all(|n| pn_polynomial(n).unwrap() == pn_polynomial_by_moments(n).unwrap());
    (
        table_ok && dual_ok,
        format!("n = 0..7 table match: {table_ok}; formulas agree for n <= 30: {dual_ok}"),
    )
}

fn approximation_envelope() -> Outcome {
    let max_gap = |a: f64, b: f64| {
        (0..=200)
            .map(|i| {
                let p = pp(1.0, 1.0, a + (b - a) * i as f64 / 200.0);
                (phi_star(&p).unwrap().value - phi_exact(&p, None).unwrap().value).abs()
            })
            .fold(0.0f64, f64::max)
    };
    let (late, early) = (max_gap(3.0, 5.0), max_gap(1.0, 3.0));
    (
        late <= 5e-5 && early <= 6e-3,
        format!("max |phi* - phi|: {late:.4e} on [3,5], {early:.4e} on [1,3]"),
    )
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };

    let phi = |l: f64, s: f64, t: f64| phi_exact(&pp(l, s, t), None).unwrap().value;
    let scale_ok = [(0.2, 1.0, 20.0), (1.0, 0.3, 7.7), (3.0, 0.05, 11.0)]
        .iter()
        .all(|&(l, s, t)| {
            [1e-3, 7.5, 1e3]
                .iter()
                .all(|&c| rel(phi(l, s, t), phi(l / c, s * c, t * c)) <= 1e-12)
        });
    check("scale invariance", scale_ok);

    let shift_ok = [(0.2, 1.0, 21.0), (1.0, 1.0, 2.5), (2.0, 0.1, 40.0)]
        .iter()
        .all(|&(l, s, t)| {
            rel(
                phi2_exact(&pp(l, s, t)).unwrap().value,
                (-l * s).exp() * phi(l, s, t - s),
            ) <= 1e-12
        });
    check("phi2 shift identity", shift_ok);

    let resid = |t: f64, h: f64| {
        let d = (phi(1.0, 1.0, t + h) - phi(1.0, 1.0, t - h)) / (2.0 * h);
        (d + phi(1.0, 1.0, t) - (-1.0f64).exp() * phi(1.0, 1.0, t - 1.0)).abs()
    };
    let ode_ok = [2.5, 3.7, 10.2].iter().all(|&t| resid(t, 1e-4) <= 1e-7)
        && (12.0..20.0).contains(&(resid(3.7, 0.04) / resid(3.7, 0.01)));
    check("delay equation residual O(h^2)", ode_ok);

    let grid_ok = (0..100).all(|i| {
        let x = 10f64.powf(-6.0 + 9.0 * i as f64 / 99.0);
        let b = solve_b(x).unwrap().b;
        ((-x * b).exp() - b).abs() <= 1e-14 && rel(x * b * (x * b).exp(), x) <= 1e-12
    });
    check("fixed-point residual and Lambert identity", grid_ok);

    let gw_ok = [(1.0, 1.0), (0.2, 1.0), (50.0, 0.3)].iter().all(|&(l, s)| {
        let p = p_gates_westcott(l, s).unwrap();
        rel(p * (s * p).exp(), l) <= 1e-12
    });
    check("p exp(s p) = lambda", gw_ok);

    let lp = pp(1.0, 1.0, 0.0);
    let laplace_ok = [1.0, 10.0].iter().all(|&u| {
        (laplace_phi_quadrature(u, &lp, 1e-10).unwrap().value - laplace_phi_closed(u, &lp).unwrap())
            .abs()
            <= 1e-6
    });
    check("Laplace closed form vs quadrature", laplace_ok);

    let cfg = SimConfig::new(42, 1_000_000);
    let triangle_ok = [2.0, 3.5, 5.0].iter().all(|&t| {
        let p = pp(1.0, 1.0, t);
        let exact = phi_exact_full(&p).unwrap().value;
        let renewal = renewal_phi(&p, 1.0 / 128.0).unwrap().value;
        let mc = mc_phi(&p, &cfg).unwrap();
        let tol = (4.0 * mc.stderr).max(1e-4);
        (exact - renewal).abs() <= tol
            && (exact - mc.estimate).abs() <= tol
            && (renewal - mc.estimate).abs() <= tol
    });
    check("exact / renewal / Monte Carlo triangle", triangle_ok);

    let a = mc_tau2_moments(1.0, LN_2, &SimConfig::new(1, 1_000_000), Tau2Route::Direct).unwrap();
    let b = mc_tau2_moments(
        1.0,
        LN_2,
        &SimConfig::new(2, 1_000_000),
        Tau2Route::Decomposed,
    )
    .unwrap();
    let xs = tau2_samples(1.0, LN_2, &SimConfig::new(3, 200_000), Tau2Route::Direct).unwrap();
    let ys = tau2_samples(
        1.0,
        LN_2,
        &SimConfig::new(4, 200_000),
        Tau2Route::Decomposed,
    )
    .unwrap();
    let decomposition_ok = (a.mean - b.mean).abs() <= 4.0 * a.stderr_mean().hypot(b.stderr_mean())
        && (a.variance - b.variance).abs() <= 4.0 * a.stderr_variance().hypot(b.stderr_variance())
        && ks_two_sample(&xs, &ys) < ks_critical_value(xs.len(), ys.len(), 0.01);
    check("tau2 decomposition two-sample agreement", decomposition_ok);

    let order_ok = [2usize, 3].iter().all(|&n| {
        let err = |s: f64| {
            let p = pp(1.0, s, 5.0);
            (phi_exact_full(&p).unwrap().value - series_phi(&p, n).unwrap().value).abs()
        };
        let lo = 2f64.powi(n as i32);
        [1e-2, 5e-3].iter().all(|&s| {
            let ratio = err(s) / err(s / 2.0);
            ratio >= lo && ratio <= 4.0 * lo
        })
    });
    check("asymptotic order of the series", order_ok);

    let uc_ok = u_c(&lp).unwrap() < 0.0;
    check("abscissa negative", uc_ok);

    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    let detail = if failures.is_empty() {
        format!("10 property groups hold; time {elapsed:.2?}")
    } else {
        format!("failed: {}; time {elapsed:.2?}", failures.join(", "))
    };
    (ok, detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        (
            "reference point phi and phi* to 7 decimals",
            reference_point_values,
        ),
        ("underflow regime in log space", underflow_regime),
        ("heavy-window convergence", heavy_window_convergence),
        ("finite-horizon ratio differences", finite_horizon_ratio),
        ("fixed-point vs series differences", series_gap_row),
        (
            "truncation window errors and term counts",
            truncation_windows,
        ),
        ("large-rate horizon gaps", large_rate_horizon),
        ("polynomial coefficients", polynomial_coefficients),
        ("approximation error envelope", approximation_envelope),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = run();
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
