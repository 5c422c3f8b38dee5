use num_bigint::BigUint;

use scanstat::approx::phi_star;
use scanstat::cli::{RATIO_DIFFERENCES, SERIES_GAP_LARGE_RATE, SERIES_GAP_ROW};
use scanstat::exact::phi_exact;
use scanstat::fixedpoint::{a_of, a_xr};
use scanstat::series::{pn_polynomial, series_phi};
use scanstat::{ProcessParams, ReducedParams};

fn pp(lambda: f64, s: f64, t: f64) -> ProcessParams {
    ProcessParams::new(lambda, s, t).unwrap()
}

/// `value` rounds to `reference` at one significant figure, with the same sign.
fn one_figure(value: f64, reference: f64) -> bool {
    let unit = 10f64.powi(reference.abs().log10().floor() as i32);
    (value - reference).abs() <= 0.5 * unit && value.signum() == reference.signum()
}

fn d(x: f64, r: f64) -> f64 {
    a_xr(&ReducedParams::new(x, r).unwrap()).unwrap() - a_of(x).unwrap()
}

#[test]
fn polynomial_table() {
    let rows: [&[u64]; 8] = [
        &[1],
        &[0, 1],
        &[1, 3, 1],
        &[8, 19, 9, 1],
        &[81, 175, 97, 18, 1],
        &[1024, 2101, 1275, 305, 30, 1],
        &[15625, 31031, 19981, 5590, 740, 45, 1],
        &[279936, 543607, 365001, 113701, 18200, 1526, 63, 1],
    ];
    for (n, row) in rows.iter().enumerate() {
        let expected: Vec<BigUint> = row.iter().map(|&c| BigUint::from(c)).collect();
        assert_eq!(
            pn_polynomial(n).unwrap().coefficients(),
            expected.as_slice(),
            "n = {n}"
        );
    }
}

#[test]
fn finite_horizon_ratio_table() {
    for &(x, r, reference) in &RATIO_DIFFERENCES {
        let v = d(x, r);
        assert!(
            one_figure(v, reference),
            "x={x} r={r}: {v:e} vs {reference:e}"
        );
    }
}

#[test]
fn series_gap_small_window() {
    let p = pp(1.0, 1e-4, 1e4);
    let star = phi_star(&p).unwrap().value;
    for (i, &reference) in SERIES_GAP_ROW.iter().enumerate() {
        let v = star - series_phi(&p, 6 + i).unwrap().value;
        assert!(
            one_figure(v, reference),
            "N={}: {v:e} vs {reference:e}",
            6 + i
        );
    }
}

#[test]
fn series_gap_large_rate() {
    for (lambda, row) in &SERIES_GAP_LARGE_RATE {
        let p = pp(*lambda, 1e-5, 1.0);
        let star = phi_star(&p).unwrap().value;
        for (i, &reference) in row.iter().enumerate() {
            let v = star - series_phi(&p, 3 + i).unwrap().value;
            assert!(
                one_figure(v, reference),
                "lambda={lambda} N={}: {v:e}",
                3 + i
            );
        }
    }
}

#[test]
fn ratio_difference_curve_r3() {
    // points read off the plotted D_3 curve (one pixel is about 2.8e-5)
    let digitised = [
        (1.0, -0.00020),
        (2.0, -0.00080),
        (3.0, -0.00085),
        (4.0, 0.00023),
        (5.0, 0.00250),
        (6.0, 0.00594),
        (7.0, 0.01037),
    ];
    for (x, y) in digitised {
        assert!((d(x, 3.0) - y).abs() < 6e-5, "x={x}: {}", d(x, 3.0));
    }
    let d1 = [
        (1.0, 0.00915),
        (2.0, 0.01270),
        (3.0, 0.00597),
        (4.0, -0.00821),
    ];
    for (x, y) in d1 {
        assert!((d(x, 1.0) - y).abs() < 6e-5, "x={x}: {}", d(x, 1.0));
    }
    let d4 = [(3.0, -0.00071), (6.0, -0.00372), (10.0, -0.00622)];
    for (x, y) in d4 {
        assert!((d(x, 4.0) - y).abs() < 6e-5, "x={x}: {}", d(x, 4.0));
    }
}

#[test]
fn approximation_error_envelope() {
    let max_gap = |a: f64, b: f64| {
        (0..=200)
            .map(|i| {
                let t = a + (b - a) * i as f64 / 200.0;
                let p = pp(1.0, 1.0, t);
                (phi_star(&p).unwrap().value - phi_exact(&p, None).unwrap().value).abs()
            })
            .fold(0.0f64, f64::max)
    };
    assert!(max_gap(3.0, 5.0) <= 5e-5);
    assert!(max_gap(1.0, 3.0) <= 6e-3);
}
