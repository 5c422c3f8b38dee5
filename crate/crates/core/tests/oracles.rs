use std::f64::consts::LN_2;

use scanstat::approx::laplace_phi_closed;
use scanstat::exact::{phi2_exact, phi_exact_full, spacing_probability};
use scanstat::oracle::{
    ks_critical_value, ks_two_sample, laplace_phi_quadrature, mc_phi, mc_phi2, mc_spacing, mc_tau2,
    mc_tau2_moments, renewal_phi, tau2_samples, SimConfig, Tau2Route,
};
use scanstat::ProcessParams;

fn pp(lambda: f64, s: f64, t: f64) -> ProcessParams {
    ProcessParams::new(lambda, s, t).unwrap()
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
}

#[test]
fn monte_carlo_is_bitwise_identical_across_thread_counts() {
    let cfg = SimConfig::new(2024, 300_000).with_chunk_size(10_000);
    let p = pp(1.0, 1.0, 3.5);
    let reference = (
        mc_phi(&p, &cfg).unwrap(),
        mc_phi2(&p, &cfg).unwrap(),
        mc_tau2_moments(1.0, LN_2, &cfg, Tau2Route::Decomposed).unwrap(),
        tau2_samples(1.0, LN_2, &cfg, Tau2Route::Direct).unwrap(),
    );
    for threads in [1, 2, 8] {
        let got = pool(threads).install(|| {
            (
                mc_phi(&p, &cfg).unwrap(),
                mc_phi2(&p, &cfg).unwrap(),
                mc_tau2_moments(1.0, LN_2, &cfg, Tau2Route::Decomposed).unwrap(),
                tau2_samples(1.0, LN_2, &cfg, Tau2Route::Direct).unwrap(),
            )
        });
        assert_eq!(got.0.estimate.to_bits(), reference.0.estimate.to_bits());
        assert_eq!(got.1.estimate.to_bits(), reference.1.estimate.to_bits());
        assert_eq!(got.2.mean.to_bits(), reference.2.mean.to_bits());
        assert_eq!(got.2.variance.to_bits(), reference.2.variance.to_bits());
        assert!(got
            .3
            .iter()
            .zip(&reference.3)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

#[test]
fn oracle_triangle() {
    let cfg = SimConfig::new(42, 1_000_000);
    for t in [2.0, 3.5, 5.0] {
        let p = pp(1.0, 1.0, t);
        let exact = phi_exact_full(&p).unwrap().value;
        let renewal = renewal_phi(&p, 1.0 / 128.0).unwrap().value;
        let mc = mc_phi(&p, &cfg).unwrap();
        let tol = (4.0 * mc.stderr).max(1e-4);
        assert!((exact - renewal).abs() < 1e-4, "t={t}");
        assert!((exact - mc.estimate).abs() < tol, "t={t}");
        assert!((renewal - mc.estimate).abs() < tol, "t={t}");
        assert!(mc.stderr <= 0.5 / (cfg.samples as f64).sqrt());
    }
}

#[test]
fn simulated_phi2() {
    let cfg = SimConfig::new(8, 1_000_000);
    let p = pp(0.2, 1.0, 21.0);
    let mc = mc_phi2(&p, &cfg).unwrap();
    let exact = phi2_exact(&p).unwrap().value;
    assert!((mc.estimate - exact).abs() < 4.0 * mc.stderr);
}

#[test]
fn tau2_routes_agree() {
    let (lambda, s) = (1.0, LN_2);
    let cfg_a = SimConfig::new(1, 1_000_000);
    let cfg_b = SimConfig::new(2, 1_000_000);
    let a = mc_tau2_moments(lambda, s, &cfg_a, Tau2Route::Direct).unwrap();
    let b = mc_tau2_moments(lambda, s, &cfg_b, Tau2Route::Decomposed).unwrap();
    assert!((a.mean - b.mean).abs() < 4.0 * a.stderr_mean().hypot(b.stderr_mean()));
    assert!((a.variance - b.variance).abs() < 4.0 * a.stderr_variance().hypot(b.stderr_variance()));
    let xs = tau2_samples(lambda, s, &SimConfig::new(3, 200_000), Tau2Route::Direct).unwrap();
    let ys = tau2_samples(
        lambda,
        s,
        &SimConfig::new(4, 200_000),
        Tau2Route::Decomposed,
    )
    .unwrap();
    assert!(ks_two_sample(&xs, &ys) < ks_critical_value(xs.len(), ys.len(), 0.01));
    let mean = mc_tau2(1.0, 10.0, &cfg_a).unwrap();
    assert!((mean.estimate - 1.0 / (1.0 - (-10.0f64).exp())).abs() < 4.0 * mean.stderr);
}

#[test]
fn spacing_oracle() {
    let cfg = SimConfig::new(17, 1_000_000);
    let t = 2.0;
    let cases: [&[f64]; 3] = [&[0.5], &[0.2, 0.6], &[0.1, 0.3, 0.25]];
    for gaps in cases {
        let exact = spacing_probability(t, gaps, gaps.len() + 1).unwrap();
        let mc = mc_spacing(t, gaps, &cfg).unwrap();
        assert!((exact - mc.estimate).abs() < 4.0 * mc.stderr, "{gaps:?}");
    }
}

#[test]
fn renewal_reference_points() {
    let p = pp(1.0, 1.0, 2.0);
    assert!((renewal_phi(&p, 1.0 / 64.0).unwrap().value - 3.5 * (-2.0f64).exp()).abs() < 1e-4);
    let p = pp(0.2, 1.0, 20.0);
    assert!((renewal_phi(&p, 1.0 / 64.0).unwrap().value - 0.5439808).abs() < 1e-4);
}

#[test]
fn laplace_quadrature_examples() {
    let p = pp(1.0, 1.0, 0.0);
    let q = laplace_phi_quadrature(1.0, &p, 1e-10).unwrap().value;
    assert!((q - (0.5 + 0.5 / (2.0 - (-2.0f64).exp()))).abs() < 1e-6);
    let q10 = laplace_phi_quadrature(10.0, &p, 1e-10).unwrap().value;
    let expected = 1.0 / 11.0 + (1.0 / 11.0) / (11.0 - (-11.0f64).exp());
    assert!((q10 - expected).abs() < 1e-8);
    assert!((q10 - laplace_phi_closed(10.0, &p).unwrap()).abs() < 1e-8);
    let big = laplace_phi_quadrature(1e3, &p, 1e-12).unwrap().value;
    let bigger = laplace_phi_quadrature(2e3, &p, 1e-12).unwrap().value;
    let ratio = big / bigger;
    assert!((1.99..=2.01).contains(&ratio), "{ratio}");
}
