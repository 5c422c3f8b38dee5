use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method};
use crate::numeric::NeumaierSum;
use crate::params::ProcessParams;

pub const MIN_SAMPLES: u64 = 100;

/// Seed and size of a simulation.
///
/// Samples are drawn in chunks of `chunk_size`; chunk `i` uses ChaCha8 seeded
/// from `seed` on stream `i`. Chunk results are merged in index order, so the
/// estimate does not depend on how many threads ran the chunks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub samples: u64,
    pub chunk_size: u64,
}

impl SimConfig {
    pub const DEFAULT_CHUNK: u64 = 1 << 16;

    pub fn new(seed: u64, samples: u64) -> Self {
        SimConfig {
            seed,
            samples,
            chunk_size: Self::DEFAULT_CHUNK,
        }
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Self {
        self.chunk_size = chunk_size;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter {
                name: "samples",
                value: self.samples as f64,
                reason: "at least 100 samples are required",
            });
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidParameter {
                name: "chunk_size",
                value: 0.0,
                reason: "must be positive",
            });
        }
        Ok(())
    }

    fn chunks(&self) -> impl IndexedParallelIterator<Item = (ChaCha8Rng, u64)> + '_ {
        let n_chunks = self.samples.div_ceil(self.chunk_size) as usize;
        (0..n_chunks).into_par_iter().map(move |c| {
            let c = c as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(c);
            let len = self.chunk_size.min(self.samples - c * self.chunk_size);
            (rng, len)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    fn bernoulli(successes: u64, cfg: &SimConfig) -> Self {
        let n = cfg.samples as f64;
        let p = successes as f64 / n;
        McEstimate {
            estimate: p,
            stderr: (p * (1.0 - p) / n).sqrt(),
            samples: cfg.samples,
            seed: cfg.seed,
        }
    }

    pub fn to_estimate(&self) -> Estimate {
        Estimate::new(self.estimate, Method::MonteCarlo)
            .with_bound(self.stderr)
            .with_diag("samples", self.samples as f64)
            .with_diag("stderr", self.stderr)
    }
}

/// Mean, variance and fourth central moment of a simulated sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMoments {
    pub n: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub central_m4: f64,
}

impl SampleMoments {
    pub fn stderr_mean(&self) -> f64 {
        (self.variance / self.n as f64).sqrt()
    }

    /// Large-sample standard error of the sample variance.
    pub fn stderr_variance(&self) -> f64 {
        ((self.central_m4 - self.variance * self.variance).max(0.0) / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct PowerSums {
    n: u64,
    sums: [NeumaierSum; 4],
}

impl PowerSums {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let mut p = x;
        for s in &mut self.sums {
            s.add(p);
            p *= x;
        }
    }

    fn merge(mut self, other: &PowerSums) -> Self {
        self.n += other.n;
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.add(b.value());
        }
        self
    }

    fn moments(&self) -> SampleMoments {
        let n = self.n as f64;
        let [e1, e2, e3, e4] = self.sums.map(|s| s.value() / n);
        let m2 = e2 - e1 * e1;
        let m4 = e4 - 4.0 * e1 * e3 + 6.0 * e1 * e1 * e2 - 3.0 * e1.powi(4);
        SampleMoments {
            n: self.n,
            mean: e1,
            variance: m2 * n / (n - 1.0),
            central_m4: m4,
        }
    }
}

fn exponential<R: Rng>(rng: &mut R, lambda: f64) -> f64 {
    let u: f64 = rng.random();
    -(-u).ln_1p() / lambda
}

fn count_successes<F>(cfg: &SimConfig, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    cfg.chunks()
        .map(|(mut rng, len)| (0..len).filter(|_| trial(&mut rng)).count() as u64)
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

fn sample_moments<F>(cfg: &SimConfig, draw: F) -> SampleMoments
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    cfg.chunks()
        .map(|(mut rng, len)| {
            let mut acc = PowerSums::default();
            for _ in 0..len {
                acc.push(draw(&mut rng));
            }
            acc
        })
        .collect::<Vec<_>>()
        .iter()
        .fold(PowerSums::default(), PowerSums::merge)
        .moments()
}

/// One path on `[0, t]`: true iff no two consecutive events are closer than `s`.
/// With `first_gap` the first event must also come after time `s`.
fn no_close_pair<R: Rng>(rng: &mut R, p: &ProcessParams, first_gap: bool) -> bool {
    let (lambda, s, t) = (p.lambda(), p.s(), p.t());
    let mut now = exponential(rng, lambda);
    if now > t {
        return true;
    }
    if first_gap && now < s {
        return false;
    }
    loop {
        let gap = exponential(rng, lambda);
        now += gap;
        if now > t {
            return true;
        }
        if gap < s {
            return false;
        }
    }
}

pub fn mc_phi(params: &ProcessParams, cfg: &SimConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let hits = count_successes(cfg, |rng| no_close_pair(rng, params, false));
    Ok(McEstimate::bernoulli(hits, cfg))
}

/// Simulated `phi2`: no event in `[0, s]` and no close pair afterwards.
pub fn mc_phi2(params: &ProcessParams, cfg: &SimConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let hits = count_successes(cfg, |rng| no_close_pair(rng, params, true));
    Ok(McEstimate::bernoulli(hits, cfg))
}

/// Two ways of drawing `tau2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tau2Route {
    /// Sum inter-arrival times up to and including the first one below `s`.
    Direct,
    /// `sum_{i<Y} (s + xi_i) + zeta` with `Y` geometric and `zeta` exponential
    /// truncated to `(0, s)`.
    Decomposed,
}

fn draw_tau2<R: Rng>(rng: &mut R, lambda: f64, s: f64, route: Tau2Route) -> f64 {
    match route {
        Tau2Route::Direct => {
            let mut total = 0.0;
            loop {
                let gap = exponential(rng, lambda);
                total += gap;
                if gap < s {
                    return total;
                }
            }
        }
        Tau2Route::Decomposed => {
            let long_gaps = (exponential(rng, 1.0) / (lambda * s)).floor() as u64;
            let mut total = 0.0;
            for _ in 0..long_gaps {
                total += s + exponential(rng, lambda);
            }
            let q = -(-lambda * s).exp_m1();
            let u: f64 = rng.random();
            total - (-u * q).ln_1p() / lambda
        }
    }
}

fn check_rate_window(lambda: f64, s: f64) -> Result<()> {
    ProcessParams::new(lambda, s, 0.0).map(|_| ())
}

pub fn mc_tau2_moments(
    lambda: f64,
    s: f64,
    cfg: &SimConfig,
    route: Tau2Route,
) -> Result<SampleMoments> {
    check_rate_window(lambda, s)?;
    cfg.validate()?;
    Ok(sample_moments(cfg, |rng| draw_tau2(rng, lambda, s, route)))
}

/// Simulated mean of `tau2`.
pub fn mc_tau2(lambda: f64, s: f64, cfg: &SimConfig) -> Result<McEstimate> {
    let m = mc_tau2_moments(lambda, s, cfg, Tau2Route::Direct)?;
    Ok(McEstimate {
        estimate: m.mean,
        stderr: m.stderr_mean(),
        samples: m.n,
        seed: cfg.seed,
    })
}

/// Simulated mean of `tau`, the wait from time 0 until the second event of the
/// first close pair.
pub fn mc_tau(lambda: f64, s: f64, cfg: &SimConfig) -> Result<McEstimate> {
    check_rate_window(lambda, s)?;
    cfg.validate()?;
    let m = sample_moments(cfg, |rng| {
        exponential(rng, lambda) + draw_tau2(rng, lambda, s, Tau2Route::Direct)
    });
    Ok(McEstimate {
        estimate: m.mean,
        stderr: m.stderr_mean(),
        samples: m.n,
        seed: cfg.seed,
    })
}

/// Raw `tau2` draws, in chunk order.
pub fn tau2_samples(lambda: f64, s: f64, cfg: &SimConfig, route: Tau2Route) -> Result<Vec<f64>> {
    check_rate_window(lambda, s)?;
    cfg.validate()?;
    let chunks: Vec<Vec<f64>> = cfg
        .chunks()
        .map(|(mut rng, len)| {
            (0..len)
                .map(|_| draw_tau2(&mut rng, lambda, s, route))
                .collect()
        })
        .collect();
    Ok(chunks.concat())
}

/// Probability that `gaps.len() + 1` uniform points on `[0, t]`, once sorted,
/// have successive gaps exceeding `gaps`.
pub fn mc_spacing(t: f64, gaps: &[f64], cfg: &SimConfig) -> Result<McEstimate> {
    cfg.validate()?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be finite and > 0",
        });
    }
    let n = gaps.len() + 1;
    let hits = count_successes(cfg, |rng| {
        let mut pts: Vec<f64> = (0..n).map(|_| t * rng.random::<f64>()).collect();
        pts.sort_by(f64::total_cmp);
        pts.windows(2).zip(gaps).all(|(w, &g)| w[1] - w[0] > g)
    });
    Ok(McEstimate::bernoulli(hits, cfg))
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.par_sort_unstable_by(f64::total_cmp);
    b.par_sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample KS statistic at level `alpha`.
pub fn ks_critical_value(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    let (n, m) = (n as f64, m as f64);
    c * ((n + m) / (n * m)).sqrt()
}
