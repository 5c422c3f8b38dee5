use clap::ValueEnum;

use crate::approx::{laplace_phi_closed, phi2_star, phi_star, tau_cdf_approx};
use crate::error::Error;
use crate::estimate::{Estimate, Method};
use crate::exact::{make_window, phi2_exact, phi_exact, phi_exact_full, term_count};
use crate::fixedpoint::{a_of, a_xr, solve_b, u_c};
use crate::oracle::laplace_phi_quadrature;
use crate::params::{ProcessParams, ReducedParams};
use crate::series::series_phi;
use crate::waiting_time::{tau2_moments, tau_cdf_exact, tau_moments};

/// Above this many terms `--method auto` falls back to the approximation.
pub const AUTO_STAR_TERMS: u64 = 100_000_000;
pub const DEFAULT_WINDOW_A: f64 = 8.0;
const LAPLACE_TAIL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    #[value(name = "phi")]
    Phi,
    #[value(name = "phi2")]
    Phi2,
    #[value(name = "phi-star")]
    PhiStar,
    #[value(name = "phi2-star")]
    Phi2Star,
    #[value(name = "series")]
    Series,
    #[value(name = "series-gap")]
    SeriesGap,
    #[value(name = "tau-cdf")]
    TauCdf,
    #[value(name = "tau2-mean")]
    Tau2Mean,
    #[value(name = "tau2-var")]
    Tau2Var,
    #[value(name = "tau-mean")]
    TauMean,
    #[value(name = "tau-var")]
    TauVar,
    #[value(name = "Ax")]
    Ax,
    #[value(name = "Axr")]
    Axr,
    #[value(name = "B")]
    B,
    #[value(name = "uc")]
    Uc,
    #[value(name = "laplace")]
    Laplace,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Phi => "phi",
            Quantity::Phi2 => "phi2",
            Quantity::PhiStar => "phi-star",
            Quantity::Phi2Star => "phi2-star",
            Quantity::Series => "series",
            Quantity::SeriesGap => "series-gap",
            Quantity::TauCdf => "tau-cdf",
            Quantity::Tau2Mean => "tau2-mean",
            Quantity::Tau2Var => "tau2-var",
            Quantity::TauMean => "tau-mean",
            Quantity::TauVar => "tau-var",
            Quantity::Ax => "Ax",
            Quantity::Axr => "Axr",
            Quantity::B => "B",
            Quantity::Uc => "uc",
            Quantity::Laplace => "laplace",
        }
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }

    fn needs_t(self) -> bool {
        matches!(
            self,
            Quantity::Phi
                | Quantity::Phi2
                | Quantity::PhiStar
                | Quantity::Phi2Star
                | Quantity::Series
                | Quantity::SeriesGap
                | Quantity::TauCdf
                | Quantity::Axr
        )
    }

    fn rate_only(self) -> bool {
        matches!(self, Quantity::Ax | Quantity::B)
    }
}

/// How `phi` (and the quantities built from it) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum MethodChoice {
    #[default]
    #[value(name = "auto")]
    Auto,
    #[value(name = "exact-full")]
    ExactFull,
    #[value(name = "exact-window")]
    ExactWindow,
    #[value(name = "star")]
    Star,
    #[value(name = "series")]
    Series,
    #[value(name = "quadrature")]
    Quadrature,
}

/// Inputs at one evaluation point. Either `lambda` and `s` (and `t`) or the
/// reduced coordinates `x = lambda s` and `r = t / s` must be given.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Point {
    pub lambda: Option<f64>,
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub x: Option<f64>,
    pub r: Option<f64>,
    pub order: Option<usize>,
    pub u: Option<f64>,
    pub window_a: Option<f64>,
    pub method: MethodChoice,
}

#[derive(Debug)]
pub enum EvalError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for EvalError {
    fn from(e: Error) -> Self {
        EvalError::Lib(e)
    }
}

impl std::fmt::Display for EvalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalError::Usage(m) => f.write_str(m),
            EvalError::Lib(e) => write!(f, "{e}"),
        }
    }
}

/// A computed value plus the process coordinates it refers to.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub estimate: Estimate,
    pub coords: (f64, f64, f64),
    pub warning: Option<String>,
}

fn usage(msg: impl Into<String>) -> EvalError {
    EvalError::Usage(msg.into())
}

impl Point {
    fn params(&self, q: Quantity) -> Result<ProcessParams, EvalError> {
        let p = match (self.lambda, self.s, self.x) {
            (Some(lambda), Some(s), None) => {
                let t = match (self.t, self.r) {
                    (Some(t), None) => t,
                    (None, Some(r)) => r * s,
                    (None, None) if !q.needs_t() => 0.0,
                    (None, None) => return Err(usage(format!("{} needs --t", q.name()))),
                    (Some(_), Some(_)) => return Err(usage("give only one of --t and --r")),
                };
                ProcessParams::new(lambda, s, t)?
            }
            (None, None, Some(x)) if self.t.is_none() => {
                let r = match self.r {
                    Some(r) => r,
                    None if !q.needs_t() => 0.0,
                    None => return Err(usage(format!("{} needs --r with --x", q.name()))),
                };
                ReducedParams::new(x, r)?.to_params()
            }
            (Some(_), None, None) if q.rate_only() => {
                return Err(usage(format!(
                    "{} needs --s with --lambda, or --x",
                    q.name()
                )));
            }
            _ => {
                return Err(usage(
                    "give --lambda and --s (with --t), or --x (with --r), but not both",
                ));
            }
        };
        Ok(p)
    }

    fn order(&self) -> Result<usize, EvalError> {
        self.order
            .ok_or_else(|| usage("series quantities need --N"))
    }

    fn phi(&self, p: &ProcessParams) -> Result<(Estimate, Option<String>), EvalError> {
        let est = match self.method {
            MethodChoice::Auto => {
                let k = term_count(p);
                if k > AUTO_STAR_TERMS {
                    let warning = format!(
                        "{k} terms exceed {AUTO_STAR_TERMS}; using the fixed-point approximation"
                    );
                    return Ok((phi_star(p)?, Some(warning)));
                }
                phi_exact(p, None)?
            }
            MethodChoice::ExactFull => phi_exact_full(p)?,
            MethodChoice::ExactWindow => {
                let w = make_window(p, self.window_a.unwrap_or(DEFAULT_WINDOW_A))?;
                phi_exact(p, Some(&w))?
            }
            MethodChoice::Star => phi_star(p)?,
            MethodChoice::Series => series_phi(p, self.order()?)?,
            MethodChoice::Quadrature => {
                return Err(usage("--method quadrature applies to --quantity laplace"));
            }
        };
        Ok((est, None))
    }

    pub fn evaluate(&self, q: Quantity) -> Result<Evaluated, EvalError> {
        let p = self.params(q)?;
        let coords = (p.lambda(), p.s(), p.t());
        let plain = |v: f64, m: Method| Estimate::new(v, m);
        let mut warning = None;
        let estimate = match q {
            Quantity::Phi => {
                let (est, w) = self.phi(&p)?;
                warning = w;
                est
            }
            Quantity::Phi2 => match self.method {
                MethodChoice::Star => phi2_star(&p)?,
                MethodChoice::Auto | MethodChoice::ExactFull => phi2_exact(&p)?,
                _ => return Err(usage("phi2 supports --method auto|exact-full|star")),
            },
            Quantity::PhiStar => phi_star(&p)?,
            Quantity::Phi2Star => phi2_star(&p)?,
            Quantity::Series => series_phi(&p, self.order()?)?,
            Quantity::SeriesGap => {
                let n = self.order()?;
                let star = phi_star(&p)?;
                let series = series_phi(&p, n)?;
                plain(star.value - series.value, Method::Series).with_diag("N", n as f64)
            }
            Quantity::TauCdf => match self.method {
                MethodChoice::Star => plain(tau_cdf_approx(&p)?, Method::Star),
                MethodChoice::Auto | MethodChoice::ExactFull => {
                    plain(tau_cdf_exact(&p)?, Method::ExactFull)
                }
                _ => return Err(usage("tau-cdf supports --method auto|exact-full|star")),
            },
            Quantity::Tau2Mean => plain(tau2_moments(p.lambda(), p.s()).mean, Method::ExactFull),
            Quantity::Tau2Var => plain(tau2_moments(p.lambda(), p.s()).variance, Method::ExactFull),
            Quantity::TauMean => plain(tau_moments(p.lambda(), p.s()).mean, Method::ExactFull),
            Quantity::TauVar => plain(tau_moments(p.lambda(), p.s()).variance, Method::ExactFull),
            Quantity::Ax => plain(a_of(p.lambda_s())?, Method::Star),
            Quantity::Axr => {
                let reduced = ReducedParams::new(p.lambda_s(), p.t() / p.s())?;
                plain(a_xr(&reduced)?, Method::ExactFull)
            }
            Quantity::B => {
                let sol = solve_b(p.lambda_s())?;
                plain(sol.b, Method::Star)
                    .with_diag("residual", sol.residual)
                    .with_diag("iterations", sol.iterations as f64)
            }
            Quantity::Uc => plain(u_c(&p)?, Method::Star),
            Quantity::Laplace => {
                let u = self.u.ok_or_else(|| usage("laplace needs --u"))?;
                match self.method {
                    MethodChoice::Quadrature => laplace_phi_quadrature(u, &p, LAPLACE_TAIL_TOL)?,
                    MethodChoice::Auto => plain(laplace_phi_closed(u, &p)?, Method::ExactFull),
                    _ => return Err(usage("laplace supports --method auto|quadrature")),
                }
                .with_diag("u", u)
            }
        };
        Ok(Evaluated {
            estimate,
            coords,
            warning,
        })
    }
}
