//! Command-line front end: `compute`, `sweep`, `verify` and `simulate`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 numerical failure (including an out-of-domain fixed-point value).

mod grid;
mod quantity;
mod record;
mod verify;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use grid::{parse_grid, parse_order_grid};
pub use quantity::{EvalError, MethodChoice, Point, Quantity, AUTO_STAR_TERMS, DEFAULT_WINDOW_A};
pub use record::{format_number, read_csv, OutputRecord, RecordWriter, CSV_HEADER};
pub use verify::{
    golden_tables, run_suite, Check, Suite, RATIO_DIFFERENCES, SERIES_GAP_LARGE_RATE,
    SERIES_GAP_ROW,
};

use crate::error::Error;
use crate::oracle::{mc_phi, mc_phi2, mc_tau, mc_tau2, SimConfig};
use crate::params::ProcessParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "scanstat",
    version,
    about = "Poisson close-pair probabilities and their approximations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one quantity at one parameter point.
    Compute(ComputeArgs),
    /// Evaluate a quantity over a grid of one parameter, as CSV.
    Sweep(SweepArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Monte Carlo estimate of a probability or waiting-time mean.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit JSON lines instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, value_enum, default_value = "phi")]
    pub quantity: Quantity,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Reduced rate `x = lambda s`.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Reduced horizon `r = t / s`.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Series order.
    #[arg(long = "N")]
    pub order: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub window_a: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodChoice,
    /// Laplace variable.
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "phi")]
    pub quantity: Quantity,
    /// Grids: a single value, `a:b:n` or `log:a:b:n`.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<String>,
    /// Series order or inclusive range `a:b`.
    #[arg(long = "N")]
    pub order: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub window_a: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodChoice,
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    /// Emit `first - second` for two quantities, e.g. `phi-star:phi`.
    #[arg(long)]
    pub diff: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimQuantity {
    Phi,
    Phi2,
    /// Mean of the wait from the first event to the first close pair.
    Tau2,
    /// Mean of the wait from time 0 to the first close pair.
    Tau,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "phi")]
    pub quantity: SimQuantity,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Io(io::Error),
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Usage(m) => Failure::Usage(m),
            EvalError::Lib(e) => e.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(
    output: &OutputArgs,
    records: impl IntoIterator<Item = OutputRecord>,
) -> Result<(), Failure> {
    let mut w = RecordWriter::new(sink(&output.out)?, output.json)?;
    for rec in records {
        w.write(&rec)?;
    }
    Ok(w.finish()?)
}

fn compute(args: &ComputeArgs) -> Result<i32, Failure> {
    let point = Point {
        lambda: args.lambda,
        s: args.s,
        t: args.t,
        x: args.x,
        r: args.r,
        order: args.order,
        u: args.u,
        window_a: args.window_a,
        method: args.method,
    };
    let ev = point.evaluate(args.quantity)?;
    if let Some(w) = &ev.warning {
        eprintln!("warning: {w}");
    }
    let rec = OutputRecord::from_estimate(args.quantity.name(), ev.coords, &ev.estimate);
    emit(&args.output, [rec])?;
    if ev.estimate.is_out_of_domain() {
        eprintln!(
            "error: fixed-point value {} exceeds 1; t is too small relative to s",
            ev.estimate.value
        );
        return Ok(EXIT_NUMERICAL);
    }
    Ok(EXIT_OK)
}

struct SweepGrid {
    points: Vec<Point>,
}

fn sweep_grid(args: &SweepArgs) -> Result<SweepGrid, Failure> {
    let parse = |g: &Option<String>| -> Result<Option<Vec<f64>>, Failure> {
        g.as_deref()
            .map(parse_grid)
            .transpose()
            .map_err(Failure::Usage)
    };
    let lambda = parse(&args.lambda)?;
    let s = parse(&args.s)?;
    let t = parse(&args.t)?;
    let x = parse(&args.x)?;
    let r = parse(&args.r)?;
    let order = args
        .order
        .as_deref()
        .map(parse_order_grid)
        .transpose()
        .map_err(Failure::Usage)?;
    let lens = [
        lambda.as_ref().map(Vec::len),
        s.as_ref().map(Vec::len),
        t.as_ref().map(Vec::len),
        x.as_ref().map(Vec::len),
        r.as_ref().map(Vec::len),
        order.as_ref().map(Vec::len),
    ];
    let multi: Vec<usize> = lens.iter().flatten().copied().filter(|&n| n > 1).collect();
    if multi.len() > 1 {
        return Err(Failure::Usage(
            "only one parameter may be swept at a time".into(),
        ));
    }
    let n = multi.first().copied().unwrap_or(1);
    let pick =
        |v: &Option<Vec<f64>>, i: usize| v.as_ref().map(|g| if g.len() == 1 { g[0] } else { g[i] });
    let points = (0..n)
        .map(|i| Point {
            lambda: pick(&lambda, i),
            s: pick(&s, i),
            t: pick(&t, i),
            x: pick(&x, i),
            r: pick(&r, i),
            order: order
                .as_ref()
                .map(|g| if g.len() == 1 { g[0] } else { g[i] }),
            u: args.u,
            window_a: args.window_a,
            method: args.method,
        })
        .collect();
    Ok(SweepGrid { points })
}

fn point_coords(p: &Point) -> (f64, f64, f64) {
    match (p.lambda, p.s, p.x) {
        (_, _, Some(x)) => (x, 1.0, p.r.unwrap_or(f64::NAN)),
        (l, s, None) => (
            l.unwrap_or(f64::NAN),
            s.unwrap_or(f64::NAN),
            p.t.or_else(|| Some(p.r? * s?)).unwrap_or(f64::NAN),
        ),
    }
}

fn error_record(name: &str, p: &Point, method: &str, err: &EvalError) -> OutputRecord {
    let mut rec = OutputRecord {
        quantity: name.to_string(),
        lambda: f64::NAN,
        s: f64::NAN,
        t: f64::NAN,
        method: method.to_string(),
        value: f64::NAN,
        err: None,
        diag: String::new(),
    };
    (rec.lambda, rec.s, rec.t) = point_coords(p);
    rec.push_diag(&format!("error={err}"));
    rec
}

fn sweep_record(q: Quantity, p: &Point) -> OutputRecord {
    match p.evaluate(q) {
        Ok(ev) => {
            let mut rec = OutputRecord::from_estimate(q.name(), ev.coords, &ev.estimate);
            if let Some(n) = p.order {
                if !rec.diag.contains("N=") {
                    rec.push_diag(&format!("N={n}"));
                }
            }
            rec
        }
        Err(e) => {
            let method = p
                .method
                .to_possible_value()
                .map(|v| v.get_name().to_string());
            error_record(q.name(), p, method.as_deref().unwrap_or(""), &e)
        }
    }
}

fn diff_record(a: Quantity, b: Quantity, p: &Point) -> OutputRecord {
    let name = format!("{}:{}", a.name(), b.name());
    match (p.evaluate(a), p.evaluate(b)) {
        (Ok(x), Ok(y)) => {
            let err = match (x.estimate.error_bound, y.estimate.error_bound) {
                (None, None) => None,
                (e1, e2) => Some(e1.unwrap_or(0.0) + e2.unwrap_or(0.0)),
            };
            let mut rec = OutputRecord::from_estimate(&name, x.coords, &x.estimate);
            rec.method = "diff".into();
            rec.value = x.estimate.value - y.estimate.value;
            rec.err = err;
            rec.diag = format!(
                "first={};second={}",
                format_number(x.estimate.value),
                format_number(y.estimate.value)
            );
            rec
        }
        (Err(e), _) | (_, Err(e)) => error_record(&name, p, "diff", &e),
    }
}

fn sweep(args: &SweepArgs) -> Result<i32, Failure> {
    let grid = sweep_grid(args)?;
    let records: Vec<OutputRecord> = match &args.diff {
        Some(text) => {
            let (a, b) = text.split_once(':').ok_or_else(|| {
                Failure::Usage(format!("--diff expects first:second, got '{text}'"))
            })?;
            let a = Quantity::parse(a).map_err(Failure::Usage)?;
            let b = Quantity::parse(b).map_err(Failure::Usage)?;
            grid.points.iter().map(|p| diff_record(a, b, p)).collect()
        }
        None => grid
            .points
            .iter()
            .map(|p| sweep_record(args.quantity, p))
            .collect(),
    };
    emit(&args.output, records)?;
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs) -> Result<i32, Failure> {
    let checks = run_suite(args.suite, args.seed, args.samples);
    let mut out = io::stdout().lock();
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    writeln!(out, "{} checks, {} failed", checks.len(), failed)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}

fn simulate(args: &SimulateArgs) -> Result<i32, Failure> {
    let cfg = SimConfig::new(args.seed, args.samples);
    let (name, t, est) = match args.quantity {
        SimQuantity::Phi | SimQuantity::Phi2 => {
            let t = args
                .t
                .ok_or_else(|| Failure::Usage("simulate phi/phi2 needs --t".into()))?;
            let p = ProcessParams::new(args.lambda, args.s, t)?;
            if args.quantity == SimQuantity::Phi {
                ("phi", t, mc_phi(&p, &cfg)?)
            } else {
                ("phi2", t, mc_phi2(&p, &cfg)?)
            }
        }
        SimQuantity::Tau2 => ("tau2-mean", f64::NAN, mc_tau2(args.lambda, args.s, &cfg)?),
        SimQuantity::Tau => ("tau-mean", f64::NAN, mc_tau(args.lambda, args.s, &cfg)?),
    };
    let mut rec = OutputRecord::from_estimate(name, (args.lambda, args.s, t), &est.to_estimate());
    rec.push_diag(&format!("seed={}", est.seed));
    emit(&args.output, [rec])?;
    Ok(EXIT_OK)
}

/// Runs the command line in `args` (including the program name) and returns
/// the process exit code.
pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            EXIT_NUMERICAL
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os())
}
