//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification or solver failure, 2 bad
//! input (arguments, body or config files, unknown suite), 3 a point or
//! direction outside the operation's domain, 4 unwritable output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;

use crate::body::io::read_body;
use crate::body::ConvexBody;
use crate::config::{Config, Solver};
use crate::ellipse::bstar;
use crate::error::Error;
use crate::extremal::{density_grid, total_mass};
use crate::svg::heatmap;
use crate::verify::{run_suite, to_tap, Suite};

pub const CONFIG_ENV: &str = "MABODY_CONFIG";

#[derive(Parser, Debug)]
#[command(name = "mabody", version, about = "Maximal inscribed ellipses and Monge-Ampère densities of convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Relative bisection tolerance for b*.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Halved resolutions.
    #[arg(long, global = true)]
    fast: bool,
    #[arg(long, global = true, value_parser = parse_solver)]
    solver: Option<Solver>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Largest inscribed ellipse through x with tangent direction y.
    Bstar {
        #[arg(long)]
        body: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[command(flatten)]
        common: Common,
    },
    /// Density λ on a grid, written as CSV and optionally as an SVG heatmap.
    Density {
        #[arg(long)]
        body: PathBuf,
        /// Nodes per axis.
        #[arg(long)]
        grid: Option<usize>,
        /// Gauge clearance kept from the boundary.
        #[arg(long)]
        margin: Option<f64>,
        /// CSV destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Total mass of λ over the body, compared with (2π)ⁿ.
    Mass {
        #[arg(long)]
        body: PathBuf,
        /// Integration nodes per coordinate.
        #[arg(long)]
        grid: Option<usize>,
        /// Comma-separated boundary margins for the extrapolation.
        #[arg(long)]
        margin: Option<String>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run an invariant suite: norms, oracles, foliation, bernstein, mass or all.
    Verify {
        suite: String,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_solver(s: &str) -> Result<Solver, String> {
    match s {
        "exact" => Ok(Solver::Exact),
        "bisection" => Ok(Solver::Bisection),
        _ => Err(format!("unknown solver '{s}' (expected exact or bisection)")),
    }
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::XNotInterior { .. } | Error::ZeroDirection | Error::NotSymmetric | Error::NotOriginCentered => 3,
            Error::Solver(_) | Error::DegenerateProfile | Error::EllipseNotContained(_) | Error::PAtUnitValue => 1,
            _ => 2,
        };
        Self::new(code, format!("error: {e}"))
    }
}

fn parse_point(text: &str, flag: &str) -> Result<DVector<f64>, Failure> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if !v.is_empty() && v.iter().all(|c| c.is_finite()) => Ok(DVector::from_vec(v)),
        _ => Err(Failure::new(2, format!("error: --{flag} expects comma-separated numbers, got '{text}'"))),
    }
}

fn load_body(path: &Path) -> Result<ConvexBody, Failure> {
    let body = read_body(path).map_err(|e| Failure::new(2, format!("error: cannot load body {}: {e}", path.display())))?;
    if body.name().is_some() {
        Ok(body)
    } else {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "body".into());
        Ok(body.with_name(stem))
    }
}

fn base_config(common: &Common) -> Result<Config, Failure> {
    let mut cfg = match std::env::var_os(CONFIG_ENV) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Failure::new(2, format!("error: cannot read {CONFIG_ENV}={}: {e}", Path::new(&path).display()))
            })?;
            Config::from_json(&text).map_err(|e| Failure::new(2, format!("error: {CONFIG_ENV}: {e}")))?
        }
        None => Config::default(),
    };
    if common.fast {
        cfg = cfg.fast();
    }
    if let Some(t) = common.tol {
        cfg.bisection_tol = t;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.threads {
        cfg.threads = Some(t);
    }
    if let Some(s) = common.solver {
        cfg.solver = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::new(4, format!("error: cannot write {}: {e}", path.display())))
}

fn fmt_vec(v: &DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let common = match &cli.command {
        Command::Bstar { common, .. }
        | Command::Density { common, .. }
        | Command::Mass { common, .. }
        | Command::Verify { common, .. } => common.clone(),
    };
    let mut cfg = base_config(&common)?;
    if let Some(t) = cfg.threads {
        // Fails only when a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let io = |e: std::io::Error| Failure::new(4, format!("error: cannot write output: {e}"));

    match cli.command {
        Command::Bstar { body, x, y, .. } => {
            let k = load_body(&body)?;
            let (x, y) = (parse_point(&x, "x")?, parse_point(&y, "y")?);
            let r = bstar(&k, &x, &y, &cfg)?;
            let solver = match cfg.solver {
                Solver::Exact => "exact",
                Solver::Bisection => "bisection",
            };
            writeln!(stdout, "b* = {}", r.bstar).map_err(io)?;
            writeln!(stdout, "delta_B = {}", 1.0 / r.bstar).map_err(io)?;
            writeln!(stdout, "witness a = {}", fmt_vec(&r.witness.a)).map_err(io)?;
            writeln!(stdout, "witness b = {}", r.witness.b).map_err(io)?;
            writeln!(stdout, "witness center = {}", fmt_vec(&r.witness.center())).map_err(io)?;
            writeln!(
                stdout,
                "solver = {solver}, iterations = {}, feasibility_residual = {:e}",
                r.iterations, r.feasibility_residual
            )
            .map_err(io)?;
            Ok(0)
        }
        Command::Density { body, grid, margin, out, svg, .. } => {
            let k = load_body(&body)?;
            if svg.is_some() && k.dim() != 2 {
                return Err(Failure::new(2, "error: --svg needs a planar body"));
            }
            let grid = grid.unwrap_or(cfg.grid);
            let margin = margin.unwrap_or_else(|| cfg.margins.iter().copied().fold(f64::INFINITY, f64::min));
            if !(margin > 0.0 && margin < 1.0) {
                return Err(Failure::new(2, "error: --margin must lie in (0, 1)"));
            }
            let field = density_grid(&k, grid, margin, &cfg)?;
            match out {
                Some(path) => write_output(&path, &field.to_csv())?,
                None => stdout.write_all(field.to_csv().as_bytes()).map_err(io)?,
            }
            if let Some(path) = svg {
                write_output(&path, &heatmap(&field, cfg.svg_clip_percentile)?)?;
            }
            Ok(0)
        }
        Command::Mass { body, grid, margin, out, .. } => {
            let k = load_body(&body)?;
            if let Some(m) = margin {
                let values: Result<Vec<f64>, _> = m.split(',').map(|s| s.trim().parse::<f64>()).collect();
                cfg.margins = values.map_err(|_| Failure::new(2, format!("error: --margin expects numbers, got '{m}'")))?;
                cfg.validate()?;
            }
            let report = total_mass(&k, grid.unwrap_or(cfg.grid), &cfg)?;
            let json = report.to_json();
            writeln!(stdout, "{json}").map_err(io)?;
            if let Some(path) = out {
                write_output(&path, &(json + "\n"))?;
            }
            Ok(0)
        }
        Command::Verify { suite, .. } => {
            let suite: Suite = suite.parse().map_err(|e: Error| Failure::new(2, format!("error: {e}")))?;
            let checks = run_suite(suite, &cfg, common.fast)?;
            stdout.write_all(to_tap(&checks).as_bytes()).map_err(io)?;
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(code) => code,
        Err(f) => {
            let _ = lock.flush();
            eprintln!("{}", f.message);
            f.code
        }
    }
}
