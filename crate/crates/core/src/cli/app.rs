//! Argument parsing and command dispatch for the `ngtmst` binary.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nalgebra::Vector4;

use super::config::{Format, GridPoint, SweepConfig};
use super::figures::{figure_command, FigureId};
use super::output::{Cell, Table};
use super::sweep::{
    make_oracle, oracle_check, run_sweep, Evaluation, PointRecord, Tolerances, BASE_COLUMNS, ORACLE_COLUMNS,
};
use super::verify::verify_command;
use crate::error::{Error, Result};
use crate::interferometer::{find_optimal_squeezing, SqueezingTemplate};
use crate::ngstate::{success_probability, wigner_normalized, NgParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ngtmst",
    version,
    about = "Parity-detection phase sensitivity of non-Gaussian two-mode squeezed thermal states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parity expectation at the operating point.
    Parity(PhaseArgs),
    /// Phase uncertainty, parity slope and figures of merit.
    Sensitivity(PhaseArgs),
    /// Heralding success probability.
    Probability(PointArgs),
    /// Normalized Wigner function at one phase-space point.
    Wigner(WignerArgs),
    /// Evaluate a parameter grid from a TOML config.
    Sweep(SweepArgs),
    /// Write the data and a plot stub for published figures.
    Figure(FigureArgs),
    /// Check the closed forms against the Fock-basis oracle.
    Verify(VerifyArgs),
    /// Squeezing that minimizes the phase uncertainty.
    Optimize(OptimizeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Squeezing r (λ = tanh r).
    #[arg(long, conflicts_with = "lambda", required_unless_present = "lambda")]
    pub r_sq: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Mean thermal photon number (κ = n_th + 1/2); defaults to vacuum.
    #[arg(long, conflicts_with = "kappa")]
    pub n_th: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
}

impl StateArgs {
    fn resolve(&self) -> Result<(f64, f64, f64, f64)> {
        let (r_sq, lambda) = match (self.r_sq, self.lambda) {
            (Some(r), None) => (r, r.tanh()),
            (None, Some(l)) if l > 0.0 && l < 1.0 => (l.atanh(), l),
            (None, Some(l)) => return Err(Error::Config(format!("lambda {l} outside (0, 1)"))),
            _ => return Err(Error::Config("give exactly one of --r-sq and --lambda".into())),
        };
        let (n_th, kappa) = match (self.n_th, self.kappa) {
            (Some(n), None) => (n, n + 0.5),
            (None, Some(k)) => (k - 0.5, k),
            (None, None) => (0.0, 0.5),
            _ => return Err(Error::Config("give at most one of --n-th and --kappa".into())),
        };
        Ok((r_sq, lambda, n_th, kappa))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Cross-check against the Fock-basis oracle.
    #[arg(long)]
    pub verify: bool,
    /// Oracle photon-number cutoff; escalates automatically when absent.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Absolute tolerance on parity and Wigner values.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    /// Absolute tolerance on success probabilities.
    #[arg(long, default_value_t = 1e-8)]
    pub prob_tolerance: f64,
}

impl CheckArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances { value: self.tolerance, probability: self.prob_tolerance }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub check: CheckArgs,
}

impl PointArgs {
    fn grid_point(&self, phi: f64) -> Result<GridPoint> {
        let (r_sq, lambda, n_th, kappa) = self.state.resolve()?;
        let params =
            NgParams::new(lambda, kappa, self.tau, self.m, self.n).map_err(|e| Error::Config(e.to_string()))?;
        if !phi.is_finite() {
            return Err(Error::Config(format!("phase {phi} is not finite")));
        }
        Ok(GridPoint { index: 0, r_sq, n_th, params, phi })
    }
}

#[derive(Debug, Clone, Args)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Phase φ in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: f64,
}

#[derive(Debug, Clone, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub q1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub p1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub q2: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub p2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `out` from the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub prob_tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum, required = true)]
    pub ids: Vec<FigureId>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub prob_tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, conflicts_with = "kappa")]
    pub n_th: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.01)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.05)]
    pub r_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub r_max: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Non-fatal outcome of a command that produced output.
enum Outcome {
    Ok,
    VerificationFailed,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

fn emit(table: &Table, output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => table.write(File::create(path)?, output.format),
        None => table.write(io::stdout().lock(), output.format),
    }
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(pool.install(f))
}

fn phase_command(args: &PhaseArgs, value_columns: &[&'static str]) -> Result<Outcome> {
    let g = args.point.grid_point(args.phi)?;
    let eval = Evaluation::at(&g)?;
    let mut record = PointRecord { point: g, eval: Ok(eval), check: None };
    let check = &args.point.check;
    let mut cols: Vec<&str> = BASE_COLUMNS[1..].to_vec();
    cols.extend(value_columns);
    if check.verify {
        let mut oracle = make_oracle(check.cutoff)?;
        record.check = Some(oracle_check(&mut oracle, &g, &eval, &check.tolerances()));
        cols.extend(ORACLE_COLUMNS);
    }
    let mut table = Table::new(cols.iter().copied());
    table.push(record.select(&cols));
    emit(&table, &args.point.output)?;
    Ok(match record.check.map(|c| c.status) {
        Some(super::sweep::CheckStatus::Fail) => Outcome::VerificationFailed,
        _ => Outcome::Ok,
    })
}

fn point_columns(g: &GridPoint) -> Vec<(&'static str, Cell)> {
    let p = &g.params;
    vec![
        ("m", p.m.into()),
        ("n", p.n.into()),
        ("op", p.op_kind().label().into()),
        ("r_sq", g.r_sq.into()),
        ("lambda", p.lambda.into()),
        ("n_th", g.n_th.into()),
        ("kappa", p.kappa.into()),
        ("tau", p.tau.into()),
    ]
}

/// Oracle comparison of a single scalar. Returns (cells, failed).
fn scalar_check(
    args: &PointArgs,
    g: &GridPoint,
    tol: f64,
    value: impl FnOnce(&crate::oracle::HeraldedState) -> f64,
    ours: f64,
) -> Result<(Vec<(&'static str, Cell)>, bool)> {
    let mut oracle = make_oracle(args.check.cutoff)?;
    let p = &g.params;
    Ok(match oracle.heralded(g.r_sq, g.n_th, p.tau, p.m, p.n) {
        Ok(h) => {
            let v = value(&h);
            let dev = (v - ours).abs();
            let fail = !(dev <= tol);
            (
                vec![
                    ("oracle_cutoff", h.cutoff.into()),
                    ("oracle_value", v.into()),
                    ("oracle_dev", dev.into()),
                    ("oracle_status", if fail { "fail" } else { "pass" }.into()),
                ],
                fail,
            )
        }
        Err(e @ (Error::TailTooLarge { .. } | Error::NegligibleProbability(_))) => (
            vec![
                ("oracle_cutoff", Cell::Empty),
                ("oracle_value", Cell::Empty),
                ("oracle_dev", Cell::Empty),
                ("oracle_status", format!("skipped: {e}").into()),
            ],
            false,
        ),
        Err(e) => return Err(e),
    })
}

fn scalar_table(cells: Vec<(&'static str, Cell)>) -> Table {
    let mut t = Table::new(cells.iter().map(|(c, _)| *c));
    t.push(cells.into_iter().map(|(_, v)| v).collect());
    t
}

fn probability_command(args: &PointArgs) -> Result<Outcome> {
    let g = args.grid_point(0.0)?;
    let prob = success_probability(&g.params)?;
    let mut cells = point_columns(&g);
    cells.push(("probability", prob.into()));
    let mut failed = false;
    if args.check.verify {
        let (extra, f) = scalar_check(args, &g, args.check.prob_tolerance, |h| h.probability, prob)?;
        cells.extend(extra);
        failed = f;
    }
    emit(&scalar_table(cells), &args.output)?;
    Ok(if failed { Outcome::VerificationFailed } else { Outcome::Ok })
}

fn wigner_command(args: &WignerArgs) -> Result<Outcome> {
    let g = args.point.grid_point(0.0)?;
    let xi = Vector4::new(args.q1, args.p1, args.q2, args.p2);
    let w = wigner_normalized(&g.params, &xi)?;
    let mut cells = point_columns(&g);
    cells.extend([
        ("q1", args.q1.into()),
        ("p1", args.p1.into()),
        ("q2", args.q2.into()),
        ("p2", args.p2.into()),
        ("wigner", w.into()),
    ]);
    let mut failed = false;
    if args.point.check.verify {
        let (extra, f) = scalar_check(&args.point, &g, args.point.check.tolerance, |h| h.rho.wigner_point(&xi), w)?;
        cells.extend(extra);
        failed = f;
    }
    emit(&scalar_table(cells), &args.point.output)?;
    Ok(if failed { Outcome::VerificationFailed } else { Outcome::Ok })
}

fn sweep_command(args: &SweepArgs) -> Result<Outcome> {
    let mut cfg = SweepConfig::load(&args.config)?;
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    if args.workers.is_some() {
        cfg.workers = args.workers;
    }
    if args.cutoff.is_some() {
        cfg.cutoff = args.cutoff;
    }
    cfg.verify |= args.verify;
    cfg.validate()?;
    let tol = Tolerances { value: args.tolerance, probability: args.prob_tolerance };
    let summary = match &cfg.out {
        Some(path) => run_sweep(&cfg, &tol, io::BufWriter::new(File::create(path)?))?,
        None => run_sweep(&cfg, &tol, io::stdout().lock())?,
    };
    eprintln!(
        "{} points, {} with errors; {} checked, {} failed, {} skipped",
        summary.points, summary.errors, summary.checked, summary.failed, summary.skipped
    );
    Ok(if summary.failed > 0 { Outcome::VerificationFailed } else { Outcome::Ok })
}

fn figure_cmd(args: &FigureArgs) -> Result<Outcome> {
    for id in &args.ids {
        let files = with_workers(args.workers, || figure_command(*id, &args.out))??;
        for f in files {
            println!("{}", f.display());
        }
    }
    Ok(Outcome::Ok)
}

fn verify_cmd(args: &VerifyArgs) -> Result<Outcome> {
    let tol = Tolerances { value: args.tolerance, probability: args.prob_tolerance };
    let mut stdout = io::stdout().lock();
    let report = verify_command(args.cutoff, tol, |c| {
        let _ = writeln!(stdout, "{c}");
    })?;
    writeln!(stdout, "{}", report.summary())?;
    Ok(if report.failed() > 0 { Outcome::VerificationFailed } else { Outcome::Ok })
}

fn optimize_command(args: &OptimizeArgs) -> Result<Outcome> {
    let kappa = match (args.n_th, args.kappa) {
        (Some(n), None) => n + 0.5,
        (None, Some(k)) => k,
        _ => 0.5,
    };
    // Validates τ, κ, m and n up front so a bad flag is a usage error.
    NgParams::new(0.5, kappa, args.tau, args.m, args.n).map_err(|e| Error::Config(e.to_string()))?;
    let template = SqueezingTemplate { kappa, tau: args.tau, m: args.m, n: args.n };
    let (r, d) = find_optimal_squeezing(&template, args.phi, (args.r_min, args.r_max))?;
    let cells: Vec<(&'static str, Cell)> = vec![
        ("m", args.m.into()),
        ("n", args.n.into()),
        ("kappa", kappa.into()),
        ("tau", args.tau.into()),
        ("phi_rad", args.phi.into()),
        ("r_sq_opt", r.into()),
        ("lambda_opt", r.tanh().into()),
        ("delta_phi_min_rad", d.into()),
    ];
    emit(&scalar_table(cells), &args.output)?;
    Ok(Outcome::Ok)
}

pub fn dispatch(cli: &Cli) -> Result<i32> {
    const PARITY: &[&str] = &["parity"];
    const SENSITIVITY: &[&str] = &[
        "probability",
        "parity",
        "dparity_dphi_per_rad",
        "delta_phi_rad",
        "delta_phi_tmst_rad",
        "merit_thermal_rad",
        "merit_vacuum_rad",
    ];
    let outcome = match &cli.command {
        Command::Parity(a) => phase_command(a, PARITY)?,
        Command::Sensitivity(a) => phase_command(a, SENSITIVITY)?,
        Command::Probability(a) => probability_command(a)?,
        Command::Wigner(a) => wigner_command(a)?,
        Command::Sweep(a) => sweep_command(a)?,
        Command::Figure(a) => figure_cmd(a)?,
        Command::Verify(a) => verify_cmd(a)?,
        Command::Optimize(a) => optimize_command(a)?,
    };
    Ok(match outcome {
        Outcome::Ok => EXIT_OK,
        Outcome::VerificationFailed => EXIT_VERIFY,
    })
}

/// Parses `args` (including the program name) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
