//! Command-line frontend.
//!
//! Every command reads a JSON problem file:
//!
//! ```json
//! {"rho_l": 1.0, "u_l": 1.0, "rho_r": 1.0, "u_r": -1.0,
//!  "A": 1.0, "B": 1.0, "n": 1.0, "alpha": 1.0, "beta": 0.0}
//! ```
//!
//! `n` and `alpha` default to 1 and `beta` to 0. Exit codes: 0 success,
//! 2 invalid configuration, 3 numerical failure, 4 a limit verdict did not
//! converge.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact_solver::{solve, Medium, RiemannSolution, WaveFan};
use crate::fv_oracle::{compare_run, probe_run, run_riemann, ExactComparison, Grid1D, DeltaProbe};
use crate::limit_lab::{
    sweep_a, sweep_ab, verify_cavitation_ab, verify_concentration_a, verify_concentration_ab, write_sweep_csv,
    CavitationReport, ConcentrationReport, SweepRecord, VerdictOptions,
};
use crate::model::{Friction, PressureParams, PrimState, RiemannProblem, TransState};
use crate::wave_curves::{curve_v, CurveKind, Family};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERDICT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "chaplygin", version, about = "Exact Riemann solver and limit lab for the extended Chaplygin gas with friction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Riemann problem and print a JSON summary.
    Solve {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Sample the exact solution at one time (CSV: x,rho,u).
    Profile {
        #[command(flatten)]
        io: IoArgs,
        /// Sampling time (> 0)
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 401)]
        samples: usize,
    },
    /// Tabulate the four wave curves through the left state (CSV: curve,rho,v).
    Phaseplane {
        #[command(flatten)]
        io: IoArgs,
        /// Defaults to rho_l / 10.
        #[arg(long)]
        rho_min: Option<f64>,
        /// Defaults to 10 rho_l.
        #[arg(long)]
        rho_max: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Sweep A, B toward zero and check the limit (CSV sweep, JSON report).
    Limit {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum, default_value_t = Mode::Ab)]
        mode: Mode,
        /// `start:end:geometric[:count]` or a comma-separated list.
        #[arg(long, default_value = "1e-1:1e-8:geometric")]
        schedule: String,
        #[arg(long, default_value_t = 1e-2)]
        tolerance: f64,
        /// JSON report destination (default: stderr).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the finite-volume oracle (CSV profile, JSON metrics).
    Fv {
        #[command(flatten)]
        io: IoArgs,
        /// Final time (> 0)
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 400)]
        cells: usize,
        #[arg(long, default_value_t = Grid1D::DEFAULT_CFL)]
        cfl: f64,
        #[arg(long, conflicts_with = "probe_delta")]
        compare_exact: bool,
        #[arg(long)]
        probe_delta: bool,
        /// JSON metrics destination (default: stderr).
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// JSON problem file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub xmax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// A = B = eps -> 0.
    #[value(name = "AB")]
    Ab,
    /// A = eps -> 0 with B from the config.
    #[value(name = "A")]
    A,
}

/// Problem file contents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub rho_l: f64,
    pub u_l: f64,
    pub rho_r: f64,
    pub u_r: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(default = "one")]
    pub n: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
}

fn one() -> f64 {
    1.0
}

impl RunConfig {
    pub fn problem(&self) -> Result<RiemannProblem, Error> {
        let name = |e: Error, field: &str| match e {
            Error::Domain(m) => Error::InvalidParams(format!("{field}: {m}")),
            other => other,
        };
        let left = PrimState::new(self.rho_l, self.u_l).map_err(|e| name(e, "rho_l/u_l"))?;
        let right = PrimState::new(self.rho_r, self.u_r).map_err(|e| name(e, "rho_r/u_r"))?;
        let pressure = PressureParams::new(self.a, self.b, self.n, self.alpha)?;
        let friction = Friction::new(self.beta)?;
        RiemannProblem::new(left, right, pressure, friction)
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Verdict(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Verdict(_) => EXIT_VERDICT,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Verdict(m) => m,
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Messages go to `stderr`; data goes to the
/// requested files or `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_CONFIG;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn load_config(path: &Path) -> Result<RiemannProblem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    cfg.problem().map_err(config_err)
}

/// Runs `body` against the `--out` file or `stdout`.
fn with_output<F>(path: &Option<PathBuf>, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| numerical(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(numerical)
        }
        None => body(stdout).map_err(numerical),
    }
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn execute(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Solve { io } => {
            let prob = load_config(&io.config)?;
            let sol = solve(&prob).map_err(numerical)?;
            let summary = SolveSummary::new(&sol);
            with_output(&io.out, stdout, |w| write_json(&summary, w))
        }
        Command::Profile { io, t, range, samples } => {
            let prob = load_config(&io.config)?;
            if !(*t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("--t must be positive, got {t}")));
            }
            check_range(range)?;
            if *samples < 2 {
                return Err(CliError::Config("--samples must be at least 2".into()));
            }
            let sol = solve(&prob).map_err(numerical)?;
            let xs = linspace(range.xmin, range.xmax, *samples);
            let rows = xs
                .iter()
                .map(|&x| sol.sample(x, *t).map(|s| (x, s)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(numerical)?;
            with_output(&io.out, stdout, |w| {
                writeln!(w, "x,rho,u")?;
                for (x, s) in rows {
                    match s {
                        Medium::Fluid(s) => writeln!(w, "{x:.16e},{:.16e},{:.16e}", s.rho, s.u)?,
                        Medium::Vacuum => writeln!(w, "{x:.16e},{:.16e},nan", 0.0)?,
                    }
                }
                Ok(())
            })
        }
        Command::Phaseplane { io, rho_min, rho_max, samples } => {
            let prob = load_config(&io.config)?;
            let rho_l = prob.left.rho;
            let lo = rho_min.unwrap_or(rho_l / 10.0);
            let hi = rho_max.unwrap_or(rho_l * 10.0);
            if !(lo > 0.0 && lo < rho_l && hi > rho_l && hi.is_finite()) {
                return Err(CliError::Config(format!("need 0 < rho_min < rho_l < rho_max, got {lo}, {rho_l}, {hi}")));
            }
            if *samples < 2 {
                return Err(CliError::Config("--samples must be at least 2".into()));
            }
            if prob.pressure.is_pressureless() {
                return Err(CliError::Config("wave curves need A, B not both zero".into()));
            }
            let rows = phase_plane_rows(prob.left_trans(), lo, hi, *samples, &prob.pressure).map_err(numerical)?;
            with_output(&io.out, stdout, |w| {
                writeln!(w, "curve,rho,v")?;
                for (name, rho, v) in rows {
                    writeln!(w, "{name},{rho:.16e},{v:.16e}")?;
                }
                Ok(())
            })
        }
        Command::Limit { io, mode, schedule, tolerance, report } => {
            let prob = load_config(&io.config)?;
            let eps = parse_schedule(schedule).map_err(CliError::Config)?;
            if !(*tolerance > 0.0) {
                return Err(CliError::Config(format!("--tolerance must be positive, got {tolerance}")));
            }
            let opts = VerdictOptions { tolerance: *tolerance, ..VerdictOptions::default() };
            let (records, limit_report) = run_limit(&prob, *mode, &eps, &opts)?;
            with_output(&io.out, stdout, |w| write_sweep_csv(&records, w))?;
            with_output(report, stderr, |w| write_json(&limit_report, w))?;
            if limit_report.converged() {
                Ok(())
            } else {
                Err(CliError::Verdict("at least one limit verdict did not converge".into()))
            }
        }
        Command::Fv { io, t, range, cells, cfl, compare_exact, probe_delta, report } => {
            let prob = load_config(&io.config)?;
            if !(*t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("--t must be positive, got {t}")));
            }
            check_range(range)?;
            let grid = Grid1D::new(range.xmin, range.xmax, *cells, *cfl).map_err(config_err)?;
            if *compare_exact && prob.pressure.is_pressureless() {
                return Err(CliError::Config("--compare-exact needs A, B not both zero".into()));
            }
            if *probe_delta && !(prob.left.u > prob.right.u) {
                return Err(CliError::Config("--probe-delta needs u_l > u_r".into()));
            }
            let run = run_riemann(&prob, grid, *t).map_err(numerical)?;
            let dx = grid.dx();
            let mut metrics = FvMetrics {
                t: run.state.time,
                cells: grid.cells,
                cfl: grid.cfl,
                x_min: grid.x_min,
                x_max: grid.x_max,
                steps: run.steps,
                mass: run.state.total_mass(dx),
                momentum: run.state.total_momentum(dx),
                compare_exact: None,
                probe_delta: None,
            };
            if *compare_exact {
                let exact = solve(&prob).map_err(numerical)?;
                metrics.compare_exact = Some(compare_run(&run, &exact).map_err(numerical)?);
            }
            if *probe_delta {
                metrics.probe_delta = Some(probe_run(&run, &prob));
            }
            with_output(&io.out, stdout, |w| run.write_profile_csv(w))?;
            with_output(report, stderr, |w| write_json(&metrics, w))
        }
    }
}

fn check_range(range: &RangeArgs) -> Result<(), CliError> {
    if range.xmin.is_finite() && range.xmax.is_finite() && range.xmin < range.xmax {
        Ok(())
    } else {
        Err(CliError::Config(format!("need --xmin < --xmax, got {} and {}", range.xmin, range.xmax)))
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.log10(), b.log10());
    (0..n)
        .map(|i| match i {
            0 => a,
            _ if i == n - 1 => b,
            _ => 10f64.powf(la + (lb - la) * i as f64 / (n - 1) as f64),
        })
        .collect()
}

/// Parses `start:end:geometric[:count]` (one point per decade when `count`
/// is omitted) or a comma-separated list of positive values.
pub fn parse_schedule(text: &str) -> Result<Vec<f64>, String> {
    let positive = |s: &str| -> Result<f64, String> {
        let v: f64 = s.trim().parse().map_err(|_| format!("bad schedule value {s:?}"))?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(format!("schedule values must be positive, got {v}"))
        }
    };
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 1 {
        return text.split(',').map(positive).collect();
    }
    if !(3..=4).contains(&parts.len()) || parts[2].trim() != "geometric" {
        return Err(format!("expected start:end:geometric[:count], got {text:?}"));
    }
    let (start, end) = (positive(parts[0])?, positive(parts[1])?);
    let count = match parts.get(3) {
        Some(c) => c.trim().parse::<usize>().map_err(|_| format!("bad schedule count {c:?}"))?,
        None => ((start / end).log10().abs().round() as usize) + 1,
    };
    if count < 2 {
        return Err("a geometric schedule needs at least 2 points".into());
    }
    Ok(geomspace(start, end, count))
}

/// JSON report of the `limit` command.
#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitReport {
    Concentration(ConcentrationReport),
    Cavitation(CavitationReport),
}

impl LimitReport {
    fn converged(&self) -> bool {
        match self {
            LimitReport::Concentration(r) => r.all_converged(),
            LimitReport::Cavitation(r) => r.all_converged(),
        }
    }
}

fn run_limit(
    prob: &RiemannProblem,
    mode: Mode,
    eps: &[f64],
    opts: &VerdictOptions,
) -> Result<(Vec<SweepRecord>, LimitReport), CliError> {
    let (left, right) = (prob.left, prob.right);
    match mode {
        Mode::Ab => {
            if left.u == right.u {
                return Err(CliError::Verdict("u_l = u_r: neither concentration nor cavitation applies".into()));
            }
            let pairs: Vec<(f64, f64)> = eps.iter().map(|&e| (e, e)).collect();
            let records = sweep_ab(prob, &pairs).map_err(numerical)?;
            let report = if left.u > right.u {
                LimitReport::Concentration(verify_concentration_ab(&records, left, right, opts).map_err(numerical)?)
            } else {
                LimitReport::Cavitation(verify_cavitation_ab(&records, left, right, opts).map_err(numerical)?)
            };
            Ok((records, report))
        }
        Mode::A => {
            let (b, alpha) = (prob.pressure.b, prob.pressure.alpha);
            if !(b > 0.0) {
                return Err(CliError::Config("--mode A needs B > 0 in the config".into()));
            }
            let window = crate::limit_systems::GcDeltaConditions::new(left, right, b, alpha).entropy_window;
            if !(window.0 < window.1) {
                return Err(CliError::Config(format!(
                    "--mode A needs a nonempty entropy window, got ({}, {})",
                    window.0, window.1
                )));
            }
            let records = sweep_a(prob, b, eps).map_err(numerical)?;
            let report = verify_concentration_a(&records, left, right, b, alpha, opts).map_err(numerical)?;
            Ok((records, LimitReport::Concentration(report)))
        }
    }
}

fn phase_plane_rows(
    left: TransState,
    lo: f64,
    hi: f64,
    samples: usize,
    p: &PressureParams,
) -> crate::error::Result<Vec<(&'static str, f64, f64)>> {
    let below = geomspace(lo, left.rho, samples);
    let above = geomspace(left.rho, hi, samples);
    let curves = [
        ("R1", Family::One, CurveKind::Rarefaction, &below),
        ("S1", Family::One, CurveKind::Shock, &above),
        ("R2", Family::Two, CurveKind::Rarefaction, &above),
        ("S2", Family::Two, CurveKind::Shock, &below),
    ];
    let mut rows = Vec::with_capacity(4 * samples);
    for (name, family, kind, rhos) in curves {
        for &rho in rhos.iter() {
            // keep the endpoint exactly on its half of the plane
            let rho = rho.clamp(lo.min(left.rho), hi.max(left.rho));
            rows.push((name, rho, curve_v(family, kind, left, rho, p)?));
        }
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
struct WaveSummary {
    kind: &'static str,
    family: Option<Family>,
    left_edge: f64,
    right_edge: f64,
    sigma0: Option<f64>,
    rh_residual: Option<[f64; 2]>,
}

#[derive(Debug, Serialize)]
struct IntermediateSummary {
    rho_star: f64,
    v_star: f64,
}

#[derive(Debug, Serialize)]
struct SolveSummary {
    region: &'static str,
    intermediate: Option<IntermediateSummary>,
    waves: Vec<WaveSummary>,
    diagnostics: Vec<String>,
}

impl SolveSummary {
    fn new(sol: &RiemannSolution) -> Self {
        let waves = sol
            .waves
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let (sigma0, rh_residual) = match w {
                    WaveFan::Shock(s) => {
                        let (r1, r2) = sol.rh_residual(i).expect("index refers to a shock");
                        (Some(s.sigma0), Some([r1, r2]))
                    }
                    WaveFan::Contact { sigma0 } | WaveFan::DeltaShock { sigma0, .. } => (Some(*sigma0), None),
                    _ => (None, None),
                };
                WaveSummary {
                    kind: w.kind_name(),
                    family: w.family(),
                    left_edge: w.left_edge(),
                    right_edge: w.right_edge(),
                    sigma0,
                    rh_residual,
                }
            })
            .collect();
        Self {
            region: sol.region.name(),
            intermediate: sol.intermediate.map(|s| IntermediateSummary { rho_star: s.rho_star, v_star: s.v_star }),
            waves,
            diagnostics: sol.diagnostics.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct FvMetrics {
    t: f64,
    cells: usize,
    cfl: f64,
    x_min: f64,
    x_max: f64,
    steps: usize,
    mass: f64,
    momentum: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    compare_exact: Option<ExactComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe_delta: Option<DeltaProbe>,
}
