//! Parameter sweeps reproducing the flux-approximation limits: concentration
//! and cavitation as `A, B -> 0`, and concentration as `A -> 0` with `B`
//! fixed.
//!
//! A sweep solves one Riemann problem per schedule entry and records the
//! intermediate state together with the outer wave speeds at `t = 0`. The
//! `verify_*` functions compare the tail of a sweep with the closed-form
//! delta-shock or vacuum targets of [`crate::limit_systems`].

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_solver::{solve, WaveFan};
use crate::limit_systems::{gchaplygin_delta_targets, pressureless_delta_targets, GcDeltaConditions};
use crate::model::{PrimState, RiemannProblem};
use crate::wave_curves::Family;

/// One solved schedule point. Speeds and rates are in transformed variables
/// at `t = 0`, so they do not depend on the friction constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub a: f64,
    pub b: f64,
    pub rho_star: f64,
    pub v_star: f64,
    /// 1-shock speed, or the head speed `lambda_1(rho_-)` of a 1-rarefaction.
    pub sigma1_0: f64,
    /// 2-shock speed, or the head speed `lambda_2(rho_+)` of a 2-rarefaction.
    pub sigma2_0: f64,
    /// `rho_* (sigma2_0 - sigma1_0)`: mass between the outer waves per unit time.
    pub mass_rate: f64,
    pub momentum_rate: f64,
    pub a_rho_n: f64,
}

impl SweepRecord {
    pub const CSV_HEADER: &'static str = "A,B,rho_star,v_star,sigma1_0,sigma2_0,mass_rate,momentum_rate,a_rho_n";

    pub fn csv_row(&self) -> String {
        [
            self.a,
            self.b,
            self.rho_star,
            self.v_star,
            self.sigma1_0,
            self.sigma2_0,
            self.mass_rate,
            self.momentum_rate,
            self.a_rho_n,
        ]
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Writes a header line and one row per record.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{}", SweepRecord::CSV_HEADER)?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// A sweep stopped at `failed_at = (A, B)`; `completed` holds the records
/// solved before it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("sweep failed at A = {}, B = {}: {source}", failed_at.0, failed_at.1)]
pub struct SweepError {
    pub completed: Vec<SweepRecord>,
    pub failed_at: (f64, f64),
    pub source: Error,
}

/// Solves the template problem once with `A`, `B` replaced.
pub fn solve_record(template: &RiemannProblem, a: f64, b: f64) -> Result<SweepRecord> {
    let prob = RiemannProblem { pressure: template.pressure.with_ab(a, b)?, ..*template };
    let sol = solve(&prob)?;
    let star = sol
        .intermediate
        .ok_or_else(|| Error::Precondition("solution has no intermediate state (identical data or vacuum)".into()))?;
    let outer = |family: Family| -> f64 {
        let wave = sol.waves.iter().find(|w| w.family() == Some(family)).expect("two-wave solution");
        match (wave, family) {
            (WaveFan::Shock(s), _) => s.sigma0,
            (WaveFan::Rarefaction(r), Family::One) => r.left_edge,
            (WaveFan::Rarefaction(r), Family::Two) => r.right_edge,
            _ => unreachable!("outer waves are shocks or rarefactions"),
        }
    };
    let (s1, s2) = (outer(Family::One), outer(Family::Two));
    let mass_rate = star.rho_star * (s2 - s1);
    Ok(SweepRecord {
        a,
        b,
        rho_star: star.rho_star,
        v_star: star.v_star,
        sigma1_0: s1,
        sigma2_0: s2,
        mass_rate,
        momentum_rate: mass_rate * star.v_star,
        a_rho_n: a * star.rho_star.powf(prob.pressure.n),
    })
}

/// Runs the schedule entries on scoped threads and collects the records in
/// schedule order. The first failing entry (in schedule order) ends the
/// sweep.
fn sweep_pairs(template: &RiemannProblem, schedule: &[(f64, f64)]) -> std::result::Result<Vec<SweepRecord>, SweepError> {
    let results: Vec<Result<SweepRecord>> = std::thread::scope(|scope| {
        let handles: Vec<_> = schedule
            .iter()
            .map(|&(a, b)| scope.spawn(move || solve_record(template, a, b)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut completed = Vec::with_capacity(schedule.len());
    for (res, &(a, b)) in results.into_iter().zip(schedule) {
        match res {
            Ok(r) => {
                log::debug!("A = {a:e}, B = {b:e}: rho* = {:e}", r.rho_star);
                completed.push(r);
            }
            Err(source) => return Err(SweepError { completed, failed_at: (a, b), source }),
        }
    }
    Ok(completed)
}

/// Sweeps `(A, B)` pairs over the template problem.
pub fn sweep_ab(template: &RiemannProblem, schedule: &[(f64, f64)]) -> std::result::Result<Vec<SweepRecord>, SweepError> {
    sweep_pairs(template, schedule)
}

/// Sweeps `A` with `B` held fixed.
pub fn sweep_a(template: &RiemannProblem, b: f64, schedule: &[f64]) -> std::result::Result<Vec<SweepRecord>, SweepError> {
    let pairs: Vec<(f64, f64)> = schedule.iter().map(|&a| (a, b)).collect();
    sweep_pairs(template, &pairs)
}

/// `10^-k` for `k = first..=last`.
pub fn decade_schedule(first: i32, last: i32) -> Vec<f64> {
    (first..=last).map(|k| 10f64.powi(-k)).collect()
}

/// Tolerances used by the `verify_*` functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictOptions {
    /// Final-point error bound for limit targets; relative unless the
    /// target is zero.
    pub tolerance: f64,
    /// `rho_*` counts as divergent above this factor times `max(rho_-, rho_+)`.
    pub divergence_factor: f64,
    /// `rho_*` counts as vacuum below this value.
    pub vacuum_threshold: f64,
    /// Number of trailing schedule points whose errors must be nonincreasing.
    pub monotone_window: usize,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        Self { tolerance: 1e-2, divergence_factor: 1e4, vacuum_threshold: 1e-3, monotone_window: 3 }
    }
}

/// Convergence verdict for one observed quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitVerdict {
    pub quantity: String,
    pub target: f64,
    pub observed: Vec<f64>,
    pub errors: Vec<f64>,
    pub tolerance: f64,
    pub converged: bool,
    pub last_error: f64,
}

impl LimitVerdict {
    /// Relative error against a nonzero target, absolute otherwise.
    pub fn against_target(quantity: &str, target: f64, observed: Vec<f64>, opts: &VerdictOptions) -> Self {
        let errors = observed
            .iter()
            .map(|&o| if target != 0.0 { ((o - target) / target).abs() } else { o.abs() })
            .collect();
        Self::from_errors(quantity, target, observed, errors, opts.tolerance, opts.monotone_window)
    }

    /// Verdict with caller-supplied errors: converged when the last error is
    /// below `tolerance` and the trailing `window` errors are nonincreasing.
    pub fn from_errors(
        quantity: &str,
        target: f64,
        observed: Vec<f64>,
        errors: Vec<f64>,
        tolerance: f64,
        window: usize,
    ) -> Self {
        let last_error = errors.last().copied().unwrap_or(f64::INFINITY);
        let tail = &errors[errors.len().saturating_sub(window)..];
        let monotone = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300);
        let converged = !errors.is_empty() && last_error < tolerance && monotone;
        Self { quantity: quantity.to_string(), target, observed, errors, tolerance, converged, last_error }
    }
}

/// Verdicts of a concentration sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub sigma0_target: f64,
    pub weight_target: f64,
    /// Whether `sigma0_target` lies strictly inside its entropy interval.
    pub target_in_entropy_window: bool,
    pub entropy_window: (f64, f64),
    pub verdicts: Vec<LimitVerdict>,
    /// Per-record check `A rho_*^n < rho_- (u_- - u_+)^2`; empty for `A, B -> 0` sweeps.
    pub pressure_bound: Vec<bool>,
}

impl ConcentrationReport {
    pub fn all_converged(&self) -> bool {
        self.target_in_entropy_window
            && self.verdicts.iter().all(|v| v.converged)
            && self.pressure_bound.iter().all(|&b| b)
    }
}

/// Verdicts of a cavitation sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavitationReport {
    pub vacuum_threshold: f64,
    /// Index of the first record with `rho_*` below the vacuum threshold.
    pub first_vacuum_index: Option<usize>,
    pub verdicts: Vec<LimitVerdict>,
}

impl CavitationReport {
    pub fn all_converged(&self) -> bool {
        self.verdicts.iter().all(|v| v.converged)
    }
}

fn column(records: &[SweepRecord], f: impl Fn(&SweepRecord) -> f64) -> Vec<f64> {
    records.iter().map(f).collect()
}

fn divergence_verdict(records: &[SweepRecord], left: PrimState, right: PrimState, opts: &VerdictOptions) -> LimitVerdict {
    let threshold = opts.divergence_factor * left.rho.max(right.rho);
    let observed = column(records, |r| r.rho_star);
    let errors = observed.iter().map(|&r| threshold / r).collect();
    LimitVerdict::from_errors("rho_star_divergence", threshold, observed, errors, 1.0, opts.monotone_window)
}

fn shared_verdicts(
    records: &[SweepRecord],
    sigma0: f64,
    weight: f64,
    opts: &VerdictOptions,
) -> Vec<LimitVerdict> {
    vec![
        LimitVerdict::against_target("v_star", sigma0, column(records, |r| r.v_star), opts),
        LimitVerdict::against_target("sigma1_0", sigma0, column(records, |r| r.sigma1_0), opts),
        LimitVerdict::against_target("sigma2_0", sigma0, column(records, |r| r.sigma2_0), opts),
        LimitVerdict::against_target("mass_rate", weight, column(records, |r| r.mass_rate), opts),
        LimitVerdict::against_target("momentum_rate", sigma0 * weight, column(records, |r| r.momentum_rate), opts),
    ]
}

fn require_records(records: &[SweepRecord]) -> Result<()> {
    if records.is_empty() {
        Err(Error::Precondition("no sweep records".into()))
    } else {
        Ok(())
    }
}

/// Checks a `A, B -> 0` sweep against the pressureless delta shock.
pub fn verify_concentration_ab(
    records: &[SweepRecord],
    left: PrimState,
    right: PrimState,
    opts: &VerdictOptions,
) -> Result<ConcentrationReport> {
    require_records(records)?;
    if !(left.u > right.u) {
        return Err(Error::Precondition("concentration needs u_- > u_+".into()));
    }
    let (sigma0, weight) = pressureless_delta_targets(left, right);
    let (sl, sr) = (left.rho.sqrt(), right.rho.sqrt());
    let pressure_target = left.rho * right.rho * (left.u - right.u).powi(2) / (sl + sr).powi(2);

    let mut verdicts = vec![divergence_verdict(records, left, right, opts)];
    verdicts.push(LimitVerdict::against_target("a_rho_n", pressure_target, column(records, |r| r.a_rho_n), opts));
    verdicts.extend(shared_verdicts(records, sigma0, weight, opts));
    Ok(ConcentrationReport {
        sigma0_target: sigma0,
        weight_target: weight,
        target_in_entropy_window: right.u < sigma0 && sigma0 < left.u,
        entropy_window: (right.u, left.u),
        verdicts,
        pressure_bound: Vec::new(),
    })
}

/// Checks a `A -> 0` sweep at fixed `B` against the generalized Chaplygin
/// delta shock. The data must satisfy the strict entropy window
/// `u_+ + sqrt(alpha B) rho_+^{-(alpha+1)/2} < u_- - sqrt(alpha B) rho_-^{-(alpha+1)/2}`.
pub fn verify_concentration_a(
    records: &[SweepRecord],
    left: PrimState,
    right: PrimState,
    b: f64,
    alpha: f64,
    opts: &VerdictOptions,
) -> Result<ConcentrationReport> {
    require_records(records)?;
    let cond = GcDeltaConditions::new(left, right, b, alpha);
    let (lo, hi) = cond.entropy_window;
    if !(lo < hi) {
        return Err(Error::Precondition(format!("entropy window ({lo}, {hi}) is empty")));
    }
    let (sigma0, weight) = gchaplygin_delta_targets(left, right, b, alpha)?;
    let pressure_target = left.rho * (left.u - sigma0).powi(2) - b * left.rho.powf(-alpha);
    let bound = left.rho * (left.u - right.u).powi(2);

    let mut verdicts = vec![divergence_verdict(records, left, right, opts)];
    verdicts.push(LimitVerdict::against_target("a_rho_n", pressure_target, column(records, |r| r.a_rho_n), opts));
    verdicts.extend(shared_verdicts(records, sigma0, weight, opts));
    Ok(ConcentrationReport {
        sigma0_target: sigma0,
        weight_target: weight,
        target_in_entropy_window: cond.in_window(sigma0),
        entropy_window: cond.entropy_window,
        verdicts,
        pressure_bound: records.iter().map(|r| r.a_rho_n < bound).collect(),
    })
}

/// Checks a `A, B -> 0` sweep with `u_- < u_+` for vacuum formation:
/// `rho_* -> 0` and the outer fan heads approach `u_-` and `u_+`.
pub fn verify_cavitation_ab(
    records: &[SweepRecord],
    left: PrimState,
    right: PrimState,
    opts: &VerdictOptions,
) -> Result<CavitationReport> {
    require_records(records)?;
    if left.u == right.u {
        return Err(Error::NotApplicable("u_- = u_+: no velocity gap, no cavitation".into()));
    }
    if left.u > right.u {
        return Err(Error::Precondition("cavitation needs u_- < u_+".into()));
    }
    let rho = column(records, |r| r.rho_star);
    let rho_errors = rho.clone();
    let verdicts = vec![
        LimitVerdict::from_errors("rho_star", 0.0, rho, rho_errors, opts.vacuum_threshold, opts.monotone_window),
        LimitVerdict::against_target("lambda1_edge", left.u, column(records, |r| r.sigma1_0), opts),
        LimitVerdict::against_target("lambda2_edge", right.u, column(records, |r| r.sigma2_0), opts),
    ];
    Ok(CavitationReport {
        vacuum_threshold: opts.vacuum_threshold,
        first_vacuum_index: records.iter().position(|r| r.rho_star < opts.vacuum_threshold),
        verdicts,
    })
}
