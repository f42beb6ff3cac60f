//! Exact Riemann solver for the extended Chaplygin gas with friction.
//!
//! The right state is classified against the four wave curves through the
//! left state, the intermediate state is found by bisection on the
//! difference of the composite forward 1-curve and backward 2-curve, and
//! the solution is sampled in the shifted coordinate
//! `zeta = (x - beta t^2 / 2) / t`, in which it is self-similar.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{from_trans, PressureParams, PrimState, RiemannProblem, TransState};
use crate::wave_curves::{
    backward_curve_v, entropy_ok, forward_one_curve_v, forward_two_curve_v, lambda0, rarefaction_integral,
    rarefaction_integral_from_vacuum, rh_residuals, rh_scales, shock_jump_sq, shock_speed0, Family,
};

/// Relative bracket width at which the intermediate density is accepted.
pub const RHO_STAR_RTOL: f64 = 1e-12;
/// Absolute tolerance in `zeta` when inverting a rarefaction fan.
pub const FAN_ZETA_TOL: f64 = 1e-12;
/// Right states this close to a dividing curve are classified toward the
/// rarefaction side.
pub const TIE_TOL: f64 = 1e-13;
/// Upper bracket expansion stops here.
pub const BRACKET_CAP: f64 = 1e250;
const OVERFLOW_GUARD: f64 = 1e300;
const BRACKET_FLOOR: f64 = 1e-300;

/// Phase-plane region of the right state relative to the left state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// 1-rarefaction + 2-rarefaction.
    I,
    /// 1-shock + 2-rarefaction.
    II,
    /// 1-rarefaction + 2-shock.
    III,
    /// 1-shock + 2-shock.
    IV,
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
        }
    }

    fn one_is_rarefaction(&self) -> bool {
        matches!(self, Region::I | Region::III)
    }

    fn two_is_rarefaction(&self) -> bool {
        matches!(self, Region::I | Region::II)
    }
}

/// Constant state between the two waves, in transformed variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntermediateState {
    pub rho_star: f64,
    pub v_star: f64,
}

impl IntermediateState {
    pub fn trans(&self) -> TransState {
        TransState { rho: self.rho_star, v: self.v_star }
    }
}

/// Either a fluid state or vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Medium<S> {
    Fluid(S),
    Vacuum,
}

/// Result of sampling a solution at a point.
pub type Sample = Medium<PrimState>;

/// A centred rarefaction fan between `left_edge` and `right_edge` (values of
/// `zeta`, so the edges travel along `x = zeta t + beta t^2 / 2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RarefactionFan {
    pub family: Family,
    pub left_edge: f64,
    pub right_edge: f64,
    pub left: Medium<TransState>,
    pub right: Medium<TransState>,
}

/// A shock travelling along `x = sigma0 t + beta t^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockWave {
    pub family: Family,
    pub sigma0: f64,
    pub left: TransState,
    pub right: TransState,
}

/// One elementary wave. Every boundary curve has the form
/// `x = zeta t + beta t^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveFan {
    Rarefaction(RarefactionFan),
    Shock(ShockWave),
    Contact { sigma0: f64 },
    Vacuum { left_edge: f64, right_edge: f64 },
    /// Delta shock whose weight grows as `weight_rate * t`.
    DeltaShock { sigma0: f64, weight_rate: f64 },
}

impl WaveFan {
    pub fn kind_name(&self) -> &'static str {
        match self {
            WaveFan::Rarefaction(_) => "rarefaction",
            WaveFan::Shock(_) => "shock",
            WaveFan::Contact { .. } => "contact",
            WaveFan::Vacuum { .. } => "vacuum",
            WaveFan::DeltaShock { .. } => "delta_shock",
        }
    }

    /// Leftmost boundary speed at `t = 0`.
    pub fn left_edge(&self) -> f64 {
        match *self {
            WaveFan::Rarefaction(r) => r.left_edge,
            WaveFan::Shock(s) => s.sigma0,
            WaveFan::Contact { sigma0 } | WaveFan::DeltaShock { sigma0, .. } => sigma0,
            WaveFan::Vacuum { left_edge, .. } => left_edge,
        }
    }

    pub fn right_edge(&self) -> f64 {
        match *self {
            WaveFan::Rarefaction(r) => r.right_edge,
            WaveFan::Shock(s) => s.sigma0,
            WaveFan::Contact { sigma0 } | WaveFan::DeltaShock { sigma0, .. } => sigma0,
            WaveFan::Vacuum { right_edge, .. } => right_edge,
        }
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            WaveFan::Rarefaction(r) => Some(r.family),
            WaveFan::Shock(s) => Some(s.family),
            _ => None,
        }
    }
}

/// Complete solution of one Riemann problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannSolution {
    pub region: Region,
    pub waves: Vec<WaveFan>,
    pub intermediate: Option<IntermediateState>,
    pub problem: RiemannProblem,
    /// Non-fatal findings, e.g. a shock whose Lax inequalities hold only
    /// with equality.
    pub diagnostics: Vec<String>,
}

/// Classifies the right state by comparing `v_+` with the forward 1- and
/// 2-curves through the left state, evaluated at `rho_+`.
pub fn classify(prob: &RiemannProblem) -> Result<Region> {
    require_pressure(&prob.pressure)?;
    let (left, right) = (prob.left_trans(), prob.right_trans());
    let p = &prob.pressure;
    let w1 = forward_one_curve_v(left, right.rho, p)?;
    let w2 = forward_two_curve_v(left, right.rho, p)?;
    let tol = TIE_TOL * right.v.abs().max(1.0);
    let one_rarefaction = right.v >= w2 - tol;
    let two_rarefaction = right.v >= w1 - tol;
    Ok(match (one_rarefaction, two_rarefaction) {
        (true, true) => Region::I,
        (false, true) => Region::II,
        (true, false) => Region::III,
        (false, false) => Region::IV,
    })
}

fn require_pressure(p: &PressureParams) -> Result<()> {
    if p.is_pressureless() {
        Err(Error::Domain(
            "exact solver needs A, B not both zero; use limit_systems for the pressureless system".into(),
        ))
    } else {
        Ok(())
    }
}

/// `Phi_1(rho) - Phi_2(rho)`: composite forward 1-curve from the left state
/// minus composite backward 2-curve from the right state. Strictly
/// decreasing in `rho`; its zero is the intermediate density.
pub fn curve_gap(prob: &RiemannProblem, rho: f64) -> Result<f64> {
    require_pressure(&prob.pressure)?;
    let p = &prob.pressure;
    Ok(forward_one_curve_v(prob.left_trans(), rho, p)? - backward_curve_v(prob.right_trans(), rho, p)?)
}

/// Velocity on the wave-1 branch selected by the region.
fn phi_one(region: Region, left: TransState, rho: f64, p: &PressureParams) -> Result<f64> {
    if region.one_is_rarefaction() {
        Ok(left.v + rarefaction_integral(rho.min(left.rho), left.rho, p)?)
    } else {
        Ok(left.v - shock_jump_sq(left.rho, rho, p).sqrt())
    }
}

/// Velocity on the backward wave-2 branch selected by the region.
fn phi_two(region: Region, right: TransState, rho: f64, p: &PressureParams) -> Result<f64> {
    if region.two_is_rarefaction() {
        Ok(right.v - rarefaction_integral(rho.min(right.rho), right.rho, p)?)
    } else {
        Ok(right.v + shock_jump_sq(right.rho, rho, p).sqrt())
    }
}

enum Star {
    State(IntermediateState),
    Vacuum,
}

fn find_star(region: Region, left: TransState, right: TransState, p: &PressureParams) -> Result<Star> {
    let gap = |rho: f64| -> Result<f64> {
        let g = phi_one(region, left, rho, p)? - phi_two(region, right, rho, p)?;
        if g.is_nan() {
            return Err(Error::Bracket(format!("curve difference is NaN at rho = {rho:e}")));
        }
        Ok(g)
    };

    // The difference is strictly decreasing: positive below the root.
    let (lo, hi) = match region {
        Region::I => {
            if let (Some(il), Some(ir)) =
                (rarefaction_integral_from_vacuum(left.rho, p), rarefaction_integral_from_vacuum(right.rho, p))
            {
                if left.v + il <= right.v - ir {
                    return Ok(Star::Vacuum);
                }
            }
            let hi = left.rho.min(right.rho);
            if gap(hi)? >= 0.0 {
                return Ok(Star::State(finish_star(region, left, right, hi, p)?));
            }
            let mut lo = hi * 1e-6;
            while gap(lo)? < 0.0 {
                lo *= 0.1;
                if lo < BRACKET_FLOOR {
                    return Err(Error::Bracket("intermediate density below 1e-300".into()));
                }
            }
            (lo, hi)
        }
        Region::II | Region::III => {
            let (lo, hi) = if region == Region::II { (left.rho, right.rho) } else { (right.rho, left.rho) };
            if gap(lo)? <= 0.0 {
                return Ok(Star::State(finish_star(region, left, right, lo, p)?));
            }
            if gap(hi)? >= 0.0 {
                return Ok(Star::State(finish_star(region, left, right, hi, p)?));
            }
            (lo, hi)
        }
        Region::IV => {
            let lo = left.rho.max(right.rho);
            if gap(lo)? <= 0.0 {
                return Ok(Star::State(finish_star(region, left, right, lo, p)?));
            }
            let mut hi = lo * 10.0;
            while gap(hi)? > 0.0 {
                hi *= 10.0;
                if hi > BRACKET_CAP {
                    return Err(Error::Bracket(format!(
                        "intermediate density exceeds {BRACKET_CAP:e}; A, B are too small for these data"
                    )));
                }
            }
            (lo, hi)
        }
    };

    let rho = bisect_decreasing(lo, hi, RHO_STAR_RTOL, gap)?;
    if rho > OVERFLOW_GUARD {
        return Err(Error::Bracket(format!("intermediate density {rho:e} above overflow guard")));
    }
    Ok(Star::State(finish_star(region, left, right, rho, p)?))
}

fn finish_star(
    region: Region,
    left: TransState,
    right: TransState,
    rho: f64,
    p: &PressureParams,
) -> Result<IntermediateState> {
    let v1 = phi_one(region, left, rho, p)?;
    let v2 = phi_two(region, right, rho, p)?;
    Ok(IntermediateState { rho_star: rho, v_star: 0.5 * (v1 + v2) })
}

/// Root of a decreasing function on `[lo, hi]` with `g(lo) > 0 > g(hi)`,
/// bisecting geometrically while the bracket spans more than a factor 2.
fn bisect_decreasing<G>(mut lo: f64, mut hi: f64, rtol: f64, g: G) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    for _ in 0..2000 {
        if hi - lo <= rtol * hi {
            break;
        }
        let mid = if lo > 0.0 && hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn make_shock(family: Family, left: TransState, right: TransState, p: &PressureParams) -> WaveFan {
    let sigma0 = if left.rho == right.rho {
        // zero-strength limit: the shock travels with the characteristic
        lambda0(family, left, p)
    } else {
        shock_speed0(left, right)
    };
    WaveFan::Shock(ShockWave { family, sigma0, left, right })
}

/// Solves the Riemann problem.
pub fn solve(prob: &RiemannProblem) -> Result<RiemannSolution> {
    require_pressure(&prob.pressure)?;
    let p = &prob.pressure;
    let (left, right) = (prob.left_trans(), prob.right_trans());

    if left == right {
        return Ok(RiemannSolution {
            region: Region::I,
            waves: Vec::new(),
            intermediate: None,
            problem: *prob,
            diagnostics: Vec::new(),
        });
    }

    let region = classify(prob)?;
    let mut diagnostics = Vec::new();
    let star = find_star(region, left, right, p)?;

    let (waves, intermediate) = match star {
        Star::Vacuum => {
            let il = rarefaction_integral_from_vacuum(left.rho, p).expect("vacuum needs finite integral");
            let ir = rarefaction_integral_from_vacuum(right.rho, p).expect("vacuum needs finite integral");
            let (z1, z2) = (left.v + il, right.v - ir);
            let waves = vec![
                WaveFan::Rarefaction(RarefactionFan {
                    family: Family::One,
                    left_edge: lambda0(Family::One, left, p),
                    right_edge: z1,
                    left: Medium::Fluid(left),
                    right: Medium::Vacuum,
                }),
                WaveFan::Vacuum { left_edge: z1, right_edge: z2 },
                WaveFan::Rarefaction(RarefactionFan {
                    family: Family::Two,
                    left_edge: z2,
                    right_edge: lambda0(Family::Two, right, p),
                    left: Medium::Vacuum,
                    right: Medium::Fluid(right),
                }),
            ];
            (waves, None)
        }
        Star::State(st) => {
            let mid = st.trans();
            let w1 = if region.one_is_rarefaction() {
                WaveFan::Rarefaction(RarefactionFan {
                    family: Family::One,
                    left_edge: lambda0(Family::One, left, p),
                    right_edge: lambda0(Family::One, mid, p),
                    left: Medium::Fluid(left),
                    right: Medium::Fluid(mid),
                })
            } else {
                make_shock(Family::One, left, mid, p)
            };
            let w2 = if region.two_is_rarefaction() {
                WaveFan::Rarefaction(RarefactionFan {
                    family: Family::Two,
                    left_edge: lambda0(Family::Two, mid, p),
                    right_edge: lambda0(Family::Two, right, p),
                    left: Medium::Fluid(mid),
                    right: Medium::Fluid(right),
                })
            } else {
                make_shock(Family::Two, mid, right, p)
            };
            (vec![w1, w2], Some(st))
        }
    };

    for (i, w) in waves.iter().enumerate() {
        if let WaveFan::Shock(s) = w {
            if !entropy_ok(s.family, s.left, s.right, 0.0, p, prob.friction) {
                let msg = format!("wave {i} ({:?}-shock) fails the strict Lax inequalities", s.family);
                log::warn!("{msg}");
                diagnostics.push(msg);
            }
        }
    }

    Ok(RiemannSolution { region, waves, intermediate, problem: *prob, diagnostics })
}

impl RiemannSolution {
    /// Samples `(rho, u)` at `(x, t)`, `t > 0`.
    pub fn sample(&self, x: f64, t: f64) -> Result<Sample> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidTime(t));
        }
        let f = self.problem.friction;
        let zeta = (x - f.displacement(t)) / t;
        Ok(match self.sample_zeta(zeta)? {
            Medium::Fluid(s) => Medium::Fluid(from_trans(s, t, f)),
            Medium::Vacuum => Medium::Vacuum,
        })
    }

    /// Samples the transformed state `(rho, v)` at shifted coordinate `zeta`.
    pub fn sample_zeta(&self, zeta: f64) -> Result<Medium<TransState>> {
        let p = &self.problem.pressure;
        for w in &self.waves {
            match *w {
                WaveFan::Shock(s) => {
                    if zeta < s.sigma0 {
                        return Ok(Medium::Fluid(s.left));
                    }
                }
                WaveFan::Rarefaction(r) => {
                    if zeta <= r.left_edge {
                        return Ok(r.left);
                    }
                    if zeta < r.right_edge {
                        return fan_state(&r, zeta, p).map(Medium::Fluid);
                    }
                }
                WaveFan::Vacuum { left_edge, right_edge } => {
                    if zeta > left_edge && zeta < right_edge {
                        return Ok(Medium::Vacuum);
                    }
                }
                WaveFan::Contact { .. } | WaveFan::DeltaShock { .. } => {
                    return Err(Error::Precondition("exact solutions carry no contacts or delta shocks".into()))
                }
            }
        }
        Ok(Medium::Fluid(self.problem.right_trans()))
    }

    /// Rankine–Hugoniot residuals of wave `index`, which must be a shock.
    pub fn rh_residual(&self, index: usize) -> Result<(f64, f64)> {
        let s = self.shock(index)?;
        Ok(rh_residuals(s.left, s.right, s.sigma0, &self.problem.pressure))
    }

    /// Residuals of [`Self::rh_residual`] divided by the magnitude of the
    /// terms they balance.
    pub fn rh_relative_residual(&self, index: usize) -> Result<(f64, f64)> {
        let s = self.shock(index)?;
        let p = &self.problem.pressure;
        let (r1, r2) = rh_residuals(s.left, s.right, s.sigma0, p);
        let (s1, s2) = rh_scales(s.left, s.right, s.sigma0, p);
        Ok((r1.abs() / s1, r2.abs() / s2))
    }

    fn shock(&self, index: usize) -> Result<ShockWave> {
        match self.waves.get(index) {
            Some(WaveFan::Shock(s)) => Ok(*s),
            Some(w) => Err(Error::WrongWaveKind { index, found: w.kind_name() }),
            None => Err(Error::Precondition(format!("no wave with index {index}"))),
        }
    }
}

/// Inverts `zeta = lambda_k(rho, v(rho))` inside a fan. `lambda_1` decreases
/// and `lambda_2` increases with `rho` along their rarefaction curves.
fn fan_state(fan: &RarefactionFan, zeta: f64, p: &PressureParams) -> Result<TransState> {
    let (anchor, other) = match fan.family {
        Family::One => (fan.left, fan.right),
        Family::Two => (fan.right, fan.left),
    };
    let Medium::Fluid(anchor) = anchor else {
        return Err(Error::Precondition("rarefaction anchored at vacuum".into()));
    };
    let end_rho = match other {
        Medium::Fluid(s) => s.rho,
        Medium::Vacuum => 0.0,
    };
    let velocity = |rho: f64| -> Result<f64> {
        let i = rarefaction_integral(rho, anchor.rho, p)?;
        Ok(match fan.family {
            Family::One => anchor.v + i,
            Family::Two => anchor.v - i,
        })
    };
    // g(rho) = family-adjusted mismatch, decreasing in rho
    let g = |rho: f64| -> Result<f64> {
        let v = velocity(rho)?;
        let c = p.sound_speed_unchecked(rho);
        Ok(match fan.family {
            Family::One => v - c - zeta,
            Family::Two => zeta - (v + c),
        })
    };
    let (mut lo, mut hi) = (end_rho, anchor.rho);
    for _ in 0..2000 {
        let mid = if lo > 0.0 && hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm.abs() <= FAN_ZETA_TOL {
            lo = mid;
            hi = mid;
            break;
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let rho = 0.5 * (lo + hi);
    Ok(TransState { rho, v: velocity(rho)? })
}
