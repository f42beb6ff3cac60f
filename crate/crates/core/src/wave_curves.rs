//! Rarefaction and shock curves in the transformed `(rho, v)` phase plane.
//!
//! All curves are expressed for the conservative system in `v = u - beta t`,
//! where they do not depend on time. Characteristic speeds and shock speeds
//! carry the drift `beta t`; it cancels in every comparison between them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_density, Friction, PressureParams, TransState};
use crate::quadrature::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    Rarefaction,
    Shock,
}

/// Characteristic speed `v + beta t -/+ c(rho)` of the given family.
pub fn lambda(family: Family, s: TransState, t: f64, p: &PressureParams, f: Friction) -> Result<f64> {
    let c = p.sound_speed(s.rho)?;
    Ok(s.v + f.drift(t) + sign(family) * c)
}

/// `lambda` at `t = 0`, i.e. the characteristic speed in the shifted
/// self-similar coordinate.
pub(crate) fn lambda0(family: Family, s: TransState, p: &PressureParams) -> f64 {
    s.v + sign(family) * p.sound_speed_unchecked(s.rho)
}

fn sign(family: Family) -> f64 {
    match family {
        Family::One => -1.0,
        Family::Two => 1.0,
    }
}

/// `int_{rho_a}^{rho_b} c(rho) / rho drho` for `0 < rho_a <= rho_b`.
///
/// Integrated in `s = ln rho`, where the integrand `c(e^s)` is smooth; the
/// `rho -> 0` singularity of the Chaplygin term becomes exponential growth
/// which the adaptive rule resolves.
pub fn rarefaction_integral(rho_a: f64, rho_b: f64, p: &PressureParams) -> Result<f64> {
    check_density(rho_a)?;
    check_density(rho_b)?;
    if rho_a > rho_b {
        return Err(Error::Precondition(format!(
            "rarefaction integral needs rho_a <= rho_b, got {rho_a} > {rho_b}"
        )));
    }
    if rho_a == rho_b || p.is_pressureless() {
        return Ok(0.0);
    }
    let r = integrate(|s| p.sound_speed_unchecked(s.exp()), rho_a.ln(), rho_b.ln(), QuadOptions::default())?;
    Ok(r.value.max(0.0))
}

/// `int_0^rho c / rho` when it is finite, which happens only for
/// `B = 0, n > 1`: `2 sqrt(A n) rho^((n-1)/2) / (n - 1)`.
pub(crate) fn rarefaction_integral_from_vacuum(rho: f64, p: &PressureParams) -> Option<f64> {
    if p.b == 0.0 && p.n > 1.0 {
        Some(2.0 * (p.a * p.n).sqrt() * rho.powf(0.5 * (p.n - 1.0)) / (p.n - 1.0))
    } else {
        None
    }
}

/// Squared velocity jump across a shock between densities `rho0` and `rho`:
/// `(1/rho0 - 1/rho) (P(rho) - P(rho0))`, nonnegative since `P` increases.
pub(crate) fn shock_jump_sq(rho0: f64, rho: f64, p: &PressureParams) -> f64 {
    let dp = p.pressure_unchecked(rho) - p.pressure_unchecked(rho0);
    ((1.0 / rho0 - 1.0 / rho) * dp).max(0.0)
}

/// Velocity at density `rho` on the forward wave curve of `(family, kind)`
/// through the left state `from`.
///
/// The branch is chosen by the caller; asking for a density on the wrong
/// side of `from.rho` is a precondition error.
pub fn curve_v(family: Family, kind: CurveKind, from: TransState, rho: f64, p: &PressureParams) -> Result<f64> {
    check_density(from.rho)?;
    check_density(rho)?;
    let side_ok = match (family, kind) {
        (Family::One, CurveKind::Rarefaction) | (Family::Two, CurveKind::Shock) => rho <= from.rho,
        (Family::One, CurveKind::Shock) | (Family::Two, CurveKind::Rarefaction) => rho >= from.rho,
    };
    if !side_ok {
        return Err(Error::Precondition(format!(
            "{family:?}-{kind:?} curve through rho = {} is not defined at rho = {rho}",
            from.rho
        )));
    }
    if rho == from.rho {
        return Ok(from.v);
    }
    Ok(match (family, kind) {
        (Family::One, CurveKind::Rarefaction) => from.v + rarefaction_integral(rho, from.rho, p)?,
        (Family::Two, CurveKind::Rarefaction) => from.v + rarefaction_integral(from.rho, rho, p)?,
        // Lax conditions force v < v_- on both shock branches.
        (Family::One, CurveKind::Shock) | (Family::Two, CurveKind::Shock) => {
            from.v - shock_jump_sq(from.rho, rho, p).sqrt()
        }
    })
}

/// Velocity `v` such that `(rho, v)` is joined on its right to `to` by an
/// admissible 2-wave: a 2-rarefaction for `rho <= to.rho`, a 2-shock otherwise.
///
/// Strictly increasing in `rho`.
pub fn backward_curve_v(to: TransState, rho: f64, p: &PressureParams) -> Result<f64> {
    check_density(to.rho)?;
    check_density(rho)?;
    if rho <= to.rho {
        Ok(to.v - rarefaction_integral(rho, to.rho, p)?)
    } else {
        Ok(to.v + shock_jump_sq(to.rho, rho, p).sqrt())
    }
}

/// Composite forward 1-curve from `from`: R1 below `from.rho`, S1 above.
/// Strictly decreasing in `rho`.
pub fn forward_one_curve_v(from: TransState, rho: f64, p: &PressureParams) -> Result<f64> {
    if rho <= from.rho {
        curve_v(Family::One, CurveKind::Rarefaction, from, rho, p)
    } else {
        curve_v(Family::One, CurveKind::Shock, from, rho, p)
    }
}

/// Composite forward 2-curve from `from`: S2 below `from.rho`, R2 above.
pub fn forward_two_curve_v(from: TransState, rho: f64, p: &PressureParams) -> Result<f64> {
    if rho < from.rho {
        curve_v(Family::Two, CurveKind::Shock, from, rho, p)
    } else {
        curve_v(Family::Two, CurveKind::Rarefaction, from, rho, p)
    }
}

/// Shock speed `(rho_r v_r - rho_l v_l) / (rho_r - rho_l) + beta t`.
pub fn shock_speed(left: TransState, right: TransState, t: f64, f: Friction) -> Result<f64> {
    if left.rho == right.rho {
        return Err(Error::DegenerateJump(left.rho));
    }
    Ok(shock_speed0(left, right) + f.drift(t))
}

pub(crate) fn shock_speed0(left: TransState, right: TransState) -> f64 {
    (right.rho * right.v - left.rho * left.v) / (right.rho - left.rho)
}

/// Strict Lax inequalities for a shock of the given family joining `left`
/// to `right`.
pub fn entropy_ok(
    family: Family,
    left: TransState,
    right: TransState,
    t: f64,
    p: &PressureParams,
    f: Friction,
) -> bool {
    let Ok(sigma) = shock_speed(left, right, t, f) else {
        return false;
    };
    let speeds = (
        lambda(Family::One, left, t, p, f),
        lambda(Family::Two, left, t, p, f),
        lambda(Family::One, right, t, p, f),
        lambda(Family::Two, right, t, p, f),
    );
    let (Ok(l1_left), Ok(l2_left), Ok(l1_right), Ok(l2_right)) = speeds else {
        return false;
    };
    match family {
        Family::One => sigma < l1_left && l1_right < sigma && sigma < l2_right,
        Family::Two => l1_left < sigma && sigma < l2_left && l2_right < sigma,
    }
}

/// Rankine–Hugoniot residuals `(sigma [rho] - [rho v], sigma [rho v] - [rho v^2 + P])`
/// at `t = 0` for a discontinuity of speed `sigma0`.
pub fn rh_residuals(left: TransState, right: TransState, sigma0: f64, p: &PressureParams) -> (f64, f64) {
    let (ml, mr) = (left.rho * left.v, right.rho * right.v);
    let r1 = sigma0 * (right.rho - left.rho) - (mr - ml);
    let fl = ml * left.v + p.pressure_unchecked(left.rho);
    let fr = mr * right.v + p.pressure_unchecked(right.rho);
    let r2 = sigma0 * (mr - ml) - (fr - fl);
    (r1, r2)
}

/// Magnitudes against which [`rh_residuals`] are made relative.
pub fn rh_scales(left: TransState, right: TransState, sigma0: f64, p: &PressureParams) -> (f64, f64) {
    let (ml, mr) = (left.rho * left.v, right.rho * right.v);
    let s1 = sigma0.abs() * (left.rho + right.rho) + ml.abs() + mr.abs();
    let s2 = sigma0.abs() * (ml.abs() + mr.abs())
        + (ml * left.v).abs()
        + (mr * right.v).abs()
        + p.pressure_unchecked(left.rho).abs()
        + p.pressure_unchecked(right.rho).abs();
    (s1.max(f64::MIN_POSITIVE), s2.max(f64::MIN_POSITIVE))
}
