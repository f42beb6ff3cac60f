//! Closed-form Riemann solutions of the two limiting systems with friction:
//! the transportation equations (`A = B = 0`) and the generalized Chaplygin
//! system (`A = 0`), restricted to the delta-shock branch for the latter.
//!
//! A delta shock is described by its path `x(t) = sigma0 t + beta t^2 / 2`,
//! the velocity it carries `u_delta(t) = sigma0 + beta t`, and a weight
//! `w(t) = weight_coeff * t` multiplying the Dirac mass on the path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_solver::{Medium, Sample};
use crate::model::{check_density, Friction, PrimState};

/// Which limit system a delta shock belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LimitSystem {
    Pressureless,
    GChaplygin { b: f64, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaShockSolution {
    pub sigma0: f64,
    pub beta: f64,
    pub weight_coeff: f64,
    pub left: PrimState,
    pub right: PrimState,
}

impl DeltaShockSolution {
    pub fn weight(&self, t: f64) -> f64 {
        self.weight_coeff * t
    }

    pub fn u_delta(&self, t: f64) -> f64 {
        self.sigma0 + self.beta * t
    }

    pub fn path(&self, t: f64) -> f64 {
        self.sigma0 * t + 0.5 * self.beta * t * t
    }

    /// Density and velocity off the delta path; on the path the right
    /// state is returned (the singular part is [`Self::weight`]).
    pub fn sample(&self, x: f64, t: f64) -> Result<Sample> {
        check_time(t)?;
        let side = if x < self.path(t) { self.left } else { self.right };
        Ok(Medium::Fluid(drifted(side, t, self.beta)))
    }
}

/// Riemann solution of the transportation equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PressurelessSolution {
    /// `u_- < u_+`: the states separate along `x = u_± t + beta t^2 / 2`
    /// with vacuum in between.
    TwoContactsWithVacuum { left: PrimState, right: PrimState, beta: f64 },
    /// `u_- = u_+`: one contact along `x = u t + beta t^2 / 2`.
    SingleContact { left: PrimState, right: PrimState, beta: f64 },
    Delta(DeltaShockSolution),
}

impl PressurelessSolution {
    pub fn sample(&self, x: f64, t: f64) -> Result<Sample> {
        check_time(t)?;
        match *self {
            PressurelessSolution::TwoContactsWithVacuum { left, right, beta } => {
                let shift = 0.5 * beta * t * t;
                Ok(if x <= left.u * t + shift {
                    Medium::Fluid(drifted(left, t, beta))
                } else if x >= right.u * t + shift {
                    Medium::Fluid(drifted(right, t, beta))
                } else {
                    Medium::Vacuum
                })
            }
            PressurelessSolution::SingleContact { left, right, beta } => {
                let side = if x < left.u * t + 0.5 * beta * t * t { left } else { right };
                Ok(Medium::Fluid(drifted(side, t, beta)))
            }
            PressurelessSolution::Delta(d) => d.sample(x, t),
        }
    }
}

/// Residuals of the generalized Rankine–Hugoniot system at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GRHResidual {
    pub r_mass: f64,
    pub r_momentum: f64,
}

fn drifted(s: PrimState, t: f64, beta: f64) -> PrimState {
    PrimState { rho: s.rho, u: s.u + beta * t }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

fn check_states(left: PrimState, right: PrimState) -> Result<()> {
    check_density(left.rho)?;
    check_density(right.rho)?;
    if !(left.u.is_finite() && right.u.is_finite()) {
        return Err(Error::Domain("velocities must be finite".into()));
    }
    Ok(())
}

/// Initial speed `(sqrt(rho_-) u_- + sqrt(rho_+) u_+) / (sqrt(rho_-) + sqrt(rho_+))`
/// and weight rate `sqrt(rho_- rho_+) (u_- - u_+)` of the pressureless delta shock.
pub fn pressureless_delta_targets(left: PrimState, right: PrimState) -> (f64, f64) {
    let (sl, sr) = (left.rho.sqrt(), right.rho.sqrt());
    let sigma0 = (sl * left.u + sr * right.u) / (sl + sr);
    let weight = sl * sr * (left.u - right.u);
    (sigma0, weight)
}

/// Riemann solution of the transportation equations with friction.
pub fn solve_pressureless(left: PrimState, right: PrimState, f: Friction) -> Result<PressurelessSolution> {
    check_states(left, right)?;
    let beta = f.beta;
    Ok(if left.u < right.u {
        PressurelessSolution::TwoContactsWithVacuum { left, right, beta }
    } else if left.u == right.u {
        PressurelessSolution::SingleContact { left, right, beta }
    } else {
        let (sigma0, weight_coeff) = pressureless_delta_targets(left, right);
        PressurelessSolution::Delta(DeltaShockSolution { sigma0, beta, weight_coeff, left, right })
    })
}

/// Inputs to the delta-formation predicate of the generalized Chaplygin
/// system, exposed so that both candidate conditions can be reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GcDeltaConditions {
    /// `(u_+ - u_-)^2 - (1/rho_+ - 1/rho_-)(B/rho_+^alpha - B/rho_-^alpha)`.
    pub discriminant: f64,
    /// Open interval `(u_+ + sqrt(alpha B) rho_+^{-(alpha+1)/2}, u_- - sqrt(alpha B) rho_-^{-(alpha+1)/2})`.
    pub entropy_window: (f64, f64),
    /// Same interval built with `sqrt(B)` in place of `sqrt(alpha B)`,
    /// reported as a boolean "interval nonempty or degenerate".
    pub sqrt_b_condition: bool,
}

impl GcDeltaConditions {
    pub fn new(left: PrimState, right: PrimState, b: f64, alpha: f64) -> Self {
        let (rl, rr) = (left.rho, right.rho);
        let discriminant =
            (right.u - left.u).powi(2) - (1.0 / rr - 1.0 / rl) * (b * rr.powf(-alpha) - b * rl.powf(-alpha));
        let e = -(alpha + 1.0) / 2.0;
        let entropy_window = (right.u + (alpha * b).sqrt() * rr.powf(e), left.u - (alpha * b).sqrt() * rl.powf(e));
        let sqrt_b_condition = right.u + b.sqrt() * rr.powf(e) <= left.u - b.sqrt() * rl.powf(e);
        Self { discriminant, entropy_window, sqrt_b_condition }
    }

    pub fn in_window(&self, sigma0: f64) -> bool {
        self.entropy_window.0 < sigma0 && sigma0 < self.entropy_window.1
    }
}

/// Initial speed and weight rate of the generalized Chaplygin delta shock,
/// without checking any formation condition. The discriminant must be
/// nonnegative.
pub fn gchaplygin_delta_targets(left: PrimState, right: PrimState, b: f64, alpha: f64) -> Result<(f64, f64)> {
    let (rl, rr) = (left.rho, right.rho);
    if rl == rr {
        return Ok((0.5 * (left.u + right.u), rl * (left.u - right.u)));
    }
    let disc = GcDeltaConditions::new(left, right, b, alpha).discriminant;
    if disc < 0.0 {
        return Err(Error::ConditionNotMet(format!("negative discriminant {disc:e}")));
    }
    let w0 = (rr * rl * disc).sqrt();
    let sigma0 = (rr * right.u - rl * left.u + w0) / (rr - rl);
    Ok((sigma0, w0))
}

/// Delta-shock solution of the generalized Chaplygin system with friction.
///
/// Requires a nonnegative discriminant and the strict entropy window to
/// contain `sigma0`. Identical states give a zero-strength delta travelling
/// with the common velocity.
pub fn solve_gchaplygin_delta(
    left: PrimState,
    right: PrimState,
    b: f64,
    alpha: f64,
    f: Friction,
) -> Result<DeltaShockSolution> {
    check_states(left, right)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParams(format!("B must be positive, got {b}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParams(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let beta = f.beta;
    if left == right {
        return Ok(DeltaShockSolution { sigma0: left.u, beta, weight_coeff: 0.0, left, right });
    }
    let cond = GcDeltaConditions::new(left, right, b, alpha);
    let (sigma0, weight_coeff) = gchaplygin_delta_targets(left, right, b, alpha)?;
    if !cond.in_window(sigma0) {
        let (lo, hi) = cond.entropy_window;
        return Err(Error::ConditionNotMet(format!(
            "sigma0 = {sigma0} outside the entropy window ({lo}, {hi}); sqrt(B) condition {}",
            if cond.sqrt_b_condition { "holds" } else { "fails" }
        )));
    }
    Ok(DeltaShockSolution { sigma0, beta, weight_coeff, left, right })
}

/// Residuals of the generalized Rankine–Hugoniot conditions
///
/// ```text
/// dw/dt           = sigma(t) [rho] - [rho u]
/// d(w u_delta)/dt = sigma(t) [rho u] - [rho u^2 + P] + beta w
/// ```
///
/// evaluated at time `t` from the closed forms, with `P = 0` or
/// `P = -B / rho^alpha`.
pub fn grh_residual(sol: &DeltaShockSolution, t: f64, system: LimitSystem) -> Result<GRHResidual> {
    check_time(t)?;
    let beta = sol.beta;
    let w0 = sol.weight_coeff;
    let (l, r) = (drifted(sol.left, t, beta), drifted(sol.right, t, beta));
    let sigma = sol.sigma0 + beta * t;
    let jump_rho = r.rho - l.rho;
    let jump_m = r.rho * r.u - l.rho * l.u;
    let mut jump_flux = r.rho * r.u * r.u - l.rho * l.u * l.u;
    if let LimitSystem::GChaplygin { b, alpha } = system {
        jump_flux -= b * (r.rho.powf(-alpha) - l.rho.powf(-alpha));
    }
    let dw = w0;
    let d_wu = w0 * sol.sigma0 + 2.0 * beta * w0 * t;
    Ok(GRHResidual {
        r_mass: dw - (sigma * jump_rho - jump_m),
        r_momentum: d_wu - (sigma * jump_m - jump_flux + beta * sol.weight(t)),
    })
}
