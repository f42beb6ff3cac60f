//! State types, the extended Chaplygin pressure law and the friction
//! transformation between physical and transformed velocities.
//!
//! The physical system is
//!
//! ```text
//! rho_t + (rho u)_x = 0
//! (rho u)_t + (rho u^2 + P)_x = beta rho,      P = A rho^n - B / rho^alpha
//! ```
//!
//! Writing `v = u - beta t` turns it into a conservative system whose
//! Riemann solutions are self-similar in `zeta = (x - beta t^2 / 2) / t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of `P(rho) = A rho^n - B rho^(-alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureParams {
    pub a: f64,
    pub b: f64,
    pub n: f64,
    pub alpha: f64,
}

impl PressureParams {
    /// Validates `A, B >= 0`, `1 <= n <= 3` and `0 < alpha <= 1`.
    ///
    /// `A = B = 0` is accepted here (it is the pressureless limit); the
    /// exact solver and the sound speed reject it.
    pub fn new(a: f64, b: f64, n: f64, alpha: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParams(format!("A must be finite and >= 0, got {a}")));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidParams(format!("B must be finite and >= 0, got {b}")));
        }
        if !(1.0..=3.0).contains(&n) {
            return Err(Error::InvalidParams(format!("n must lie in [1, 3], got {n}")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParams(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { a, b, n, alpha })
    }

    /// Same parameters with `A` and `B` replaced.
    pub fn with_ab(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, self.n, self.alpha)
    }

    pub fn is_pressureless(&self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.pressure_unchecked(rho))
    }

    pub fn sound_speed(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        if self.is_pressureless() {
            return Err(Error::Domain("sound speed undefined for A = B = 0".into()));
        }
        Ok(self.sound_speed_unchecked(rho))
    }

    /// `dP/drho`, equal to the squared sound speed.
    pub(crate) fn dp_drho(&self, rho: f64) -> f64 {
        let mut d = 0.0;
        if self.a != 0.0 {
            d += self.a * self.n * rho.powf(self.n - 1.0);
        }
        if self.b != 0.0 {
            d += self.alpha * self.b * rho.powf(-self.alpha - 1.0);
        }
        d
    }

    pub(crate) fn pressure_unchecked(&self, rho: f64) -> f64 {
        let mut p = 0.0;
        if self.a != 0.0 {
            p += self.a * rho.powf(self.n);
        }
        if self.b != 0.0 {
            p -= self.b * rho.powf(-self.alpha);
        }
        p
    }

    pub(crate) fn sound_speed_unchecked(&self, rho: f64) -> f64 {
        self.dp_drho(rho).sqrt()
    }
}

/// Free-function form of [`PressureParams::pressure`].
pub fn pressure(rho: f64, p: &PressureParams) -> Result<f64> {
    p.pressure(rho)
}

/// Free-function form of [`PressureParams::sound_speed`].
pub fn sound_speed(rho: f64, p: &PressureParams) -> Result<f64> {
    p.sound_speed(rho)
}

/// Coulomb-like friction constant `beta` (a constant acceleration).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Friction {
    pub beta: f64,
}

impl Friction {
    pub const NONE: Friction = Friction { beta: 0.0 };

    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidParams(format!("beta must be finite, got {beta}")));
        }
        Ok(Self { beta })
    }

    /// Velocity drift `beta t` accumulated by time `t`.
    pub fn drift(&self, t: f64) -> f64 {
        self.beta * t
    }

    /// Displacement `beta t^2 / 2` of every wave path at time `t`.
    pub fn displacement(&self, t: f64) -> f64 {
        0.5 * self.beta * t * t
    }
}

/// Physical state `(rho, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimState {
    pub rho: f64,
    pub u: f64,
}

impl PrimState {
    pub fn new(rho: f64, u: f64) -> Result<Self> {
        check_density(rho)?;
        if !u.is_finite() {
            return Err(Error::Domain(format!("velocity must be finite, got {u}")));
        }
        Ok(Self { rho, u })
    }
}

/// Transformed state `(rho, v)` with `v = u - beta t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransState {
    pub rho: f64,
    pub v: f64,
}

impl TransState {
    pub fn new(rho: f64, v: f64) -> Result<Self> {
        check_density(rho)?;
        if !v.is_finite() {
            return Err(Error::Domain(format!("velocity must be finite, got {v}")));
        }
        Ok(Self { rho, v })
    }
}

pub fn to_trans(s: PrimState, t: f64, f: Friction) -> TransState {
    TransState { rho: s.rho, v: s.u - f.drift(t) }
}

pub fn from_trans(s: TransState, t: f64, f: Friction) -> PrimState {
    PrimState { rho: s.rho, u: s.v + f.drift(t) }
}

/// Riemann data `(rho, u)(x, 0) = left` for `x < 0`, `right` for `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannProblem {
    pub left: PrimState,
    pub right: PrimState,
    pub pressure: PressureParams,
    pub friction: Friction,
}

impl RiemannProblem {
    pub fn new(
        left: PrimState,
        right: PrimState,
        pressure: PressureParams,
        friction: Friction,
    ) -> Result<Self> {
        check_density(left.rho)?;
        check_density(right.rho)?;
        Ok(Self { left, right, pressure, friction })
    }

    /// Left state at `t = 0` in transformed variables (`v = u` there).
    pub fn left_trans(&self) -> TransState {
        to_trans(self.left, 0.0, self.friction)
    }

    pub fn right_trans(&self) -> TransState {
        to_trans(self.right, 0.0, self.friction)
    }
}

pub(crate) fn check_density(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("density must be finite and positive, got {rho}")))
    }
}
