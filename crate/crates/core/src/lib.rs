//! Exact Riemann solver and flux-approximation limit lab for the extended
//! Chaplygin gas with Coulomb-like friction,
//!
//! ```text
//! rho_t + (rho u)_x = 0,
//! (rho u)_t + (rho u^2 + A rho^n - B rho^(-alpha))_x = beta rho.
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: pressure law, states and the friction transformation `v = u - beta t`.
//! * [`wave_curves`]: rarefaction and shock curves, characteristic and shock speeds.
//! * [`exact_solver`]: region classification, intermediate state, sampling.
//! * [`limit_systems`]: delta shocks and vacuum of the pressureless and
//!   generalized Chaplygin limits.
//! * [`limit_lab`]: sweeps of `A, B -> 0` and verdicts against the limits.
//! * [`fv_oracle`]: an independent Lax–Friedrichs finite-volume solver.
//! * [`cli`]: the `chaplygin` command-line tool.
//!
//! ```
//! use chaplygin::exact_solver::{solve, Region};
//! use chaplygin::model::{Friction, PressureParams, PrimState, RiemannProblem};
//!
//! let prob = RiemannProblem::new(
//!     PrimState::new(1.0, 1.0)?,
//!     PrimState::new(1.0, -1.0)?,
//!     PressureParams::new(1.0, 1.0, 1.0, 1.0)?,
//!     Friction::new(0.5)?,
//! )?;
//! let sol = solve(&prob)?;
//! assert_eq!(sol.region, Region::IV);
//! assert!(sol.intermediate.unwrap().v_star.abs() < 1e-12);
//! # Ok::<(), chaplygin::error::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod exact_solver;
pub mod fv_oracle;
pub mod limit_lab;
pub mod limit_systems;
pub mod model;
pub mod quadrature;
pub mod wave_curves;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/model.md")]
    struct Model;
    #[doc = include_str!("../../../book/src/wave-curves.md")]
    struct WaveCurves;
    #[doc = include_str!("../../../book/src/exact-solver.md")]
    struct ExactSolver;
    #[doc = include_str!("../../../book/src/limit-systems.md")]
    struct LimitSystems;
    #[doc = include_str!("../../../book/src/limit-lab.md")]
    struct LimitLab;
    #[doc = include_str!("../../../book/src/fv-oracle.md")]
    struct FvOracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
