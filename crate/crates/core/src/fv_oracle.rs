//! First-order finite-volume solver for the physical system with friction,
//! used as an independent check on the exact solver.
//!
//! Each step applies the local Lax–Friedrichs (Rusanov) flux with wave-speed
//! bound `|u| + c`, then integrates the friction source exactly:
//! `rho u <- rho u + beta rho dt`.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_solver::{solve, Medium, RiemannSolution, WaveFan};
use crate::limit_systems::pressureless_delta_targets;
use crate::model::{Friction, PressureParams, RiemannProblem};

/// Cells in the delta-probe window.
pub const PROBE_WINDOW_CELLS: usize = 10;

/// Uniform grid on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
    pub cfl: f64,
}

impl Grid1D {
    pub const DEFAULT_CFL: f64 = 0.45;

    pub fn new(x_min: f64, x_max: f64, cells: usize, cfl: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidParams(format!("need x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if cells < 10 {
            return Err(Error::InvalidParams(format!("need at least 10 cells, got {cells}")));
        }
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::InvalidParams(format!("CFL number must lie in (0, 1), got {cfl}")));
        }
        Ok(Self { x_min, x_max, cells, cfl })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.center(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    /// Zero-gradient ghost cells.
    Outflow,
    Periodic,
}

/// Cell averages of `(rho, rho u)` at `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct FvState {
    pub rho: Vec<f64>,
    pub mom: Vec<f64>,
    pub time: f64,
}

impl FvState {
    /// Samples `init(x) -> (rho, u)` at cell centers.
    pub fn from_fn(grid: &Grid1D, init: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let mut rho = Vec::with_capacity(grid.cells);
        let mut mom = Vec::with_capacity(grid.cells);
        for (i, x) in grid.centers().into_iter().enumerate() {
            let (r, u) = init(x);
            if !(r > 0.0 && r.is_finite() && u.is_finite()) {
                return Err(Error::Positivity { cell: i, time: 0.0, rho: r });
            }
            rho.push(r);
            mom.push(r * u);
        }
        Ok(Self { rho, mom, time: 0.0 })
    }

    /// Riemann data with the jump at `x = 0`.
    pub fn riemann(grid: &Grid1D, prob: &RiemannProblem) -> Result<Self> {
        let (l, r) = (prob.left, prob.right);
        Self::from_fn(grid, |x| if x < 0.0 { (l.rho, l.u) } else { (r.rho, r.u) })
    }

    pub fn velocity(&self, i: usize) -> f64 {
        self.mom[i] / self.rho[i]
    }

    pub fn total_mass(&self, dx: f64) -> f64 {
        self.rho.iter().sum::<f64>() * dx
    }

    pub fn total_momentum(&self, dx: f64) -> f64 {
        self.mom.iter().sum::<f64>() * dx
    }
}

/// Grid, pressure law, friction and boundary treatment of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvSolver {
    pub grid: Grid1D,
    pub pressure: PressureParams,
    pub friction: Friction,
    pub boundary: Boundary,
}

#[inline]
fn physical_flux(rho: f64, mom: f64, p: &PressureParams) -> (f64, f64, f64) {
    let u = mom / rho;
    let c = p.sound_speed_unchecked(rho);
    (mom, mom * u + p.pressure_unchecked(rho), u.abs() + c)
}

impl FvSolver {
    pub fn new(grid: Grid1D, pressure: PressureParams, friction: Friction, boundary: Boundary) -> Self {
        Self { grid, pressure, friction, boundary }
    }

    /// Largest `|u| + c` over the cells.
    pub fn max_speed(&self, state: &FvState) -> f64 {
        state
            .rho
            .iter()
            .zip(&state.mom)
            .map(|(&r, &m)| (m / r).abs() + self.pressure.sound_speed_unchecked(r))
            .fold(0.0, f64::max)
    }

    /// Advances one CFL-limited step, never past `t_end`. Returns the step size.
    pub fn step(&self, state: &mut FvState, t_end: f64) -> Result<f64> {
        let n = self.grid.cells;
        let dx = self.grid.dx();
        let p = &self.pressure;
        let speed = self.max_speed(state);
        let dt_cfl = if speed > 0.0 { self.grid.cfl * dx / speed } else { f64::INFINITY };
        if !(dt_cfl > 1e-14 * state.time.abs().max(1.0)) {
            return Err(Error::CflCollapse { dt: dt_cfl, time: state.time });
        }
        let dt = dt_cfl.min(t_end - state.time);
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidTime(t_end));
        }

        let cell = |i: isize| -> usize {
            match self.boundary {
                Boundary::Outflow => i.clamp(0, n as isize - 1) as usize,
                Boundary::Periodic => i.rem_euclid(n as isize) as usize,
            }
        };
        // face k sits between cells k-1 and k
        let mut f_rho = vec![0.0; n + 1];
        let mut f_mom = vec![0.0; n + 1];
        let mut right = {
            let j = cell(-1);
            (state.rho[j], state.mom[j], physical_flux(state.rho[j], state.mom[j], p))
        };
        for k in 0..=n {
            let left = right;
            let j = cell(k as isize);
            right = (state.rho[j], state.mom[j], physical_flux(state.rho[j], state.mom[j], p));
            let (rl, ml, (fl0, fl1, sl)) = left;
            let (rr, mr, (fr0, fr1, sr)) = right;
            let a = sl.max(sr);
            f_rho[k] = 0.5 * (fl0 + fr0) - 0.5 * a * (rr - rl);
            f_mom[k] = 0.5 * (fl1 + fr1) - 0.5 * a * (mr - ml);
        }

        let ratio = dt / dx;
        let rho_new: Vec<f64> = (0..n).map(|i| state.rho[i] - ratio * (f_rho[i + 1] - f_rho[i])).collect();
        if let Some(i) = rho_new.iter().position(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::Positivity { cell: i, time: state.time + dt, rho: rho_new[i] });
        }
        let beta_dt = self.friction.beta * dt;
        for i in 0..n {
            state.mom[i] += beta_dt * rho_new[i] - ratio * (f_mom[i + 1] - f_mom[i]);
        }
        state.rho = rho_new;
        state.time += dt;
        Ok(dt)
    }

    /// Steps until `t_end`; returns the number of steps taken.
    pub fn run(&self, state: &mut FvState, t_end: f64) -> Result<usize> {
        if !(t_end >= state.time) || !t_end.is_finite() {
            return Err(Error::InvalidTime(t_end));
        }
        let mut steps = 0;
        while state.time < t_end {
            self.step(state, t_end)?;
            steps += 1;
        }
        Ok(steps)
    }
}

/// Final state of a Riemann run.
#[derive(Debug, Clone, PartialEq)]
pub struct FvRun {
    pub solver: FvSolver,
    pub state: FvState,
    pub steps: usize,
}

impl FvRun {
    /// Writes `x,rho,u` rows for every cell.
    pub fn write_profile_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,rho,u")?;
        for i in 0..self.solver.grid.cells {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e}",
                self.solver.grid.center(i),
                self.state.rho[i],
                self.state.velocity(i)
            )?;
        }
        Ok(())
    }
}

/// Relative deviation of the outermost cells from the undisturbed far-field
/// states above which a run counts as boundary-contaminated.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Evolves Riemann data with outflow boundaries to `t_end` and checks that no
/// wave has reached either boundary.
pub fn run_riemann(prob: &RiemannProblem, grid: Grid1D, t_end: f64) -> Result<FvRun> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidTime(t_end));
    }
    let solver = FvSolver::new(grid, prob.pressure, prob.friction, Boundary::Outflow);
    let mut state = FvState::riemann(&grid, prob)?;
    let steps = solver.run(&mut state, t_end)?;
    check_far_field(&state, prob)?;
    Ok(FvRun { solver, state, steps })
}

fn check_far_field(state: &FvState, prob: &RiemannProblem) -> Result<()> {
    let n = state.rho.len();
    let drift = prob.friction.drift(state.time);
    let probes = [(0usize, prob.left, "left"), (n - 1, prob.right, "right")];
    for (i, s, side) in probes {
        let du = (state.velocity(i) - (s.u + drift)).abs();
        let dr = (state.rho[i] - s.rho).abs();
        if dr > BOUNDARY_TOL * s.rho || du > BOUNDARY_TOL * (1.0 + s.u.abs() + drift.abs()) {
            return Err(Error::Boundary {
                time: state.time,
                detail: format!("{side} boundary cell deviates (d_rho = {dr:e}, d_u = {du:e}); enlarge the domain"),
            });
        }
    }
    Ok(())
}

/// Errors of a finite-volume run against the exact solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactComparison {
    /// `sum |rho - rho_exact| dx`.
    pub l1_rho: f64,
    /// `sum |u - u_exact| dx` over non-vacuum cells.
    pub l1_u: f64,
    /// Total variation of the exact density sampled at the cell centers.
    pub tv_rho: f64,
    /// Numerical minus exact position of the strongest shock, if any.
    pub shock_offset: Option<f64>,
    pub steps: usize,
}

/// Runs the oracle and measures it against [`crate::exact_solver`].
pub fn compare_exact(prob: &RiemannProblem, t_end: f64, grid: Grid1D) -> Result<ExactComparison> {
    let exact = solve(prob)?;
    let run = run_riemann(prob, grid, t_end)?;
    compare_run(&run, &exact)
}

/// Compares an existing run with an exact solution at the run's final time.
pub fn compare_run(run: &FvRun, exact: &RiemannSolution) -> Result<ExactComparison> {
    let grid = run.solver.grid;
    let t = run.state.time;
    let dx = grid.dx();
    let mut exact_rho = Vec::with_capacity(grid.cells);
    let (mut l1_rho, mut l1_u) = (0.0, 0.0);
    for i in 0..grid.cells {
        match exact.sample(grid.center(i), t)? {
            Medium::Fluid(s) => {
                l1_rho += (run.state.rho[i] - s.rho).abs() * dx;
                l1_u += (run.state.velocity(i) - s.u).abs() * dx;
                exact_rho.push(s.rho);
            }
            Medium::Vacuum => {
                l1_rho += run.state.rho[i] * dx;
                exact_rho.push(0.0);
            }
        }
    }
    let tv_rho = exact_rho.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok(ExactComparison { l1_rho, l1_u, tv_rho, shock_offset: shock_offset(run, exact), steps: run.steps })
}

fn shock_offset(run: &FvRun, exact: &RiemannSolution) -> Option<f64> {
    let shock = exact
        .waves
        .iter()
        .filter_map(|w| match w {
            WaveFan::Shock(s) => Some(*s),
            _ => None,
        })
        .max_by(|a, b| (a.right.rho - a.left.rho).abs().total_cmp(&(b.right.rho - b.left.rho).abs()))?;
    let grid = run.solver.grid;
    let t = run.state.time;
    let x_exact = shock.sigma0 * t + exact.problem.friction.displacement(t);
    let mid = 0.5 * (shock.left.rho + shock.right.rho);
    // search a neighbourhood a few percent of the domain wide
    let reach = 0.05 * (grid.x_max - grid.x_min);
    let rho = &run.state.rho;
    let mut best: Option<f64> = None;
    for i in 0..grid.cells - 1 {
        let (xa, xb) = (grid.center(i), grid.center(i + 1));
        if (xa - x_exact).abs() > reach {
            continue;
        }
        let (ra, rb) = (rho[i] - mid, rho[i + 1] - mid);
        if ra == 0.0 || ra * rb < 0.0 {
            let x = xa + (xb - xa) * ra / (ra - rb);
            if best.is_none_or(|b| (x - x_exact).abs() < (b - x_exact).abs()) {
                best = Some(x);
            }
        }
    }
    best.map(|x| x - x_exact)
}

/// Density peak and windowed mass around the pressureless delta path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaProbe {
    pub max_density: f64,
    pub local_mass: f64,
    /// `x(T) = sigma0 T + beta T^2 / 2` of the pressureless delta shock.
    pub path_position: f64,
    pub window_width: f64,
    /// Pressureless delta weight `w(T)` for comparison with `local_mass`.
    pub target_weight: f64,
    pub steps: usize,
}

/// Runs the oracle on compressive data and integrates the density over
/// [`PROBE_WINDOW_CELLS`] cells centred on the pressureless delta path.
pub fn concentration_probe(prob: &RiemannProblem, t_end: f64, grid: Grid1D) -> Result<DeltaProbe> {
    if !(prob.left.u > prob.right.u) {
        return Err(Error::Precondition("delta probe needs u_- > u_+".into()));
    }
    let run = run_riemann(prob, grid, t_end)?;
    Ok(probe_run(&run, prob))
}

/// Probe measurements of an existing run.
pub fn probe_run(run: &FvRun, prob: &RiemannProblem) -> DeltaProbe {
    let grid = run.solver.grid;
    let t = run.state.time;
    let (sigma0, weight) = pressureless_delta_targets(prob.left, prob.right);
    let x = sigma0 * t + prob.friction.displacement(t);
    let dx = grid.dx();
    let n = grid.cells;
    let half = PROBE_WINDOW_CELLS / 2;
    // the window [x - 5 dx, x + 5 dx] covers cells whose centers lie within it
    let start_f = ((x - grid.x_min) / dx - half as f64).round();
    let start = (start_f.max(0.0) as usize).min(n - PROBE_WINDOW_CELLS);
    let local_mass = run.state.rho[start..start + PROBE_WINDOW_CELLS].iter().sum::<f64>() * dx;
    DeltaProbe {
        max_density: run.state.rho.iter().copied().fold(0.0, f64::max),
        local_mass,
        path_position: x,
        window_width: PROBE_WINDOW_CELLS as f64 * dx,
        target_weight: weight * t,
        steps: run.steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PrimState;

    fn problem(rl: f64, ul: f64, rr: f64, ur: f64, a: f64, b: f64, beta: f64) -> RiemannProblem {
        RiemannProblem::new(
            PrimState::new(rl, ul).unwrap(),
            PrimState::new(rr, ur).unwrap(),
            PressureParams::new(a, b, 1.0, 1.0).unwrap(),
            Friction::new(beta).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(0.0, 1.0, 9, 0.5).is_err());
        assert!(Grid1D::new(1.0, 1.0, 100, 0.5).is_err());
        assert!(Grid1D::new(0.0, 1.0, 100, 1.0).is_err());
        let g = Grid1D::new(-1.0, 1.0, 10, 0.5).unwrap();
        assert!((g.dx() - 0.2).abs() < 1e-15);
        assert!((g.center(0) + 0.9).abs() < 1e-15);
    }

    #[test]
    fn constant_state_is_preserved() {
        let prob = problem(1.7, -0.3, 1.7, -0.3, 1.0, 0.5, 0.0);
        let grid = Grid1D::new(-1.0, 1.0, 50, 0.45).unwrap();
        let run = run_riemann(&prob, grid, 1.0).unwrap();
        for i in 0..50 {
            assert_eq!(run.state.rho[i], 1.7);
            assert!((run.state.velocity(i) + 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_state_with_friction_drifts_exactly() {
        let beta = 2.5;
        let prob = problem(0.8, 0.4, 0.8, 0.4, 1.0, 0.5, beta);
        let grid = Grid1D::new(-1.0, 1.0, 40, 0.45).unwrap();
        let run = run_riemann(&prob, grid, 0.75).unwrap();
        assert_eq!(run.state.time, 0.75);
        for i in 0..40 {
            assert_eq!(run.state.rho[i], 0.8);
            assert!((run.state.velocity(i) - (0.4 + beta * 0.75)).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_mass_is_conserved() {
        let grid = Grid1D::new(0.0, 1.0, 200, 0.45).unwrap();
        let p = PressureParams::new(1.0, 0.5, 2.0, 0.5).unwrap();
        let solver = FvSolver::new(grid, p, Friction::new(1.0).unwrap(), Boundary::Periodic);
        let tau = std::f64::consts::TAU;
        let mut s = FvState::from_fn(&grid, |x| (1.0 + 0.5 * (tau * x).sin(), 0.3 * (tau * x).cos())).unwrap();
        let m0 = s.total_mass(grid.dx());
        let mut steps = 0;
        while steps < 1000 {
            solver.step(&mut s, f64::MAX).unwrap();
            steps += 1;
        }
        let m1 = s.total_mass(grid.dx());
        assert!(((m1 - m0) / m0).abs() < 1e-12, "{m0} -> {m1}");
    }

    #[test]
    fn boundary_contamination_is_detected() {
        let prob = problem(1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 0.0);
        let grid = Grid1D::new(-0.2, 0.2, 40, 0.45).unwrap();
        assert!(matches!(run_riemann(&prob, grid, 1.0), Err(Error::Boundary { .. })));
    }

    #[test]
    fn positivity_loss_aborts_without_touching_state() {
        let grid = Grid1D::new(0.0, 1.0, 20, 0.45).unwrap();
        let p = PressureParams::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let solver = FvSolver::new(grid, p, Friction::NONE, Boundary::Outflow);
        let mut s = FvState::from_fn(&grid, |_| (1.0, 0.0)).unwrap();
        s.rho[3] = -100.0;
        let before = s.clone();
        let err = solver.step(&mut s, 1.0).unwrap_err();
        assert!(matches!(err, Error::Positivity { cell: 2..=4, .. }), "{err:?}");
        assert_eq!(s, before);
    }

    #[test]
    fn shock_is_located() {
        let prob = problem(1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 0.0);
        let grid = Grid1D::new(-2.0, 2.0, 800, 0.45).unwrap();
        let cmp = compare_exact(&prob, 0.5, grid).unwrap();
        let off = cmp.shock_offset.expect("shock found");
        assert!(off.abs() < 4.0 * grid.dx(), "offset {off}");
        assert!(cmp.l1_rho < 0.02 * cmp.tv_rho);
    }

    #[test]
    fn probe_requires_compression() {
        let prob = problem(1.0, -1.0, 1.0, 1.0, 1e-6, 1e-6, 0.0);
        let grid = Grid1D::new(-1.0, 1.0, 100, 0.45).unwrap();
        assert!(matches!(concentration_probe(&prob, 0.5, grid), Err(Error::Precondition(_))));
    }
}
