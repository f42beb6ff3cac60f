use chaplygin::exact_solver::{curve_gap, solve, Medium, Region, RiemannSolution, WaveFan};
use chaplygin::model::{Friction, PressureParams, PrimState, RiemannProblem};
use proptest::prelude::*;

fn problem(rl: f64, ul: f64, rr: f64, ur: f64, p: PressureParams, beta: f64) -> RiemannProblem {
    RiemannProblem::new(PrimState::new(rl, ul).unwrap(), PrimState::new(rr, ur).unwrap(), p, Friction::new(beta).unwrap())
        .unwrap()
}

fn any_problem() -> impl Strategy<Value = RiemannProblem> {
    (
        0.1..2.0f64,
        0.1..2.0f64,
        1.0..=3.0f64,
        0.2..=1.0f64,
        (0.2..3.0f64, -2.0..2.0f64, 0.2..3.0f64, -2.0..2.0f64),
        -3.0..3.0f64,
    )
        .prop_map(|(a, b, n, alpha, (rl, ul, rr, ur), beta)| {
            problem(rl, ul, rr, ur, PressureParams::new(a, b, n, alpha).unwrap(), beta)
        })
}

fn fluid(s: Medium<PrimState>) -> PrimState {
    match s {
        Medium::Fluid(s) => s,
        Medium::Vacuum => panic!("unexpected vacuum"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curve_gap_changes_sign_once(prob in any_problem()) {
        let sol = solve(&prob).unwrap();
        let rho_star = sol.intermediate.unwrap().rho_star;
        let grid: Vec<f64> = (0..=120).map(|k| 10f64.powf(-6.0 + 0.1 * k as f64)).collect();
        let signs: Vec<bool> = grid.iter().map(|&r| curve_gap(&prob, r).unwrap() > 0.0).collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        prop_assert!(changes <= 1);
        for (&r, &positive) in grid.iter().zip(&signs) {
            if r < rho_star * (1.0 - 1e-9) {
                prop_assert!(positive, "gap not positive at {} < rho* = {}", r, rho_star);
            } else if r > rho_star * (1.0 + 1e-9) {
                prop_assert!(!positive, "gap not negative at {} > rho* = {}", r, rho_star);
            }
        }
    }

    #[test]
    fn solution_is_self_similar_in_shifted_coordinate(prob in any_problem(), t in 0.1..2.0f64, zeta in -4.0..4.0f64) {
        let sol = solve(&prob).unwrap();
        let f = prob.friction;
        let a = fluid(sol.sample(zeta * t + f.displacement(t), t).unwrap());
        let b = fluid(sol.sample(zeta * 2.0 * t + f.displacement(2.0 * t), 2.0 * t).unwrap());
        prop_assert!((a.rho - b.rho).abs() <= 1e-9 * a.rho.max(1.0));
        prop_assert!(((a.u - f.drift(t)) - (b.u - f.drift(2.0 * t))).abs() <= 1e-9 * (1.0 + a.u.abs()));
    }

    #[test]
    fn states_chain_and_speeds_ordered(prob in any_problem()) {
        let sol = solve(&prob).unwrap();
        if sol.waves.is_empty() {
            return Ok(());
        }
        for w in sol.waves.windows(2) {
            prop_assert!(w[0].right_edge() <= w[1].left_edge());
        }
        let (first, last) = (sol.waves[0], sol.waves[1]);
        let star = sol.intermediate.unwrap().trans();
        match first {
            WaveFan::Shock(s) => prop_assert_eq!((s.left, s.right), (prob.left_trans(), star)),
            WaveFan::Rarefaction(r) => prop_assert_eq!((r.left, r.right), (Medium::Fluid(prob.left_trans()), Medium::Fluid(star))),
            _ => prop_assert!(false),
        }
        match last {
            WaveFan::Shock(s) => prop_assert_eq!((s.left, s.right), (star, prob.right_trans())),
            WaveFan::Rarefaction(r) => prop_assert_eq!((r.left, r.right), (Medium::Fluid(star), Medium::Fluid(prob.right_trans()))),
            _ => prop_assert!(false),
        }
    }
}

/// `(1 - s^2)^4` on `|s| < 1` and its derivative.
fn bump(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - s * s;
    (q.powi(4), -8.0 * s * q.powi(3))
}

/// Midpoint-rule weak-form residuals of mass and momentum against a bump
/// supported in `|x| < 1.5`, `0.2 < t < 1`.
fn weak_residual(sol: &RiemannSolution, n: usize) -> (f64, f64) {
    let (x0, lx, t0, lt) = (0.0, 1.5, 0.6, 0.4);
    let (hx, ht) = (2.0 * lx / n as f64, 2.0 * lt / n as f64);
    let p = &sol.problem.pressure;
    let beta = sol.problem.friction.beta;
    let (mut r_mass, mut r_mom) = (0.0, 0.0);
    for j in 0..n {
        let t = t0 - lt + (j as f64 + 0.5) * ht;
        let (bt, dbt) = bump((t - t0) / lt);
        for i in 0..n {
            let x = x0 - lx + (i as f64 + 0.5) * hx;
            let (bx, dbx) = bump((x - x0) / lx);
            let (phi, phi_t, phi_x) = (bx * bt, bx * dbt / lt, dbx * bt / lx);
            let s = fluid(sol.sample(x, t).unwrap());
            let m = s.rho * s.u;
            r_mass += s.rho * phi_t + m * phi_x;
            r_mom += m * phi_t + (m * s.u + p.pressure(s.rho).unwrap()) * phi_x + beta * s.rho * phi;
        }
    }
    (r_mass * hx * ht, r_mom * hx * ht)
}

#[test]
fn weak_form_residual_vanishes_under_refinement() {
    let cases = [
        problem(1.0, 1.0, 1.0, -1.0, PressureParams::new(1.0, 1.0, 1.0, 1.0).unwrap(), 0.0),
        problem(1.0, 0.3, 2.5, -0.4, PressureParams::new(0.5, 0.8, 2.0, 0.5).unwrap(), 1.5),
        problem(2.0, -0.6, 0.7, 0.9, PressureParams::new(1.2, 0.3, 3.0, 1.0).unwrap(), -1.0),
    ];
    for prob in cases {
        let sol = solve(&prob).unwrap();
        let coarse = weak_residual(&sol, 40);
        let fine = weak_residual(&sol, 320);
        let size = |r: (f64, f64)| r.0.abs().max(r.1.abs());
        assert!(size(fine) < 2e-3, "{:?}: residual {:?}", sol.region, fine);
        assert!(size(fine) < 0.25 * size(coarse), "{:?}: {:?} -> {:?}", sol.region, coarse, fine);
    }
}

#[test]
fn no_vacuum_for_chaplygin_pressure() {
    for (a, n) in [(0.0, 1.0), (1.0, 3.0), (1e-3, 2.0)] {
        let p = PressureParams::new(a, 1e-4, n, 0.7).unwrap();
        let sol = solve(&problem(1.0, -20.0, 1.0, 20.0, p, 0.0)).unwrap();
        assert_eq!(sol.region, Region::I);
        assert!(sol.intermediate.unwrap().rho_star > 0.0);
        assert!(sol.waves.iter().all(|w| !matches!(w, WaveFan::Vacuum { .. })));
    }
}

#[test]
fn region_ii_just_below_rarefaction_curve() {
    use chaplygin::wave_curves::{curve_v, CurveKind, Family};
    use chaplygin::model::TransState;
    let p = PressureParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
    let r2 = curve_v(Family::Two, CurveKind::Rarefaction, TransState { rho: 1.0, v: 0.0 }, 2.0, &p).unwrap();
    assert!((r2 - 0.5).abs() < 1e-14);
    let below = solve(&problem(1.0, 0.0, 2.0, r2 - 0.1, p, 0.0)).unwrap();
    assert_eq!(below.region, Region::II);
    let above = solve(&problem(1.0, 0.0, 2.0, r2 + 0.1, p, 0.0)).unwrap();
    assert_eq!(above.region, Region::I);
    // on the curve itself the tie goes to the rarefaction side
    let on = solve(&problem(1.0, 0.0, 2.0, r2, p, 0.0)).unwrap();
    assert_eq!(on.region, Region::I);
}
