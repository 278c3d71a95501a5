use picard_core::catalog::{self, Params};
use picard_core::oracle::{rk4_solve, OracleConfig};
use picard_core::picard::{
    integral_residual, majorant_bound, majorant_total, ode_residual, picard_step, seed_trajectory, solve_ivp,
    DomainTube, PicardConfig,
};
use picard_core::quadrature::cumulative;
use picard_core::report::{read_trajectory_csv, trajectory_csv};
use picard_core::symmetric::{solve_even, solve_odd};
use picard_core::{Trajectory, VectorField};
use proptest::prelude::*;

fn cfg(n: usize) -> PicardConfig {
    PicardConfig {
        grid_points_per_half: n,
        samples_for_estimation: 128,
        ..Default::default()
    }
}

/// Neither even nor odd: `-a sin y + c`.
fn lopsided(a: f64, c: f64) -> VectorField {
    VectorField::scalar("lopsided", move |y| -a * y.sin() + c)
}

fn pendulum() -> VectorField {
    catalog::lookup("pendulum", &Params::new()).unwrap().field
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn iterates_from_rest_stay_even(y0 in -2.0..2.0_f64, a in 0.1..3.0_f64, c in -1.0..1.0_f64) {
        let f = lopsided(a, c);
        let tube = DomainTube::new(vec![y0], vec![0.0], 0.0, 1.0).unwrap();
        let mut phi = seed_trajectory(&f, &tube, 0.4, 64).unwrap();
        for _ in 0..6 {
            phi = picard_step(&phi, &f, &tube).unwrap();
            prop_assert!(phi.position_parity(1e-13).unwrap().even_defect <= 1e-13);
            prop_assert!(phi.velocity_parity(1e-13).unwrap().odd_defect <= 1e-13);
        }
    }

    #[test]
    fn odd_field_iterates_through_origin_stay_odd(eta in -2.0..2.0_f64, alpha in 0.0..2.0_f64) {
        let f = VectorField::scalar("duffing", move |x| -x - alpha * x * x * x);
        let tube = DomainTube::new(vec![0.0], vec![eta], 0.0, 1.0).unwrap();
        let mut phi = seed_trajectory(&f, &tube, 0.4, 64).unwrap();
        for _ in 0..6 {
            phi = picard_step(&phi, &f, &tube).unwrap();
            prop_assert!(phi.position_parity(1e-13).unwrap().odd_defect <= 1e-13);
            prop_assert!(phi.velocity_parity(1e-13).unwrap().even_defect <= 1e-13);
        }
    }

    #[test]
    fn time_shift_is_exact(y0 in -1.0..1.0_f64, eta in -1.0..1.0_f64, t0 in -50.0..50.0_f64) {
        let f = pendulum();
        let base = DomainTube::new(vec![y0], vec![eta], 0.0, 1.0).unwrap();
        let shifted = DomainTube { t0, ..base.clone() };
        let (a, ra) = solve_ivp(&f, &base, &cfg(64)).unwrap();
        let (b, rb) = solve_ivp(&f, &shifted, &cfg(64)).unwrap();
        prop_assert_eq!(a.positions(), b.positions());
        prop_assert_eq!(a.velocities(), b.velocities());
        prop_assert_eq!(a.offsets(), b.offsets());
        prop_assert_eq!(b.t0, t0);
        prop_assert_eq!(ra, rb);
    }

    #[test]
    fn increments_obey_the_majorant(y0 in -1.0..1.0_f64, eta in -1.0..1.0_f64, alpha in 0.0..2.0_f64, b in 0.2..2.0_f64) {
        let f = VectorField::scalar("duffing", move |x| -x - alpha * x * x * x);
        let tube = DomainTube::new(vec![y0], vec![eta], 0.0, b).unwrap();
        let (_, report) = solve_ivp(&f, &tube, &cfg(128)).unwrap();
        prop_assert!(report.majorant_violations().is_empty(), "{:?}", report);
        prop_assert!(report.tube_excursions.iter().all(|e| *e <= b));
        let total = majorant_total(report.m_used, report.k_used, report.l_used);
        let partial: f64 = (1..=report.iterations_run)
            .map(|j| majorant_bound(report.m_used, report.k_used, j, report.l_used))
            .sum();
        prop_assert!(partial <= total * (1.0 + 1e-12));
    }

    #[test]
    fn integral_residual_drops_fourth_order(y0 in 0.5..1.5_f64) {
        let f = pendulum();
        let tube = DomainTube::new(vec![y0], vec![0.0], 0.0, 1.0).unwrap();
        let residual = |n: usize| {
            let (traj, _) = solve_ivp(&f, &tube, &cfg(n)).unwrap();
            integral_residual(&traj, &f).unwrap()
        };
        let ratio = residual(16) / residual(32);
        prop_assert!(ratio >= 8.0, "ratio {}", ratio);
    }

    #[test]
    fn ode_residual_drops_second_order(y0 in 0.5..1.5_f64) {
        let f = pendulum();
        let tube = DomainTube::new(vec![y0], vec![0.3], 0.0, 1.0).unwrap();
        let residual = |n: usize| {
            let (traj, _) = solve_ivp(&f, &tube, &cfg(n)).unwrap();
            ode_residual(&traj, &f).unwrap()
        };
        let ratio = residual(32) / residual(64);
        prop_assert!(ratio >= 3.0, "ratio {}", ratio);
    }

    #[test]
    fn symmetric_runs_meet_the_residual_scale(y0 in 0.1..1.5_f64, eta in 0.1..1.5_f64) {
        let f = pendulum();
        let c = PicardConfig::default();
        for run in [solve_even(&f, &[y0], 0.0, 1.0, &c).unwrap(), solve_odd(&f, &[eta], 0.0, 1.0, &c, 1e-10).unwrap()] {
            let scale = run.report.stop_tol * picard_core::norm::sup(run.trajectory.positions()).max(1.0);
            prop_assert!(run.report.final_integral_residual <= 10.0 * scale,
                "{} > 10 x {}", run.report.final_integral_residual, scale);
        }
    }

    #[test]
    fn phase_plane_axes(y0 in -2.0..2.0_f64, eta in -2.0..2.0_f64) {
        let f = pendulum();
        let even = solve_even(&f, &[y0], 0.0, 1.0, &cfg(64)).unwrap();
        let mid = even.trajectory.len() / 2;
        prop_assert_eq!(even.trajectory.velocity(mid), &[0.0]);
        prop_assert_eq!(even.trajectory.position(mid), &[y0]);
        let odd = solve_odd(&f, &[eta], 0.0, 1.0, &cfg(64), 1e-10).unwrap();
        prop_assert_eq!(odd.trajectory.position(mid), &[0.0]);
        prop_assert_eq!(odd.trajectory.velocity(mid), &[eta]);
    }

    #[test]
    fn quadrature_exact_on_cubics(c in prop::array::uniform4(-3.0..3.0_f64), n in 3usize..40, h in 0.01..0.3_f64) {
        let g: Vec<f64> = (0..=n).map(|k| { let t = k as f64 * h; c[0] + t * (c[1] + t * (c[2] + t * c[3])) }).collect();
        let mut out = vec![0.0; g.len()];
        cumulative(h, &g, 1, &mut out);
        for (k, v) in out.iter().enumerate() {
            let t = k as f64 * h;
            let exact = t * (c[0] + t * (c[1] / 2.0 + t * (c[2] / 3.0 + t * c[3] / 4.0)));
            prop_assert!((v - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
        }
    }

    #[test]
    fn oracle_time_reversal(y0 in -1.5..1.5_f64, eta in -1.0..1.0_f64) {
        let f = pendulum();
        let o = OracleConfig::default();
        let fwd = rk4_solve(&f, &[y0], &[eta], 0.0, 1.0, &o).unwrap().trajectory;
        let end = fwd.len() - 1;
        let back = rk4_solve(&f, fwd.position(end), fwd.velocity(end), 1.0, -1.0, &o).unwrap().trajectory;
        prop_assert!((back.position(0)[0] - y0).abs() <= 1e-9);
        prop_assert!((back.velocity(0)[0] - eta).abs() <= 1e-9);
    }

    #[test]
    fn nbody_momentum_is_conserved(vx in -0.3..0.3_f64, vy in -0.3..0.3_f64, m2 in 0.5..3.0_f64) {
        let e = catalog::lookup("nbody", &[("masses".to_string(), vec![1.0, m2])].into_iter().collect()).unwrap();
        let y0 = [1.0, 0.0, 0.0, -1.0, 0.0, 0.0];
        let v0 = [vx, vy + 0.5, 0.0, -vx / m2, -(vy + 0.5) / m2, 0.1];
        let run = rk4_solve(&e.field, &y0, &v0, 0.0, 1.0, &OracleConfig::new(1e-3).unwrap()).unwrap();
        let t = &run.trajectory;
        let momentum = |i: usize| -> Vec<f64> {
            (0..3).map(|c| t.velocity(i)[c] + m2 * t.velocity(i)[3 + c]).collect()
        };
        let p0 = momentum(0);
        let scale = v0.iter().map(|v| v.abs()).fold(0.0, f64::max) * (1.0 + m2);
        for i in 0..t.len() {
            let p = momentum(i);
            for c in 0..3 {
                prop_assert!((p[c] - p0[c]).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn csv_round_trip(values in prop::collection::vec(-1e6..1e6_f64, 6..60), t0 in -10.0..10.0_f64) {
        let n = values.len() / 2;
        let offsets: Vec<f64> = (0..n).map(|k| k as f64 * 0.37).collect();
        let positions = values[..n].to_vec();
        let velocities = values[n..2 * n].to_vec();
        let t = Trajectory::new("p", t0, 1, offsets, positions, velocities).unwrap();
        let back = read_trajectory_csv(trajectory_csv(&t).unwrap().as_bytes(), "p", t0).unwrap();
        prop_assert_eq!(back.positions(), t.positions());
        prop_assert_eq!(back.velocities(), t.velocities());
        for (a, b) in back.times().iter().zip(t.times()) {
            prop_assert!((a - b).abs() <= 1e-15 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn two_body_centre_of_mass_stays_put() {
    let e = catalog::lookup("nbody", &Params::new()).unwrap();
    let run = solve_even(&e.field, &[0.5, 0.0, 0.0, -0.5, 0.0, 0.0], 0.0, 0.25, &PicardConfig::default()).unwrap();
    let t = &run.trajectory;
    for i in 0..t.len() {
        let y = t.position(i);
        for c in 0..3 {
            assert!((y[c] + y[3 + c]).abs() <= 1e-12);
        }
    }
}

#[test]
fn two_body_infall_is_monotone_until_the_guard() {
    let e = catalog::lookup("nbody", &Params::new()).unwrap();
    let run = rk4_solve(&e.field, &[0.5, 0.0, 0.0, -0.5, 0.0, 0.0], &[0.0; 6], 0.0, 2.0, &OracleConfig::default()).unwrap();
    assert!(run.halt.is_some());
    let t = &run.trajectory;
    let sep: Vec<f64> = (0..t.len()).map(|i| t.position(i)[0] - t.position(i)[3]).collect();
    assert!(sep.windows(2).all(|w| w[1] <= w[0]));
    assert!(sep.iter().all(|s| *s >= e.field.guard_eps()));
}
