use std::f64::consts::PI;

use kdv5::data::{gaussian, random_schwartz};
use kdv5::evolution::{duhamel_residual, integrate, picard_solve, Integrator, PicardOptions, PicardSolver};
use kdv5::{Error, Grid, Model, RealField};

fn grid() -> Grid {
    Grid::new(32.0 * PI, 1024).unwrap()
}

fn bump() -> RealField {
    gaussian(&grid(), 1.0, 6.0, 0.0).unwrap()
}

#[test]
fn linear_model_is_the_free_group() {
    let u0 = random_schwartz(&grid(), 5, 1.0).unwrap();
    let traj = Integrator::new(Model::new(1).unwrap().linear()).run(&u0, 0.5, 0.05).unwrap();
    let exact = u0.free_propagate(0.5).unwrap();
    assert!(traj.last().sub(&exact).l2_norm() <= 1e-12 * u0.l2_norm());
}

#[test]
fn mean_is_conserved_exactly() {
    for k in [1, 2] {
        let u0 = gaussian(&grid(), 1.5, 4.0, 2.0).unwrap();
        let traj = integrate(&u0, 1.0, 0.01, k).unwrap();
        let m0 = u0.integral();
        for f in traj.fields() {
            assert!((f.integral() - m0).abs() <= 1e-12 * m0.abs(), "k={k}");
        }
    }
}

#[test]
fn picard_agrees_with_etdrk4_for_both_powers() {
    for k in [1, 2] {
        let u0 = bump();
        let picard = picard_solve(&u0, 0.05, 16, k, 1e-11, 60).unwrap();
        let reference = integrate(&u0, 0.05, 0.05 / 64.0, k).unwrap();
        let diff = picard.last().sub(reference.last()).l2_norm();
        assert!(diff <= 1e-8, "k={k}: {diff:e}");
        assert!(duhamel_residual(&picard, &Model::new(k).unwrap()).unwrap() <= 1e-10);
    }
}

#[test]
fn duhamel_residual_flags_a_wrong_trajectory() {
    let u0 = bump();
    let linear = Integrator::new(Model::new(1).unwrap().linear()).save_every(5).run(&u0, 0.5, 0.01).unwrap();
    let residual = duhamel_residual(&linear, &Model::new(1).unwrap()).unwrap();
    assert!(residual > 1e-4, "{residual:e}");
}

#[test]
fn etdrk4_is_fourth_order_for_the_modified_equation() {
    let u0 = gaussian(&Grid::new(32.0 * PI, 2048).unwrap(), 1.0, 6.0, 0.0).unwrap();
    let finals: Vec<RealField> =
        [16, 32, 64].iter().map(|&m| integrate(&u0, 1.0, 1.0 / m as f64, 2).unwrap().last().clone()).collect();
    let rate = (finals[0].sub(&finals[1]).l2_norm() / finals[1].sub(&finals[2]).l2_norm()).log2();
    assert!((rate - 4.0).abs() < 0.3, "{rate}");
}

#[test]
fn picard_reports_lack_of_contraction() {
    let u0 = gaussian(&grid(), 20.0, 1.0, 0.0).unwrap();
    let solver = PicardSolver::new(Model::new(1).unwrap(), PicardOptions { nt: 16, tol: 1e-12, max_iter: 4 });
    assert!(matches!(solver.solve(&u0, 1.0), Err(Error::NoContraction { .. })));
}

#[test]
fn picard_shrinking_halves_the_window() {
    let u0 = gaussian(&grid(), 3.0, 2.0, 0.0).unwrap();
    let solver = PicardSolver::new(Model::new(1).unwrap(), PicardOptions { nt: 16, tol: 1e-10, max_iter: 40 });
    let out = solver.solve_shrinking(&u0, 0.5, 8).unwrap();
    assert!(out.t_final <= 0.5 && out.t_final > 0.0);
    assert!(out.last_update < 1e-10);
}

#[test]
fn huge_data_blows_up() {
    let u0 = gaussian(&grid(), 5e7, 1.0, 0.0).unwrap();
    assert!(matches!(integrate(&u0, 0.1, 0.01, 2), Err(Error::BlowUp { .. })));
}

#[test]
fn step_count_validation() {
    let u0 = bump();
    assert!(integrate(&u0, 1.0, 0.3, 1).is_err());
    assert!(integrate(&u0, 0.0, 0.1, 1).is_err());
    assert!(Integrator::new(Model::new(1).unwrap()).save_every(3).run(&u0, 1.0, 0.1).is_err());
    assert!(Model::new(3).is_err());
}

#[test]
fn trajectory_times_are_uniform() {
    let traj = Integrator::new(Model::new(1).unwrap()).save_every(4).run(&bump(), 0.4, 0.01).unwrap();
    assert_eq!(traj.len(), 11);
    assert!((traj.spacing() - 0.04).abs() < 1e-15);
    assert!((traj.final_time() - 0.4).abs() < 1e-12);
}
