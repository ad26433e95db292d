use std::f64::consts::PI;

use kdv5::data::{gaussian, random_schwartz};
use kdv5::diagnostics::{
    interpolation_check, lambda_norms, leibniz_check, mixed_spacetime_norm, running_lambda_norms, series,
    sobolev_norm, weighted_l2_norm, Exponent, Nesting, NormSpec, Prefix, SeriesOptions, WeightChoice,
};
use kdv5::evolution::{Scheme, Trajectory, TrajectoryMeta};
use kdv5::{Grid, RealField};
use proptest::prelude::*;

fn external(k: u32, dt: f64) -> TrajectoryMeta {
    TrajectoryMeta { k, scheme: Scheme::External, dt, dealias: true, nonlinear: true }
}

/// A smooth, explicitly time-dependent test trajectory.
fn synthetic(n: usize, steps: usize) -> Trajectory {
    let grid = Grid::new(4.0 * PI, n).unwrap();
    let t_final = 0.8;
    Trajectory::from_fn(t_final, steps, external(1, t_final / steps as f64), |t| {
        RealField::from_fn(&grid, |x| (1.0 + t) * (-(x - t).powi(2)).exp() + 0.3 * t * (-(x + 1.0).powi(2) / 2.0).exp())
    })
    .unwrap()
}

#[test]
fn weighted_norm_of_gaussian_against_closed_form() {
    let grid = Grid::new(32.0 * PI, 2048).unwrap();
    let w = 3.0;
    let u = gaussian(&grid, 1.0, w, 0.0).unwrap();
    // |x|^{2r} is smooth for integer r, so the Riemann sum is spectrally accurate.
    // ∫x² e^{−a x²} dx = √π / (2 a^{3/2}), ∫x⁴ e^{−a x²} dx = 3√π / (4 a^{5/2}), a = 2/w²
    let a = 2.0 / (w * w);
    let exact = (PI.sqrt() / (2.0 * a.powf(1.5))).sqrt();
    let r_one = weighted_l2_norm(&u, 1.0, WeightChoice::Modulus).unwrap();
    assert!((r_one - exact).abs() < 1e-8 * exact);
    let exact = (3.0 * PI.sqrt() / (4.0 * a.powf(2.5))).sqrt();
    let r_two = weighted_l2_norm(&u, 2.0, WeightChoice::Modulus).unwrap();
    assert!((r_two - exact).abs() < 1e-8 * exact);
}

#[test]
fn sobolev_norm_of_gaussian_against_fourier_integral() {
    let grid = Grid::new(32.0 * PI, 2048).unwrap();
    let w = 2.0;
    let u = gaussian(&grid, 1.0, w, 0.0).unwrap();
    for s in [0.0, 1.0, 2.5] {
        // ‖Jˢu‖² = (1/2π) ∫ (1+ξ²)ˢ π w² e^{−w²ξ²/2} dξ, by composite Simpson
        let (lim, m) = (20.0, 20000);
        let h = 2.0 * lim / m as f64;
        let f = |xi: f64| (1.0 + xi * xi).powf(s) * PI * w * w * (-(w * w * xi * xi) / 2.0).exp();
        let mut acc = f(-lim) + f(lim);
        for i in 1..m {
            acc += f(-lim + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let exact = (acc * h / 3.0 / (2.0 * PI)).sqrt();
        let got = sobolev_norm(&u, s);
        assert!((got - exact).abs() < 1e-10 * exact, "s={s}: {got} vs {exact}");
    }
}

fn brute_force(traj: &Trajectory, space: f64, time: f64, space_outer: bool) -> f64 {
    let n = traj.grid().len();
    let m = traj.len();
    let dx = traj.grid().dx();
    let h = traj.spacing();
    let tw = |i: usize| if i == 0 || i == m - 1 { 0.5 * h } else { h };
    let v = |i: usize, j: usize| traj.fields()[i].values()[j].abs();
    if space_outer {
        let mut outer = 0.0;
        for j in 0..n {
            let mut inner = 0.0;
            for i in 0..m {
                inner += tw(i) * v(i, j).powf(time);
            }
            outer += dx * inner.powf(1.0 / time).powf(space);
        }
        outer.powf(1.0 / space)
    } else {
        let mut outer = 0.0;
        for i in 0..m {
            let mut inner = 0.0;
            for j in 0..n {
                inner += dx * v(i, j).powf(space);
            }
            outer += tw(i) * inner.powf(1.0 / space).powf(time);
        }
        outer.powf(1.0 / time)
    }
}

#[test]
fn mixed_norm_matches_brute_force() {
    let traj = synthetic(64, 16);
    for (p, q) in [(2.0, 2.0), (3.2, 4.0), (4.0, 1.5)] {
        for (nesting, outer) in [(Nesting::SpaceOuter, true), (Nesting::TimeOuter, false)] {
            let spec = NormSpec::Mixed {
                space: Exponent::Finite(p),
                time: Exponent::Finite(q),
                nesting,
                prefix: Prefix::None,
                rho: None,
            };
            let got = mixed_spacetime_norm(&traj, &spec).unwrap();
            let exact = brute_force(&traj, p, q, outer);
            assert!((got - exact).abs() <= 1e-14 * exact, "p={p} q={q} {nesting:?}: {got} vs {exact}");
        }
    }
}

#[test]
fn infinite_exponents_are_maxima() {
    let traj = synthetic(64, 8);
    let sup = traj.fields().iter().flat_map(|f| f.values().iter().map(|v| v.abs())).fold(0.0, f64::max);
    let spec = NormSpec::space_time(Exponent::Infinity, Exponent::Infinity, Prefix::None);
    assert_eq!(mixed_spacetime_norm(&traj, &spec).unwrap(), sup);
}

#[test]
fn running_lambdas_end_at_the_full_window() {
    let traj = synthetic(128, 10);
    let running = running_lambda_norms(&traj, 0.5, 1, 1.0).unwrap();
    let full = lambda_norms(&traj, 0.5, 1, 1.0).unwrap();
    let last = running.last().unwrap();
    for (a, b) in last.values.iter().zip(&full.values) {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
    }
    for pair in running.windows(2) {
        assert!(pair[1].max >= pair[0].max * (1.0 - 1e-12) || pair[1].max.is_nan());
    }
}

#[test]
fn series_has_a_row_per_snapshot() {
    let traj = synthetic(128, 6);
    let opts = SeriesOptions { k: 1, r: 0.5, s_target: 2.0, weight: WeightChoice::Smooth, rho: 1.0 };
    let rows = series(&traj, &opts).unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[3].t, traj.times()[3]);
    assert_eq!(rows[0].lambdas.len(), 5);
}

#[test]
fn inequality_probes_stay_below_one_on_random_data() {
    let grid = Grid::new(32.0 * PI, 1024).unwrap();
    for seed in 0..5 {
        let f = random_schwartz(&grid, seed, 1.0).unwrap();
        for theta in [0.25, 0.5, 0.75] {
            let rec = interpolation_check(&f, 2.0, 0.5, theta, WeightChoice::Truncated(8)).unwrap();
            assert!(rec.ratio().unwrap() <= 1.0 + 1e-12);
        }
        let rec = leibniz_check(&f, 0.5, 1, WeightChoice::Truncated(8)).unwrap();
        assert!(rec.ratio().unwrap().is_finite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sobolev_norm_is_monotone_in_s(seed in 0u64..1000, s in 0.0..3.0f64, ds in 0.0..2.0f64) {
        let grid = Grid::new(8.0 * PI, 256).unwrap();
        let f = random_schwartz(&grid, seed, 1.0).unwrap();
        prop_assert!(sobolev_norm(&f, s + ds) >= sobolev_norm(&f, s) * (1.0 - 1e-14));
    }

    #[test]
    fn weighted_norm_grows_with_r(seed in 0u64..1000, r in 0.0..1.0f64) {
        let grid = Grid::new(32.0 * PI, 512).unwrap();
        let f = random_schwartz(&grid, seed, 1.0).unwrap();
        let lo = weighted_l2_norm(&f, r, WeightChoice::Smooth).unwrap();
        let hi = weighted_l2_norm(&f, r + 0.25, WeightChoice::Smooth).unwrap();
        prop_assert!(hi >= lo * (1.0 - 1e-14));
    }
}
