use std::f64::consts::PI;

use kdv5::spectral::{bessel_potential, derivative, fractional_derivative, free_propagate, Grid, RealField};
use num_complex::Complex64;
use proptest::prelude::*;

fn naive_dft(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    (0..n)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .map(|(j, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

fn field(grid: &Grid, samples: &[f64]) -> RealField {
    RealField::new(grid, samples.to_vec()).unwrap()
}

fn rel_diff(a: &RealField, b: &RealField) -> f64 {
    a.sub(b).l2_norm() / b.l2_norm().max(1e-300)
}

/// `cos(m x π / L)` on the grid, and its wavenumber.
fn mode(grid: &Grid, m: i64) -> (RealField, f64) {
    let xi = PI * m as f64 / grid.half_width();
    (RealField::from_fn(grid, |x| (xi * x).cos()).unwrap(), xi)
}

#[test]
fn transform_matches_naive_dft() {
    let grid = Grid::new(5.0, 64).unwrap();
    let u = RealField::from_fn(&grid, |x| (-(x - 0.3).powi(2)).exp() * (1.0 + 0.2 * x)).unwrap();
    let fast = u.to_spectrum();
    let slow = naive_dft(u.values());
    for (a, b) in fast.coeffs().iter().zip(&slow) {
        assert!((a - b).norm() < 1e-14, "{a} vs {b}");
    }
}

#[test]
fn derivatives_of_a_single_mode() {
    let grid = Grid::new(3.0, 128).unwrap();
    let (u, xi) = mode(&grid, 5);
    let expected = [
        RealField::from_fn(&grid, |x| -xi * (xi * x).sin()).unwrap(),
        RealField::from_fn(&grid, |x| -xi.powi(2) * (xi * x).cos()).unwrap(),
        RealField::from_fn(&grid, |x| xi.powi(3) * (xi * x).sin()).unwrap(),
    ];
    // Transform roundoff in the top modes grows like (ξ_max/ξ)^order.
    let amplification = |order: i32| (PI * 64.0 / 3.0 / xi).powi(order);
    for (order, exact) in (1..=3).zip(&expected) {
        let err = rel_diff(&derivative(&u, order as u32).unwrap(), exact);
        assert!(err < 1e-15 * amplification(order), "order {order}: {err:e}");
    }
    let five = derivative(&u, 5).unwrap();
    let exact = RealField::from_fn(&grid, |x| -xi.powi(5) * (xi * x).sin()).unwrap();
    assert!(rel_diff(&five, &exact) < 1e-15 * amplification(5));
}

#[test]
fn fractional_and_bessel_multipliers_scale_a_mode() {
    let grid = Grid::new(4.0, 64).unwrap();
    let (u, xi) = mode(&grid, 3);
    let d = fractional_derivative(&u, 1.5).unwrap();
    assert!(rel_diff(&d, &u.scale(xi.abs().powf(1.5))) < 1e-13);
    let j = bessel_potential(&u, 2.5).unwrap();
    assert!(rel_diff(&j, &u.scale((1.0 + xi * xi).powf(1.25))) < 1e-13);
}

#[test]
fn free_group_shifts_the_phase_of_a_mode() {
    let grid = Grid::new(2.0, 64).unwrap();
    let (u, xi) = mode(&grid, 2);
    let t = 0.0137;
    let moved = free_propagate(&u, t).unwrap();
    let exact = RealField::from_fn(&grid, |x| (xi * x - t * xi.powi(5)).cos()).unwrap();
    assert!(rel_diff(&moved, &exact) < 1e-12);
}

#[test]
fn free_group_at_zero_is_identity() {
    let grid = Grid::new(2.0, 32).unwrap();
    let u = RealField::from_fn(&grid, |x| x.sin() + 0.1).unwrap();
    assert_eq!(free_propagate(&u, 0.0).unwrap().values(), u.values());
}

#[test]
fn plancherel() {
    let grid = Grid::new(7.0, 256).unwrap();
    let u = RealField::from_fn(&grid, |x| (-(x * x) / 4.0).exp() * (3.0 * x).cos()).unwrap();
    let physical = grid.dx() * u.values().iter().map(|v| v * v).sum::<f64>();
    let spectral = 2.0 * grid.half_width() * u.to_spectrum().coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>();
    assert!((physical - spectral).abs() < 1e-13 * physical);
}

#[test]
fn grid_rejects_bad_sizes() {
    assert!(Grid::new(1.0, 0).is_err());
    assert!(Grid::new(1.0, 7).is_err());
    assert!(Grid::new(-1.0, 16).is_err());
}

fn samples() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 64)
}

/// Box with `ξ_max = 4`, so phases `tξ⁵` stay where double rounding is
/// far below the tolerances.
fn box64() -> Grid {
    Grid::new(8.0 * PI, 64).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn free_group_is_an_isometry(v in samples(), t in -3.0..3.0f64) {
        let grid = box64();
        let u = field(&grid, &v);
        let moved = free_propagate(&u, t).unwrap();
        prop_assert!((moved.l2_norm() - u.l2_norm()).abs() <= 1e-13 * u.l2_norm().max(1e-300));
    }

    #[test]
    fn free_group_law(v in samples(), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        let grid = box64();
        let u = field(&grid, &v);
        let two_steps = free_propagate(&free_propagate(&u, t).unwrap(), s).unwrap();
        let one_step = free_propagate(&u, s + t).unwrap();
        prop_assert!(two_steps.sub(&one_step).l2_norm() <= 1e-12 * u.l2_norm().max(1e-300));
    }

    #[test]
    fn free_group_commutes_with_derivatives(v in samples(), t in -1.0..1.0f64, order in 1u32..4) {
        let grid = box64();
        let u = field(&grid, &v);
        let a = derivative(&free_propagate(&u, t).unwrap(), order).unwrap();
        let b = free_propagate(&derivative(&u, order).unwrap(), t).unwrap();
        prop_assert!(a.sub(&b).l2_norm() <= 1e-11 * b.l2_norm().max(1.0));
    }

    #[test]
    fn transform_round_trip(v in samples()) {
        let grid = Grid::new(1.0, 64).unwrap();
        let u = field(&grid, &v);
        let back = u.to_spectrum().to_field();
        for (a, b) in back.values().iter().zip(u.values()) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }
}
