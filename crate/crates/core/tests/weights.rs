use kdv5::weights::{odd_weight, smooth_weight, truncated_weight, OddVariant, WeightProfile};
use kdv5::{Error, Grid};
use proptest::prelude::*;

/// Central difference of the `(j−1)`-th derivative, step `h`.
fn central(profile: &WeightProfile, x: f64, j: usize, h: f64) -> f64 {
    (profile.jet(x + h).derivative(j - 1) - profile.jet(x - h).derivative(j - 1)) / (2.0 * h)
}

fn profiles() -> Vec<WeightProfile> {
    vec![
        WeightProfile::smooth(0.5),
        WeightProfile::smooth(1.3),
        WeightProfile::truncated(4).unwrap(),
        WeightProfile::truncated(8).unwrap(),
        WeightProfile::odd(4, 0.125, OddVariant::Phi).unwrap(),
        WeightProfile::odd(6, 0.05, OddVariant::PhiTilde).unwrap(),
    ]
}

#[test]
fn jet_derivatives_match_finite_differences() {
    let h = 1e-4;
    for p in profiles() {
        for i in 0..400 {
            let x = -70.0 + 0.35 * i as f64 + 0.013;
            for j in 1..=5 {
                let exact = p.jet(x).derivative(j);
                let fd = central(&p, x, j, h);
                let scale = 1.0 + exact.abs();
                assert!(
                    (exact - fd).abs() <= 1e-5 * scale,
                    "{:?} j={j} x={x}: {exact} vs {fd}",
                    p.kind()
                );
            }
        }
    }
}

#[test]
fn smooth_weight_closed_form() {
    let grid = Grid::new(10.0, 64).unwrap();
    let r = 0.75;
    let w0 = smooth_weight(&grid, r, 0).unwrap();
    let w1 = smooth_weight(&grid, r, 1).unwrap();
    for ((&x, a), b) in grid.points().iter().zip(&w0).zip(&w1) {
        let base = 1.0 + x * x;
        assert!((a - base.powf(r)).abs() <= 1e-13 * a);
        assert!((b - 2.0 * r * x * base.powf(r - 1.0)).abs() <= 1e-12 * (1.0 + b.abs()));
    }
}

#[test]
fn truncated_weight_needs_room() {
    let grid = Grid::new(20.0, 256).unwrap();
    assert!(truncated_weight(&grid, 4, 0).is_ok());
    assert!(matches!(truncated_weight(&grid, 6, 0), Err(Error::DomainTooSmall(_))));
    assert!(matches!(odd_weight(&grid, 2, 0.1, OddVariant::Phi, 0), Err(Error::DomainTooSmall(_))));
    assert!(truncated_weight(&grid, 0, 0).is_err());
    assert!(truncated_weight(&grid, 4, 6).is_err());
}

#[test]
fn odd_weight_rejects_alpha_out_of_range() {
    assert!(WeightProfile::odd(4, 0.0, OddVariant::Phi).is_err());
    assert!(WeightProfile::odd(4, 0.2, OddVariant::PhiTilde).is_err());
}

#[test]
fn truncated_weight_derivative_bound_is_uniform_on_large_grid() {
    // |w_N^{(j)}| · w_N^{j−1} stays bounded as N grows.
    let grid = Grid::new(300.0, 16384).unwrap();
    for j in 1..=3 {
        let mut constants = Vec::new();
        for n in [4u32, 16, 64] {
            let w = truncated_weight(&grid, n, 0).unwrap();
            let d = truncated_weight(&grid, n, j).unwrap();
            let c = d.iter().zip(&w).map(|(d, w)| d.abs() * w.powi(j as i32 - 1)).fold(0.0, f64::max);
            constants.push(c);
        }
        let hi = constants.iter().copied().fold(0.0, f64::max);
        let lo = constants.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(hi <= 2.0 * lo, "j={j}: {constants:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_weight_lies_between_one_and_bracket(n in 1u32..20, x in -100.0..100.0f64) {
        let w = WeightProfile::truncated(n).unwrap().jet(x).value();
        let bracket = (1.0 + x * x).sqrt();
        prop_assert!(w >= 1.0 - 1e-12);
        prop_assert!(w <= bracket * (1.0 + 1e-12));
        prop_assert!(w <= 2.0 * n as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn odd_weights_are_odd(n in 1u32..10, alpha in 0.01..0.125f64, x in 0.0..150.0f64) {
        for variant in [OddVariant::Phi, OddVariant::PhiTilde] {
            let p = WeightProfile::odd(n, alpha, variant).unwrap();
            prop_assert_eq!(p.jet(-x).value(), -p.jet(x).value());
            prop_assert!(p.jet(x).derivative(1) >= 0.0);
        }
    }
}
