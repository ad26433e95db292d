//! Ratio probes over seeded families and the Gronwall envelope.

use crate::diagnostics::{
    h2_squared, interpolation_check, leibniz_check, mixed_spacetime_norm, pointwise_formula_residual, weighted_l2_norm,
    Exponent, NormSpec, Prefix, RatioRecord, WeightChoice,
};
use crate::evolution::{Scheme, Trajectory, TrajectoryMeta};
use crate::spectral::RealField;
use crate::{Error, Result};

/// Truncations probed for `N`-uniformity.
pub const PROBE_TRUNCATIONS: [u32; 3] = [4, 8, 16];

pub(crate) fn free_meta(k: u32) -> TrajectoryMeta {
    TrajectoryMeta { k, scheme: Scheme::External, dt: 0.0, dealias: false, nonlinear: false }
}

fn max_ratio(records: impl IntoIterator<Item = Result<RatioRecord>>) -> Result<f64> {
    let mut best: f64 = 0.0;
    for rec in records {
        if let Some(r) = rec?.ratio() {
            best = best.max(r);
        }
    }
    Ok(best)
}

fn nonzero(family: &[RealField]) -> impl Iterator<Item = &RealField> {
    family.iter().filter(|f| f.max_abs() > 0.0)
}

/// Weighted interpolation with `a = 2`, `b = 1/2`, `θ ∈ {1/4, 1/2, 3/4}`,
/// `w_N` for `N ∈ {4, 8, 16}`.
pub fn interpolation_max_ratio(family: &[RealField]) -> Result<f64> {
    max_ratio(nonzero(family).flat_map(|f| {
        PROBE_TRUNCATIONS.iter().flat_map(move |&n| {
            [0.25, 0.5, 0.75].map(|theta| interpolation_check(f, 2.0, 0.5, theta, WeightChoice::Truncated(n)))
        })
    }))
}

/// Weighted derivative bound with `b = 1/2`, `n ∈ {1, 2}`, `N ∈ {4, 8, 16}`.
pub fn weighted_derivative_max_ratio(family: &[RealField]) -> Result<f64> {
    max_ratio(nonzero(family).flat_map(|f| {
        PROBE_TRUNCATIONS
            .iter()
            .flat_map(move |&n| [1, 2].map(|order| leibniz_check(f, 0.5, order, WeightChoice::Truncated(n))))
    }))
}

/// Commutator of `W(t)` with `|x|^{0.4}` at `t ∈ {1/4, 1/2, 1}`.
pub fn commutator_max_ratio(family: &[RealField]) -> Result<f64> {
    max_ratio(
        nonzero(family)
            .flat_map(|f| [0.25, 0.5, 1.0].map(|t| pointwise_formula_residual(f, 0.4, t, WeightChoice::Smooth))),
    )
}

/// `‖∂ₓ²W(t)u₀‖_{L^∞_x L²_T} / ‖u₀‖_{L²}` on `nt + 1` uniform times, or
/// `None` for `u₀ = 0`.
pub fn smoothing_ratio(u0: &RealField, t_final: f64, nt: usize) -> Result<Option<f64>> {
    let l2 = u0.l2_norm();
    if l2 == 0.0 {
        return Ok(None);
    }
    let free = Trajectory::from_fn(t_final, nt, free_meta(1), |t| u0.free_propagate(t))?;
    let spec = NormSpec::space_time(Exponent::Infinity, Exponent::Finite(2.0), Prefix::Derivative(2));
    Ok(Some(mixed_spacetime_norm(&free, &spec)? / l2))
}

/// Largest smoothing ratio and the per-draw ratios.
pub fn smoothing_max_ratio(family: &[RealField], t_final: f64, nt: usize) -> Result<(f64, Vec<Option<f64>>)> {
    let ratios = family.iter().map(|f| smoothing_ratio(f, t_final, nt)).collect::<Result<Vec<_>>>()?;
    let max = ratios.iter().flatten().copied().fold(0.0, f64::max);
    Ok((max, ratios))
}

/// `(1 + T)(‖u₀‖ + ‖D^{4r}u₀‖)`.
pub fn free_weighted_unit(u0: &RealField, r: f64, t_final: f64) -> Result<f64> {
    Ok((1.0 + t_final) * (u0.l2_norm() + u0.fractional_derivative(4.0 * r)?.l2_norm()))
}

/// Solution of `E = A + Bt + C∫₀ᵗE`, i.e. the Gronwall envelope
/// `A + Bt + C∫₀ᵗ(A + Bt')e^{C(t−t')}dt' = A e^{Ct} + B(e^{Ct} − 1)/C`.
pub fn envelope(a: f64, b: f64, c: f64, t: f64) -> f64 {
    if c == 0.0 {
        a + b * t
    } else {
        a * (c * t).exp() + b * (c * t).exp_m1() / c
    }
}

/// Candidate growth rates for the envelope fit.
pub const ENVELOPE_RATES: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 2.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeFit {
    pub b: f64,
    pub c: f64,
    /// Largest `E(t) / envelope(t)` on the holdout runs (≤ 1 passes).
    pub holdout_max: f64,
}

/// `t ↦ ‖w^r u(t)‖²` along a trajectory.
pub fn weighted_energy_series(traj: &Trajectory, r: f64, weight: WeightChoice) -> Result<Vec<f64>> {
    traj.fields().iter().map(|u| Ok(weighted_l2_norm(u, r, weight)?.powi(2))).collect()
}

/// Envelope with the growth term scaled by the data:
/// `E(t) ≤ envelope(E(0), B·‖u₀‖²_{H²}, C, t)`.
///
/// `d/dt (pu,u)` is controlled by `‖u‖²_{H²}` when `p'` is bounded, which
/// makes `B` comparable across data. For each rate `C` the smallest `B` with
/// `E(0) + margin·(E − E(0)) ≤ envelope` on every fit run is taken; the rate
/// whose envelope is tightest at the final time wins.
pub fn envelope_fit(
    fit: &[Trajectory],
    holdout: &[Trajectory],
    r: f64,
    weight: WeightChoice,
    margin: f64,
) -> Result<EnvelopeFit> {
    struct Run {
        times: Vec<f64>,
        e: Vec<f64>,
        scale: f64,
    }
    let series = |runs: &[Trajectory]| -> Result<Vec<Run>> {
        let mut out = Vec::new();
        for t in runs {
            let scale = h2_squared(t.initial());
            if scale > 0.0 {
                out.push(Run { times: t.times().to_vec(), e: weighted_energy_series(t, r, weight)?, scale });
            }
        }
        Ok(out)
    };
    let fit_series = series(fit)?;
    if fit_series.is_empty() {
        return Err(Error::invalid("envelope fit needs at least one nonzero run"));
    }
    let inflated = |run: &Run, i: usize| run.e[0] + margin * (run.e[i] - run.e[0]);
    let mut best: Option<(f64, f64, f64)> = None;
    for &c in &ENVELOPE_RATES {
        let mut b: f64 = 0.0;
        for run in &fit_series {
            for (i, &t) in run.times.iter().enumerate().skip(1) {
                let unit_b = run.scale * envelope(0.0, 1.0, c, t);
                b = b.max((inflated(run, i) - envelope(run.e[0], 0.0, c, t)) / unit_b);
            }
        }
        let slack = fit_series
            .iter()
            .map(|run| {
                let last = run.e.len() - 1;
                envelope(run.e[0], b * run.scale, c, run.times[last]) / inflated(run, last).max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max);
        if best.is_none_or(|(_, _, s)| slack < s) {
            best = Some((b, c, slack));
        }
    }
    let (b, c, _) = best.expect("at least one rate");
    let mut holdout_max: f64 = 0.0;
    for run in series(holdout)? {
        for (&t, &v) in run.times.iter().zip(&run.e).skip(1) {
            let env = envelope(run.e[0], b * run.scale, c, t);
            if env > 0.0 {
                holdout_max = holdout_max.max(v / env);
            }
        }
    }
    Ok(EnvelopeFit { b, c, holdout_max })
}

/// Coefficient of determination of the least-squares line through `(x, y)`;
/// 1 when `y` is constant.
pub fn linear_r_squared(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if syy == 0.0 || sxx == 0.0 {
        return 1.0;
    }
    sxy * sxy / (sxx * syy)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn envelope_solves_the_integral_equation() {
        let (a, b, c) = (2.0, 0.5, 0.7);
        let t = 1.3;
        // E' = C·E + B, E(0) = A
        let h = 1e-5;
        let d = (envelope(a, b, c, t + h) - envelope(a, b, c, t - h)) / (2.0 * h);
        assert!((d - (c * envelope(a, b, c, t) + b)).abs() < 1e-8);
        assert_eq!(envelope(a, b, 0.0, t), a + b * t);
        assert!((envelope(a, b, 1e-9, t) - (a + b * t)).abs() < 1e-6);
    }

    #[test]
    fn smoothing_ratio_of_a_single_mode() {
        // ∂ₓ²W(t)cos = −cos(x − t); its time-L² over one period is √π at every x
        let g = Grid::new(PI, 32).unwrap();
        let f = RealField::from_fn(&g, f64::cos).unwrap();
        let ratio = smoothing_ratio(&f, 2.0 * PI, 64).unwrap().unwrap();
        assert!((ratio - 1.0).abs() < 1e-12, "{ratio}");
        assert_eq!(smoothing_ratio(&RealField::zeros(&g), 1.0, 8).unwrap(), None);
    }

    #[test]
    fn r_squared() {
        let x = [0.0, 1.0, 2.0, 3.0];
        assert!((linear_r_squared(&x, &[1.0, 3.0, 5.0, 7.0]) - 1.0).abs() < 1e-15);
        assert_eq!(linear_r_squared(&x, &[2.0; 4]), 1.0);
        assert!(linear_r_squared(&x, &[0.0, 1.0, 0.0, 1.0]) < 0.5);
    }
}
