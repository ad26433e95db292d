use serde::Serialize;

use super::mixed::running_lambda_norms;
use super::norms::{conserved_quantities, h2_squared, sobolev_norm, weighted_l2_norm, WeightChoice};
use crate::evolution::Trajectory;
use crate::Result;

/// One row of the time series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    pub i1: f64,
    pub i2: f64,
    /// `‖u‖_{H²}`
    pub h2: f64,
    /// `‖u‖_{Hˢ}` at the scenario's target regularity.
    pub hs_target: f64,
    /// `‖w^r u‖_{L²}`
    pub weighted_r: f64,
    /// `λ` evaluated on `[0, t]`; four entries for `k = 2`.
    pub lambdas: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesOptions {
    pub k: u32,
    pub r: f64,
    pub s_target: f64,
    pub weight: WeightChoice,
    pub rho: f64,
}

pub fn series(traj: &Trajectory, opts: &SeriesOptions) -> Result<Vec<SeriesRow>> {
    let lambdas = running_lambda_norms(traj, opts.r, opts.k, opts.rho)?;
    traj.times()
        .iter()
        .zip(traj.fields())
        .zip(lambdas)
        .map(|((&t, u), lam)| {
            let (i1, i2) = conserved_quantities(u, opts.k)?;
            Ok(SeriesRow {
                t,
                i1,
                i2,
                h2: h2_squared(u).sqrt(),
                hs_target: sobolev_norm(u, opts.s_target),
                weighted_r: weighted_l2_norm(u, opts.r, opts.weight)?,
                lambdas: lam.values,
            })
        })
        .collect()
}

/// A named pass/fail check. `margin` is positive when the check passes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub passed: bool,
    pub margin: f64,
}

impl CheckRecord {
    pub fn at_most(name: impl Into<String>, value: f64, upper: f64) -> Self {
        let margin = upper - value;
        Self { name: name.into(), value, lower: None, upper: Some(upper), passed: value <= upper, margin }
    }

    pub fn at_least(name: impl Into<String>, value: f64, lower: f64) -> Self {
        let margin = value - lower;
        Self { name: name.into(), value, lower: Some(lower), upper: None, passed: value >= lower, margin }
    }

    pub fn within(name: impl Into<String>, value: f64, lower: f64, upper: f64) -> Self {
        let margin = (value - lower).min(upper - value);
        let passed = value >= lower && value <= upper;
        Self { name: name.into(), value, lower: Some(lower), upper: Some(upper), passed, margin }
    }
}

/// Time series plus inequality checks for one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub rows: Vec<SeriesRow>,
    pub checks: Vec<CheckRecord>,
}

impl DiagnosticsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}
