use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::CalibrateConfig;
use super::probes::{
    envelope_fit, commutator_max_ratio, free_weighted_unit, interpolation_max_ratio, weighted_derivative_max_ratio, smoothing_max_ratio, EnvelopeFit,
};
use crate::data::{gaussian, random_family};
use crate::diagnostics::{apriori_h2_bound, mixed_spacetime_norm, weighted_l2_norm, NormSpec, WeightChoice};
use crate::evolution::{Integrator, Model, Trajectory};
use crate::spectral::{Grid, RealField};
use crate::{Error, Result};

/// Locked ratios may not move by more than this factor.
pub const LOCK_TOLERANCE: f64 = 1.05;

/// Fitted constants are this much above the largest ratio seen on the fit
/// half of a family.
pub const FIT_MARGIN: f64 = 1.1;

const COMMITTED: &str = include_str!("../../calibration/calibration.json");

/// The seeded random family the ratio locks are measured on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LockFamily {
    pub half_width_pi: f64,
    pub n: usize,
    pub seed: u64,
    pub draws: usize,
    /// Time window and resolution of the smoothing probe.
    pub t_final: f64,
    pub nt: usize,
}

impl LockFamily {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.half_width_pi * std::f64::consts::PI, self.n)
    }

    pub fn members(&self) -> Result<Vec<RealField>> {
        random_family(&self.grid()?, self.seed, self.draws)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Locks {
    pub interpolation: f64,
    pub weighted_derivative: f64,
    pub commutator: f64,
    pub smoothing: f64,
}

impl Locks {
    pub fn measure(family: &LockFamily) -> Result<Locks> {
        let members = family.members()?;
        Ok(Locks {
            interpolation: interpolation_max_ratio(&members)?,
            weighted_derivative: weighted_derivative_max_ratio(&members)?,
            commutator: commutator_max_ratio(&members)?,
            smoothing: smoothing_max_ratio(&members, family.t_final, family.nt)?.0,
        })
    }
}

/// A constant fitted on one half of a family and checked on the other.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantFit {
    pub constant: f64,
    /// Largest ratio on the fit members.
    pub fit_max: f64,
    /// Largest ratio on the holdout members.
    pub holdout_max: f64,
    pub holdout_passed: bool,
}

impl ConstantFit {
    fn from_ratios(fit: &[f64], holdout: &[f64], floor: f64) -> Self {
        let fit_max = fit.iter().copied().fold(0.0, f64::max);
        let holdout_max = holdout.iter().copied().fold(0.0, f64::max);
        let constant = (FIT_MARGIN * fit_max).max(floor);
        Self { constant, fit_max, holdout_max, holdout_passed: holdout_max <= constant }
    }
}

/// Factor on the weighted-norm growth `E(t) − E(0)` the envelope is fitted to.
pub const ENVELOPE_MARGIN: f64 = 1.5;

/// Gronwall envelope constants for one `(k, r)` on the default box with the
/// default weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersistenceFit {
    pub k: u32,
    pub r: f64,
    pub half_width_pi: f64,
    pub b: f64,
    pub c: f64,
    /// Largest `E(t)/envelope(t)` on the holdout members.
    pub holdout_max: f64,
    pub holdout_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub family: LockFamily,
    pub locks: Locks,
    pub apriori_k1: ConstantFit,
    pub apriori_k2: ConstantFit,
    /// `C_r` of the free-group weighted bound at `r = free_weighted_r`.
    pub free_weighted: ConstantFit,
    pub free_weighted_r: f64,
    pub persistence: Vec<PersistenceFit>,
}

impl Calibration {
    /// The calibration shipped with the crate.
    pub fn committed() -> Result<Self> {
        serde_json::from_str(COMMITTED).map_err(|e| Error::Calibration(format!("committed file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Calibration(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Calibration(format!("{}: {e}", path.display())))
    }

    pub fn persistence_fit(&self, k: u32, r: f64, half_width_pi: f64) -> Option<&PersistenceFit> {
        self.persistence.iter().find(|p| p.k == k && p.r == r && p.half_width_pi == half_width_pi)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

const DEFAULT_HALF_WIDTH_PI: f64 = 32.0;
const FAMILY_SIZE: usize = 20;
const FIT_SIZE: usize = 10;
const ENVELOPE_R: f64 = 0.5;

/// Gaussians with amplitude in `[0.5, 2]`, width in `[3, 6]`, center in `[−5, 5]`.
pub fn gaussian_family(grid: &Grid, seed: u64, count: usize) -> Result<Vec<RealField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.gen_range(0.5..2.0);
            let w = rng.gen_range(3.0..6.0);
            let c = rng.gen_range(-5.0..5.0);
            gaussian(grid, a, w, c)
        })
        .collect()
}

fn evolve(u0: &RealField, k: u32) -> Result<Trajectory> {
    Integrator::new(Model::new(k)?).save_every(5).run(u0, 1.0, 0.01)
}

fn apriori_fit(runs: &[Trajectory], k: u32) -> Result<ConstantFit> {
    let ratios = runs
        .iter()
        .map(|traj| {
            // K is affine in C: K(C) = K(0) + C·(K(1) − K(0))
            let one = apriori_h2_bound(traj, k, 1.0)?;
            let zero = apriori_h2_bound(traj, k, 0.0)?;
            Ok(((one.max_h2_sq - zero.bound) / (one.bound - zero.bound)).max(0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    // for k = 1, K ≥ ‖u₀‖²_{H²} as ‖u₀‖ → 0 forces C ≥ 1
    let floor = if k == 1 { 1.0 } else { 0.0 };
    Ok(ConstantFit::from_ratios(&ratios[..FIT_SIZE], &ratios[FIT_SIZE..], floor))
}

fn free_weighted_fit(members: &[RealField], r: f64) -> Result<ConstantFit> {
    let spec = NormSpec::Weighted { r, weight: WeightChoice::Modulus };
    let ratios = members
        .iter()
        .map(|u0| {
            let free = Trajectory::from_fn(1.0, 20, super::probes::free_meta(1), |t| u0.free_propagate(t))?;
            let lambda5 = mixed_spacetime_norm(&free, &spec)?;
            let base = weighted_l2_norm(u0, r, WeightChoice::Modulus)?;
            Ok((lambda5 - base).max(0.0) / free_weighted_unit(u0, r, 1.0)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstantFit::from_ratios(&ratios[..FIT_SIZE], &ratios[FIT_SIZE..], 0.0))
}

/// Recomputes every calibrated quantity.
pub fn compute(cfg: &CalibrateConfig) -> Result<Calibration> {
    let family = LockFamily {
        half_width_pi: DEFAULT_HALF_WIDTH_PI,
        n: 1024,
        seed: cfg.seed,
        draws: cfg.draws,
        t_final: 1.0,
        nt: 100,
    };
    let locks = Locks::measure(&family)?;

    let mut apriori = Vec::new();
    let mut persistence = Vec::new();
    for k in [1u32, 2] {
        let grid = Grid::new(DEFAULT_HALF_WIDTH_PI * std::f64::consts::PI, if k == 1 { 1024 } else { 2048 })?;
        let members = gaussian_family(&grid, cfg.seed.wrapping_add(1), FAMILY_SIZE)?;
        let runs = members.iter().map(|u0| evolve(u0, k)).collect::<Result<Vec<_>>>()?;
        apriori.push(apriori_fit(&runs, k)?);
        let EnvelopeFit { b, c, holdout_max } =
            envelope_fit(&runs[..FIT_SIZE], &runs[FIT_SIZE..], ENVELOPE_R, WeightChoice::Smooth, ENVELOPE_MARGIN)?;
        persistence.push(PersistenceFit {
            k,
            r: ENVELOPE_R,
            half_width_pi: DEFAULT_HALF_WIDTH_PI,
            b,
            c,
            holdout_max,
            holdout_passed: holdout_max <= 1.0,
        });
    }

    let grid = family.grid()?;
    let free_weighted = free_weighted_fit(&gaussian_family(&grid, cfg.seed.wrapping_add(2), FAMILY_SIZE)?, ENVELOPE_R)?;

    Ok(Calibration {
        family,
        locks,
        apriori_k1: apriori[0],
        apriori_k2: apriori[1],
        free_weighted,
        free_weighted_r: ENVELOPE_R,
        persistence,
    })
}
