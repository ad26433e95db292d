use std::collections::BTreeMap;

use super::calibration::{Calibration, LOCK_TOLERANCE};
use super::config::{Scenario, ScenarioConfig, SolverKind};
use super::output::{num, RunOutput, Status, Table};
use super::probes::{envelope, free_meta, free_weighted_unit, linear_r_squared, smoothing_max_ratio};
use crate::data::{random_family, random_schwartz};
use crate::diagnostics::{
    apriori_h2_bound, h2_squared, conserved_quantities, mixed_spacetime_norm, second_derivative_bound, series, sobolev_norm,
    weighted_l2_norm, CheckRecord, DiagnosticsReport, NormSpec, SeriesOptions, SeriesRow, WeightChoice,
};
use crate::evolution::{duhamel_residual, Integrator, Model, PicardOptions, PicardSolver, Trajectory};
use crate::spectral::{Grid, RealField};
use crate::{Error, Result};

pub const I1_DRIFT_TOLERANCE: f64 = 1e-8;
pub const I2_DRIFT_TOLERANCE: f64 = 1e-6;
/// Additive slack of the constant-free `k = 2` bound.
pub const BOUND_TOLERANCE: f64 = 1e-6;
/// Allowed relative change of `sup_t ‖u‖_{Hˢ}` between `n` and `2n` points.
pub const REFINEMENT_TOLERANCE: f64 = 0.05;
/// Allowed spread (max/min) of the Lipschitz ratios over the ε ladder.
pub const LADDER_SPREAD: f64 = 2.0;
pub const LINEAR_FIT_R2: f64 = 0.9;

struct Run<'a> {
    cfg: &'a ScenarioConfig,
    model: Model,
    checks: Vec<CheckRecord>,
    metrics: BTreeMap<String, f64>,
    notes: Vec<String>,
    tables: Vec<Table>,
}

impl<'a> Run<'a> {
    fn new(cfg: &'a ScenarioConfig) -> Result<Self> {
        let model = Model::new(cfg.k)?;
        let model = if cfg.nonlinear { model } else { model.linear() };
        Ok(Self {
            cfg,
            model,
            checks: Vec::new(),
            metrics: BTreeMap::new(),
            notes: Vec::new(),
            tables: Vec::new(),
        })
    }

    fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    fn s_target(&self) -> f64 {
        match self.cfg.scenario {
            Scenario::DecayRegularity => 2.0 + 4.0 * self.cfg.alpha,
            _ if self.cfg.k == 1 => 4.0 * self.cfg.r,
            _ => 2.0,
        }
    }

    fn weight_exponent(&self) -> f64 {
        match self.cfg.scenario {
            Scenario::DecayRegularity => 0.5 + self.cfg.alpha,
            _ => self.cfg.r,
        }
    }

    fn series_options(&self) -> SeriesOptions {
        SeriesOptions {
            k: self.cfg.k,
            r: self.weight_exponent(),
            s_target: self.s_target(),
            weight: self.cfg.weight(),
            rho: self.cfg.rho,
        }
    }

    /// Solves with the configured scheme and records the solver checks.
    fn solve(&mut self, u0: &RealField, label: &str) -> Result<Trajectory> {
        let traj = match self.cfg.solver {
            SolverKind::Etdrk4 => {
                Integrator::new(self.model).save_every(self.cfg.save_every).run(u0, self.cfg.t_final, self.cfg.dt)?
            }
            SolverKind::Picard => {
                let options = PicardOptions { nt: self.cfg.nt, tol: self.cfg.tol, max_iter: self.cfg.max_iter };
                let outcome = PicardSolver::new(self.model, options).solve(u0, self.cfg.t_final)?;
                self.metric(&format!("{label}picard_iterations"), outcome.iterations as f64);
                let residual = duhamel_residual(&outcome.trajectory, &self.model)?;
                self.checks.push(CheckRecord::at_most(
                    format!("{label}duhamel_residual"),
                    residual,
                    10.0 * self.cfg.tol,
                ));
                outcome.trajectory
            }
        };
        self.metric(&format!("{label}boundary_contamination"), traj.boundary_contamination());
        if self.cfg.k == 2 && self.model.nonlinear {
            self.second_derivative_checks(&traj, label)?;
        }
        Ok(traj)
    }

    fn second_derivative_checks(&mut self, traj: &Trajectory, label: &str) -> Result<()> {
        let rec = second_derivative_bound(traj)?;
        self.checks.push(CheckRecord::at_most(
            format!("{label}second_derivative_bound"),
            rec.lhs,
            rec.rhs + BOUND_TOLERANCE,
        ));
        let u0 = traj.initial();
        let stated = u0.integral_of_power(4) / 12.0 + u0.derivative(2)?.integral_of_power(2);
        self.checks.push(CheckRecord::at_most(
            format!("{label}second_derivative_bound_stated"),
            rec.lhs,
            stated + BOUND_TOLERANCE,
        ));
        Ok(())
    }

    fn series(&self, traj: &Trajectory) -> Result<Vec<SeriesRow>> {
        series(traj, &self.series_options())
    }

    fn finish(self, rows: &[SeriesRow]) -> RunOutput {
        let mut tables = vec![Table::series("series.csv", rows)];
        tables.extend(self.tables);
        let report = DiagnosticsReport { rows: rows.to_vec(), checks: self.checks };
        let status = if report.passed() { Status::Pass } else { Status::Fail };
        RunOutput {
            config: self.cfg.clone(),
            status,
            report,
            metrics: self.metrics,
            notes: self.notes,
            tables,
            message: None,
        }
    }
}

fn relative_drift(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let mut it = values.clone();
    let first = it.next().unwrap_or(0.0);
    let scale = first.abs().max(1e-30);
    values.map(|v| (v - first).abs() / scale).fold(0.0, f64::max)
}

/// Runs one scenario. Blow-up and non-contraction become a
/// [`Status::SolverFailure`] output; other errors propagate.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let calibration = match &cfg.calibration {
        Some(path) => Calibration::load(path)?,
        None => Calibration::committed()?,
    };
    let result = match cfg.scenario {
        Scenario::Conservation => run_conservation(cfg, &calibration),
        Scenario::Persistence => run_persistence(cfg, &calibration),
        Scenario::DecayRegularity => run_decay_regularity(cfg, &calibration),
        Scenario::Lipschitz => run_lipschitz(cfg, &calibration),
        Scenario::SmoothingProbe => run_smoothing_probe(cfg, &calibration),
    };
    match result {
        Err(e @ (Error::BlowUp { .. } | Error::NoContraction { .. })) => Ok(RunOutput {
            config: cfg.clone(),
            status: Status::SolverFailure,
            report: DiagnosticsReport::default(),
            metrics: BTreeMap::new(),
            notes: Vec::new(),
            tables: Vec::new(),
            message: Some(e.to_string()),
        }),
        other => other,
    }
}

pub fn run_conservation(cfg: &ScenarioConfig, calibration: &Calibration) -> Result<RunOutput> {
    let mut run = Run::new(cfg)?;
    let grid = cfg.build_grid()?;
    let u0 = cfg.data.build(&grid, cfg.seed)?;
    let traj = run.solve(&u0, "")?;
    let rows = run.series(&traj)?;

    let i1_drift = relative_drift(rows.iter().map(|r| r.i1));
    let i2_drift = relative_drift(rows.iter().map(|r| r.i2));
    run.metric("i1_relative_drift", i1_drift);
    run.metric("i2_relative_drift", i2_drift);
    run.checks.push(CheckRecord::at_most("i1_relative_drift", i1_drift, I1_DRIFT_TOLERANCE));
    if run.model.nonlinear {
        run.checks.push(CheckRecord::at_most("i2_relative_drift", i2_drift, I2_DRIFT_TOLERANCE));
        let constant = if cfg.k == 1 { calibration.apriori_k1.constant } else { calibration.apriori_k2.constant };
        let bound = apriori_h2_bound(&traj, cfg.k, constant)?;
        run.metric("apriori_constant", constant);
        run.checks.push(CheckRecord::at_most("apriori_h2_bound", bound.max_h2_sq, bound.bound));
    } else {
        run.notes.push("linear run: I2 is not conserved by the free group and is only reported".into());
    }
    Ok(run.finish(&rows))
}

pub fn run_persistence(cfg: &ScenarioConfig, calibration: &Calibration) -> Result<RunOutput> {
    let mut run = Run::new(cfg)?;
    let grid = cfg.build_grid()?;
    let u0 = cfg.data.build(&grid, cfg.seed)?;
    let traj = run.solve(&u0, "")?;
    let rows = run.series(&traj)?;
    if cfg.r < 0.5 {
        run.notes.push(format!("r = {} is below 1/2: exploratory regime", cfg.r));
    }

    let energy: Vec<f64> = rows.iter().map(|r| r.weighted_r * r.weighted_r).collect();
    let a = energy[0];
    let fit = calibration
        .persistence_fit(cfg.k, cfg.r, cfg.grid.half_width_pi)
        .filter(|_| cfg.n_weight.is_none() && run.model.nonlinear);
    let mut table = Table::new("envelope.csv", &["t", "weighted_sq", "envelope"]);
    match fit {
        Some(fit) => {
            let mut worst: f64 = 0.0;
            for (row, &e) in rows.iter().zip(&energy) {
                let env = envelope(a, fit.b * h2_squared(&u0), fit.c, row.t);
                table.rows.push(vec![num(row.t), num(e), num(env)]);
                if row.t > 0.0 && env > 0.0 {
                    worst = worst.max(e / env);
                }
            }
            run.metric("envelope_b", fit.b);
            run.metric("envelope_c", fit.c);
            if !fit.holdout_passed {
                run.notes.push(format!(
                    "calibrated envelope failed its holdout (max ratio {:.3}); the envelope check is indicative only",
                    fit.holdout_max
                ));
            }
            run.checks.push(CheckRecord::at_most("gronwall_envelope_ratio", worst, 1.0));
        }
        None => {
            for (row, &e) in rows.iter().zip(&energy) {
                table.rows.push(vec![num(row.t), num(e), String::new()]);
            }
            run.notes.push("no calibrated envelope for these parameters; growth is only reported".into());
        }
    }
    run.tables.push(table);

    if !run.model.nonlinear {
        let times: Vec<f64> = rows.iter().map(|r| r.t).collect();
        let norms: Vec<f64> = rows.iter().map(|r| r.weighted_r).collect();
        let r2 = linear_r_squared(&times, &norms);
        run.metric("linear_fit_r2", r2);
        run.checks.push(CheckRecord::at_least("linear_growth_r2", r2, LINEAR_FIT_R2));
        if cfg.r == calibration.free_weighted_r && u0.max_abs() > 0.0 {
            let lambda5 = mixed_spacetime_norm(&traj, &NormSpec::Weighted { r: cfg.r, weight: WeightChoice::Modulus })?;
            let bound = weighted_l2_norm(&u0, cfg.r, WeightChoice::Modulus)?
                + calibration.free_weighted.constant * free_weighted_unit(&u0, cfg.r, cfg.t_final)?;
            run.checks.push(CheckRecord::at_most("free_weighted_bound", lambda5, bound));
        }
    }
    Ok(run.finish(&rows))
}

pub fn run_decay_regularity(cfg: &ScenarioConfig, _calibration: &Calibration) -> Result<RunOutput> {
    let mut run = Run::new(cfg)?;
    let s = run.s_target();
    let coarse = cfg.build_grid()?;
    let fine = Grid::new(cfg.half_width(), 2 * cfg.points())?;
    let u_coarse = cfg.data.build(&coarse, cfg.seed)?;
    let u_fine = cfg.data.build(&fine, cfg.seed)?;
    run.metric(
        "initial_weighted_norm",
        weighted_l2_norm(&u_coarse, 0.5 + cfg.alpha, cfg.weight())?,
    );
    let traj_coarse = run.solve(&u_coarse, "")?;
    let traj_fine = run.solve(&u_fine, "refined_")?;
    let sup = |traj: &Trajectory| traj.fields().iter().map(|f| sobolev_norm(f, s)).fold(0.0, f64::max);
    let (sup_coarse, sup_fine) = (sup(&traj_coarse), sup(&traj_fine));
    run.metric("sup_hs_n", sup_coarse);
    run.metric("sup_hs_2n", sup_fine);
    run.metric("s", s);
    if sup_coarse == 0.0 && sup_fine == 0.0 {
        run.checks.push(CheckRecord::at_most("refinement_ratio_deviation", 0.0, REFINEMENT_TOLERANCE));
    } else {
        let ratio = sup_fine / sup_coarse;
        run.metric("refinement_ratio", ratio);
        run.checks.push(CheckRecord::within(
            "refinement_ratio",
            ratio,
            1.0 / (1.0 + REFINEMENT_TOLERANCE),
            1.0 + REFINEMENT_TOLERANCE,
        ));
    }
    let rows = run.series(&traj_coarse)?;
    let refined = run.series(&traj_fine)?;
    run.tables.push(Table::series("series_refined.csv", &refined));
    Ok(run.finish(&rows))
}

pub fn run_lipschitz(cfg: &ScenarioConfig, _calibration: &Calibration) -> Result<RunOutput> {
    let mut run = Run::new(cfg)?;
    let grid = cfg.build_grid()?;
    let s = run.s_target();
    let weight = cfg.weight();
    let z = |f: &RealField| -> Result<f64> { Ok(sobolev_norm(f, s) + weighted_l2_norm(f, cfg.r, weight)?) };
    let u0 = cfg.data.build(&grid, cfg.seed)?;
    let phi = random_schwartz(&grid, cfg.seed, 1.0)?;
    let base = run.solve(&u0, "")?;
    let rows = run.series(&base)?;

    let mut table = Table::new("ladder.csv", &["epsilon", "perturbation_z", "sup_difference_z", "ratio"]);
    let mut ratios = Vec::new();
    for (i, &eps) in cfg.epsilons.iter().enumerate() {
        let v0 = u0.add(&phi.scale(eps));
        let perturbation = z(&v0.sub(&u0))?;
        let perturbed = run.solve(&v0, &format!("eps{i}_"))?;
        let mut sup: f64 = 0.0;
        for (a, b) in base.fields().iter().zip(perturbed.fields()) {
            sup = sup.max(z(&a.sub(b))?);
        }
        let ratio = (perturbation > 0.0).then(|| sup / perturbation);
        if let Some(r) = ratio {
            ratios.push(r);
        }
        table.rows.push(vec![num(eps), num(perturbation), num(sup), ratio.map(num).unwrap_or_default()]);
    }
    run.tables.push(table);
    let spread = if ratios.is_empty() {
        1.0
    } else {
        let max = ratios.iter().copied().fold(0.0, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            max / min
        } else {
            f64::INFINITY
        }
    };
    run.metric("ladder_spread", spread);
    run.checks.push(CheckRecord::at_most("ladder_spread", spread, LADDER_SPREAD));
    Ok(run.finish(&rows))
}

pub fn run_smoothing_probe(cfg: &ScenarioConfig, calibration: &Calibration) -> Result<RunOutput> {
    let mut run = Run::new(cfg)?;
    if cfg.nonlinear {
        run.notes.push("the smoothing probe always uses the free group".into());
    }
    let grid = cfg.build_grid()?;
    let family = random_family(&grid, cfg.seed, cfg.draws)?;
    let (max, ratios) = smoothing_max_ratio(&family, cfg.t_final, cfg.nt)?;
    let mut table = Table::new("draws.csv", &["draw", "l2_norm", "ratio"]);
    for (i, (f, r)) in family.iter().zip(&ratios).enumerate() {
        table.rows.push(vec![i.to_string(), num(f.l2_norm()), r.map(num).unwrap_or_default()]);
    }
    run.tables.push(table);
    run.metric("max_ratio", max);
    run.metric("skipped_draws", ratios.iter().filter(|r| r.is_none()).count() as f64);

    let fam = &calibration.family;
    let same_family = fam.half_width_pi == cfg.grid.half_width_pi
        && fam.n == cfg.points()
        && fam.seed == cfg.seed
        && fam.draws == cfg.draws
        && fam.t_final == cfg.t_final
        && fam.nt == cfg.nt;
    if same_family {
        run.checks.push(CheckRecord::at_most(
            "smoothing_lock",
            max,
            calibration.locks.smoothing * LOCK_TOLERANCE,
        ));
    } else {
        run.notes.push("family differs from the calibrated one; the lock does not apply".into());
    }

    let first = family.first().cloned().unwrap_or_else(|| RealField::zeros(&grid));
    let free = Trajectory::from_fn(cfg.t_final, cfg.nt, free_meta(cfg.k), |t| first.free_propagate(t))?;
    let rows = run.series(&free)?;
    let (i1, _) = conserved_quantities(&first, cfg.k)?;
    run.metric("first_draw_i1", i1);
    Ok(run.finish(&rows))
}
