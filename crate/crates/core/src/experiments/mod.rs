//! Scenario runner: config in, `series.csv` + `summary.json` out.
//!
//! Each scenario integrates (or propagates) seeded initial data, evaluates
//! the diagnostics along the trajectory and turns the relevant inequality or
//! invariant into named pass/fail checks. Fitted constants and regression
//! locks come from a calibration file that is only regenerated on request
//! (`kdv5 calibrate`).

mod calibration;
mod config;
mod output;
mod probes;
mod scenarios;
mod sweep;

pub use calibration::{
    compute as compute_calibration, gaussian_family, Calibration, ConstantFit, LockFamily, Locks, PersistenceFit,
    ENVELOPE_MARGIN, FIT_MARGIN, LOCK_TOLERANCE,
};
pub use config::{
    parse_calibrate, parse_config, parse_config_str, parse_sweep, CalibrateConfig, GridConfig, Scenario,
    ScenarioConfig, SolverKind, SweepConfig,
};
pub use output::{emit, num, write_atomic, RunOutput, Status, Summary, Table, SERIES_COLUMNS};
pub use probes::{
    envelope, envelope_fit, commutator_max_ratio, free_weighted_unit, interpolation_max_ratio, weighted_derivative_max_ratio, linear_r_squared,
    smoothing_max_ratio, smoothing_ratio, weighted_energy_series, EnvelopeFit, ENVELOPE_RATES, PROBE_TRUNCATIONS,
};
pub use scenarios::{
    run_conservation, run_decay_regularity, run_lipschitz, run_persistence, run_scenario, run_smoothing_probe,
    BOUND_TOLERANCE, I1_DRIFT_TOLERANCE, I2_DRIFT_TOLERANCE, LADDER_SPREAD, LINEAR_FIT_R2, REFINEMENT_TOLERANCE,
};
pub use sweep::{run_sweep, SweepResult};

use crate::Error;

/// Exit code for an error that stopped a command before any output.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::BlowUp { .. } | Error::NoContraction { .. } => 3,
        Error::Parse { .. } | Error::InvalidArgument(_) | Error::DomainTooSmall(_) | Error::Calibration(_) => 4,
        Error::Io(_) | Error::Json(_) => 1,
    }
}
