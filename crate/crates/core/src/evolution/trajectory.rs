use serde::Serialize;

use crate::spectral::{Grid, RealField, Spectrum};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Picard,
    Etdrk4,
    /// Built by hand (tests, exact solutions).
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub k: u32,
    pub scheme: Scheme,
    /// Solver step (for Picard, the spacing of the time grid).
    pub dt: f64,
    pub dealias: bool,
    pub nonlinear: bool,
}

/// Uniformly spaced snapshots `u(t_0), …, u(t_m)` with `t_0 = 0`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    grid: Grid,
    times: Vec<f64>,
    fields: Vec<RealField>,
    meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, fields: Vec<RealField>, meta: TrajectoryMeta) -> Result<Self> {
        if fields.is_empty() || fields.len() != times.len() {
            return Err(Error::invalid("trajectory needs one field per time and at least one time"));
        }
        if times[0] != 0.0 {
            return Err(Error::invalid("trajectory must start at t = 0"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("trajectory times must be strictly increasing"));
        }
        let grid = fields[0].grid().clone();
        if fields.iter().any(|f| !f.grid().same_as(&grid)) {
            return Err(Error::invalid("trajectory fields must share one grid"));
        }
        Ok(Self { grid, times, fields, meta })
    }

    /// A trajectory sampling `u(t) = f(t)` at `m + 1` uniform times on `[0, T]`.
    pub fn from_fn(
        t_final: f64,
        steps: usize,
        meta: TrajectoryMeta,
        f: impl Fn(f64) -> Result<RealField>,
    ) -> Result<Self> {
        let times: Vec<f64> = if steps == 0 {
            vec![0.0]
        } else {
            (0..=steps).map(|i| t_final * i as f64 / steps as f64).collect()
        };
        let fields = times.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(times, fields, meta)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn fields(&self) -> &[RealField] {
        &self.fields
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial(&self) -> &RealField {
        &self.fields[0]
    }

    pub fn last(&self) -> &RealField {
        self.fields.last().expect("non-empty trajectory")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("non-empty trajectory")
    }

    /// Spacing of the snapshot times (zero for a single snapshot).
    pub fn spacing(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    /// The snapshots on `[0, t_m]`.
    pub fn prefix(&self, m: usize) -> Trajectory {
        Trajectory {
            grid: self.grid.clone(),
            times: self.times[..=m].to_vec(),
            fields: self.fields[..=m].to_vec(),
            meta: self.meta,
        }
    }

    pub fn spectra(&self) -> Vec<Spectrum> {
        self.fields.iter().map(RealField::to_spectrum).collect()
    }

    pub fn map_fields(&self, f: impl Fn(&RealField) -> Result<RealField>) -> Result<Trajectory> {
        let fields = self.fields.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Trajectory { grid: self.grid.clone(), times: self.times.clone(), fields, meta: self.meta })
    }

    /// Largest `|u|` in the outer tenth of the box over all snapshots.
    pub fn boundary_contamination(&self) -> f64 {
        let edge = 0.9 * self.grid.half_width();
        let pts = self.grid.points();
        self.fields
            .iter()
            .flat_map(|f| f.values().iter().zip(pts).filter(|(_, x)| x.abs() >= edge).map(|(v, _)| v.abs()))
            .fold(0.0, f64::max)
    }
}
