//! Time evolution of `∂ₜu + ∂ₓ⁵u + uᵏ∂ₓu = 0`.
//!
//! Two solvers share the same dealiased nonlinearity:
//! - [`integrate`]: fourth-order exponential time differencing (ETDRK4), with
//!   the dispersive part `e^{-tξ⁵ i}` applied exactly;
//! - [`picard_solve`]: fixed-point iteration of the Duhamel formula
//!   `u(t) = W(t)u₀ − ∫₀ᵗ W(t−t')(uᵏ∂ₓu)(t') dt'` over the whole window.

mod etdrk4;
mod nonlinear;
mod picard;
mod trajectory;

pub use etdrk4::{integrate, Integrator};
pub use nonlinear::nonlinear_term;
pub use picard::{duhamel_residual, picard_solve, PicardOptions, PicardOutcome, PicardSolver};
pub use trajectory::{Scheme, Trajectory, TrajectoryMeta};

pub(crate) use nonlinear::NonlinearOperator;

use crate::{Error, Result};

/// Any sample above this magnitude aborts a run as a blow-up.
pub const BLOWUP_THRESHOLD: f64 = 1e8;

/// Which equation is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Model {
    /// Power in the nonlinearity `uᵏ∂ₓu` (1 or 2).
    pub k: u32,
    /// When false only the linear group acts.
    pub nonlinear: bool,
    /// 2/3-rule dealiasing of the products.
    pub dealias: bool,
}

impl Model {
    pub fn new(k: u32) -> Result<Self> {
        if !(k == 1 || k == 2) {
            return Err(Error::invalid(format!("nonlinearity power must be 1 or 2, got {k}")));
        }
        Ok(Self { k, nonlinear: true, dealias: true })
    }

    /// The same equation with the nonlinear term switched off.
    pub fn linear(self) -> Self {
        Self { nonlinear: false, ..self }
    }

    pub fn with_dealias(self, dealias: bool) -> Self {
        Self { dealias, ..self }
    }
}
