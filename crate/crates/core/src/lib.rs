//! Pseudospectral solver for the fifth-order KdV equations
//!
//! ```text
//! ∂ₜu + ∂ₓ⁵u + uᵏ∂ₓu = 0,   k = 1, 2
//! ```
//!
//! on a periodic box standing in for the real line, together with the
//! weighted-Sobolev diagnostics (conservation laws, weighted norms, mixed
//! space-time norms, interpolation and Leibniz ratios) used to study the
//! flow in `H^s ∩ L²(⟨x⟩^{2r} dx)`.
//!
//! Module map:
//! - [`spectral`]: grid, transforms, Fourier multipliers and the free group `W(t)`.
//! - [`weights`]: truncated and odd weight families with exact derivatives.
//! - [`evolution`]: dealiased nonlinearity, ETDRK4 integrator, Duhamel/Picard solver.
//! - [`diagnostics`]: norms, conserved functionals and inequality checks.
//! - [`experiments`]: scenario configs, the runners behind the `kdv5` CLI, CSV/JSON output.

pub mod data;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod spectral;
pub mod weights;

pub use error::{Error, Result};
pub use evolution::{Model, Scheme, Trajectory};
pub use spectral::{Grid, RealField, Spectrum};
