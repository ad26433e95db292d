//! Norms, conserved functionals, space-time norms and inequality probes.
//!
//! Spatial integrals are trapezoid sums on the periodic grid (spectrally
//! accurate for smooth periodic integrands); Sobolev norms are computed from
//! Fourier coefficients.

mod checks;
mod mixed;
mod norms;
mod report;

pub use checks::{
    apriori_h2_bound, interpolation_check, leibniz_check, pointwise_formula_residual, second_derivative_bound,
    weighted_energy_residual, AprioriBound, RatioRecord,
};
pub use mixed::{
    lambda_norms, mixed_spacetime_norm, running_lambda_norms, Exponent, LambdaNorms, Nesting, NormSpec, Prefix,
};
pub use norms::{conserved_quantities, h2_squared, sobolev_norm, weighted_l2_norm, WeightChoice};
pub use report::{series, CheckRecord, DiagnosticsReport, SeriesOptions, SeriesRow};
