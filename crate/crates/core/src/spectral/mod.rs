//! Periodic grid, transforms and Fourier multipliers.
//!
//! The real line is replaced by the box `[-L, L)` sampled at `n` points
//! `x_j = -L + j·dx`. Transforms use the normalization
//!
//! ```text
//! û_k = (1/n) Σ_j u_j e^{-2πi jk/n},      u_j = Σ_k û_k e^{2πi jk/n}
//! ```
//!
//! so that `∫ u² dx ≈ dx Σ_j u_j² = 2L Σ_k |û_k|²`. Coefficients are kept in
//! FFT order: index `i` carries the wavenumber `ξ = π m / L` with `m = i` for
//! `i < n/2` and `m = i - n` otherwise (the Nyquist mode is `m = -n/2`).

mod field;
mod grid;

pub use field::{RealField, Spectrum};
pub use grid::Grid;

use num_complex::Complex64;

use crate::Result;

/// Largest derivative order accepted by [`derivative`].
pub const MAX_DERIVATIVE_ORDER: u32 = 8;

pub fn make_grid(half_width: f64, n: usize) -> Result<Grid> {
    Grid::new(half_width, n)
}

pub fn to_spectrum(f: &RealField) -> Spectrum {
    f.to_spectrum()
}

pub fn from_spectrum(s: &Spectrum) -> RealField {
    s.to_field()
}

pub fn derivative(f: &RealField, order: u32) -> Result<RealField> {
    f.derivative(order)
}

pub fn fractional_derivative(f: &RealField, s: f64) -> Result<RealField> {
    f.fractional_derivative(s)
}

pub fn bessel_potential(f: &RealField, s: f64) -> Result<RealField> {
    f.bessel_potential(s)
}

pub fn free_propagate(f: &RealField, t: f64) -> Result<RealField> {
    f.free_propagate(t)
}

/// Symbol of `∂ₓʲ`. Odd orders vanish on the Nyquist mode.
pub fn derivative_symbol(xi: f64, order: u32, nyquist: bool) -> Complex64 {
    if order == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if nyquist && order % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, xi).powu(order)
}

/// Symbol of `Dˢ = |∂ₓ|ˢ`, with `|0|ˢ = 0` for `s > 0`.
pub fn fractional_symbol(xi: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if xi == 0.0 {
        0.0
    } else {
        xi.abs().powf(s)
    }
}

/// Symbol of `Jˢ = (1 - ∂ₓ²)^{s/2}`.
pub fn bessel_symbol(xi: f64, s: f64) -> f64 {
    (1.0 + xi * xi).powf(0.5 * s)
}

/// Symbol of the free group `W(t) = e^{-t∂ₓ⁵}`, i.e. `e^{-itξ⁵}`.
///
/// The Nyquist mode is left invariant: a real unimodular group symbol on a
/// single self-conjugate mode must be identically one.
pub fn free_symbol(xi: f64, t: f64, nyquist: bool) -> Complex64 {
    if nyquist {
        return Complex64::new(1.0, 0.0);
    }
    let phase = -t * xi.powi(5);
    Complex64::new(phase.cos(), phase.sin())
}
