use num_complex::Complex64;

use super::{bessel_symbol, derivative_symbol, fractional_symbol, free_symbol, Grid, MAX_DERIVATIVE_ORDER};
use crate::{Error, Result};

/// Real samples of a function on a [`Grid`]. All samples are finite.
#[derive(Clone, Debug)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

/// Fourier coefficients of a field, in FFT order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl RealField {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().iter().map(|&x| f(x)).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `∫ u dx` by the (spectrally exact) periodic trapezoid rule.
    pub fn integral(&self) -> f64 {
        self.grid.dx() * self.values.iter().sum::<f64>()
    }

    /// `∫ u^p dx` by the periodic trapezoid rule.
    pub fn integral_of_power(&self, p: i32) -> f64 {
        self.grid.dx() * self.values.iter().map(|v| v.powi(p)).sum::<f64>()
    }

    /// `L²` norm through the spectral sum `2L Σ|û_k|²`.
    pub fn l2_norm(&self) -> f64 {
        self.to_spectrum().l2_norm()
    }

    pub fn pointwise(&self, other: &RealField, op: impl Fn(f64, f64) -> f64) -> RealField {
        debug_assert!(self.grid.same_as(&other.grid));
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        RealField { grid: self.grid.clone(), values }
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> RealField {
        RealField { grid: self.grid.clone(), values: self.values.iter().map(|&v| op(v)).collect() }
    }

    /// Multiply by sampled weights (same length as the grid).
    pub fn weighted(&self, weight: &[f64]) -> RealField {
        debug_assert_eq!(weight.len(), self.values.len());
        let values = self.values.iter().zip(weight).map(|(v, w)| v * w).collect();
        RealField { grid: self.grid.clone(), values }
    }

    pub fn scale(&self, c: f64) -> RealField {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &RealField) -> RealField {
        self.pointwise(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealField) -> RealField {
        self.pointwise(other, |a, b| a - b)
    }

    /// Reflection `u(x) ↦ u(-x)` on the periodic grid.
    pub fn reflect(&self) -> RealField {
        let values = (0..self.values.len()).map(|j| self.values[self.grid.mirror_index(j)]).collect();
        RealField { grid: self.grid.clone(), values }
    }

    pub fn to_spectrum(&self) -> Spectrum {
        let mut coeffs: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.grid.forward(&mut coeffs);
        Spectrum { grid: self.grid.clone(), coeffs }
    }

    pub fn derivative(&self, order: u32) -> Result<RealField> {
        if order > MAX_DERIVATIVE_ORDER {
            return Err(Error::invalid(format!(
                "derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}"
            )));
        }
        if order == 0 {
            return Ok(self.clone());
        }
        Ok(self.to_spectrum().derivative(order).to_field())
    }

    pub fn fractional_derivative(&self, s: f64) -> Result<RealField> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::invalid(format!("fractional order must be non-negative, got {s}")));
        }
        Ok(self.to_spectrum().fractional_derivative(s).to_field())
    }

    pub fn bessel_potential(&self, s: f64) -> Result<RealField> {
        if !s.is_finite() {
            return Err(Error::invalid("Bessel potential order must be finite"));
        }
        Ok(self.to_spectrum().bessel_potential(s).to_field())
    }

    pub fn free_propagate(&self, t: f64) -> Result<RealField> {
        if !t.is_finite() {
            return Err(Error::invalid("propagation time must be finite"));
        }
        if t == 0.0 {
            return Ok(self.clone());
        }
        Ok(self.to_spectrum().free_propagate(t).to_field())
    }
}

impl Spectrum {
    pub fn new(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::invalid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(Self { grid: grid.clone(), coeffs })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), coeffs: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Inverse transform, keeping the real part.
    pub fn to_field(&self) -> RealField {
        let samples = self.to_complex_samples();
        RealField { grid: self.grid.clone(), values: samples.iter().map(|c| c.re).collect() }
    }

    /// Inverse transform without discarding the imaginary part.
    pub fn to_complex_samples(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        self.grid.inverse(&mut buf);
        buf
    }

    /// `L²` norm of the represented function, `(2L Σ|û_k|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.weighted_energy(|_| 1.0).sqrt()
    }

    /// `2L Σ m(ξ_k) |û_k|²`.
    pub fn weighted_energy(&self, m: impl Fn(f64) -> f64) -> f64 {
        let xi = self.grid.wavenumbers();
        let sum: f64 = self.coeffs.iter().zip(xi).map(|(c, &k)| m(k) * c.norm_sqr()).sum();
        2.0 * self.grid.half_width() * sum
    }

    /// Largest violation of `û_{-k} = conj(û_k)` (the Nyquist coefficient
    /// must be real).
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.coeffs.len();
        (0..n)
            .map(|i| (self.coeffs[(n - i) % n] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Apply a multiplier `m(ξ, is_nyquist)`.
    pub fn apply(&self, m: impl Fn(f64, bool) -> Complex64) -> Spectrum {
        let nyq = self.grid.nyquist_index();
        let xi = self.grid.wavenumbers();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * m(xi[i], i == nyq))
            .collect();
        Spectrum { grid: self.grid.clone(), coeffs }
    }

    pub fn derivative(&self, order: u32) -> Spectrum {
        self.apply(|xi, nyq| derivative_symbol(xi, order, nyq))
    }

    pub fn fractional_derivative(&self, s: f64) -> Spectrum {
        self.apply(|xi, _| Complex64::new(fractional_symbol(xi, s), 0.0))
    }

    pub fn bessel_potential(&self, s: f64) -> Spectrum {
        self.apply(|xi, _| Complex64::new(bessel_symbol(xi, s), 0.0))
    }

    pub fn free_propagate(&self, t: f64) -> Spectrum {
        self.apply(|xi, nyq| free_symbol(xi, t, nyq))
    }

    /// Zero every mode with `|m|` above the 2/3-rule cutoff.
    pub fn dealias(&mut self) {
        let cutoff = self.grid.dealias_cutoff() as i64;
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            if self.grid.mode(i).abs() > cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn sub(&self, other: &Spectrum) -> Spectrum {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Spectrum { grid: self.grid.clone(), coeffs }
    }
}
