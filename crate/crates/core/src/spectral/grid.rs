use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Uniform periodic grid on `[-L, L)` with cached FFT plans.
///
/// Cloning is cheap; clones share the same plans and sample vectors.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    half_width: f64,
    n: usize,
    dx: f64,
    x: Vec<f64>,
    xi: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid(format!("half width must be positive, got {half_width}")));
        }
        if n < 8 || n % 2 != 0 {
            return Err(Error::invalid(format!("grid size must be even and at least 8, got {n}")));
        }
        let dx = 2.0 * half_width / n as f64;
        let x = (0..n).map(|j| -half_width + j as f64 * dx).collect();
        let xi = (0..n)
            .map(|i| PI * mode_number(i, n) as f64 / half_width)
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner { half_width, n, dx, x, xi, forward, inverse }),
        })
    }

    pub fn half_width(&self) -> f64 {
        self.inner.half_width
    }

    pub fn len(&self) -> usize {
        self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.inner.dx
    }

    /// Sample points `x_j = -L + j·dx`.
    pub fn points(&self) -> &[f64] {
        &self.inner.x
    }

    /// Wavenumbers `ξ` in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.xi
    }

    /// Signed mode number `m` of FFT index `i` (so `ξ = πm/L`).
    pub fn mode(&self, i: usize) -> i64 {
        mode_number(i, self.inner.n)
    }

    pub fn nyquist_index(&self) -> usize {
        self.inner.n / 2
    }

    /// Largest `|m|` kept by the 2/3 dealiasing rule. Quadratic products of
    /// fields supported on `|m| ≤ K` alias only onto modes above `K`.
    pub fn dealias_cutoff(&self) -> usize {
        (self.inner.n - 1) / 3
    }

    /// Index of the grid point mirrored through `x = 0`, i.e. `-x_j` modulo the period.
    pub fn mirror_index(&self, j: usize) -> usize {
        (self.inner.n - j) % self.inner.n
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n && self.inner.half_width == other.inner.half_width)
    }

    /// Forward transform in place, scaled by `1/n`.
    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.inner.forward.process(buf);
        let scale = 1.0 / self.inner.n as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
    }

    /// Unscaled inverse transform in place.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.inner.inverse.process(buf);
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("half_width", &self.inner.half_width)
            .field("n", &self.inner.n)
            .field("dx", &self.inner.dx)
            .finish()
    }
}

fn mode_number(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
