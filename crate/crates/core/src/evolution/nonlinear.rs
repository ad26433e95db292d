use num_complex::Complex64;

use super::Model;
use crate::spectral::{Grid, RealField};
use crate::Result;

/// Evaluates `−P(uᵏ ∂ₓu)` on spectra, `P` the 2/3-rule projection.
///
/// Owns its scratch buffers, so each worker needs its own instance.
pub(crate) struct NonlinearOperator {
    grid: Grid,
    k: u32,
    active: bool,
    keep: Vec<bool>,
    buf: Vec<Complex64>,
}

impl NonlinearOperator {
    pub(crate) fn new(grid: &Grid, model: &Model) -> Self {
        let cutoff = grid.dealias_cutoff() as i64;
        let keep = (0..grid.len())
            .map(|i| !model.dealias || grid.mode(i).abs() <= cutoff)
            .collect();
        Self {
            grid: grid.clone(),
            k: model.k,
            active: model.nonlinear,
            keep,
            buf: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Writes the transformed nonlinear term of `u_hat` into `out`.
    pub(crate) fn apply(&mut self, u_hat: &[Complex64], out: &mut [Complex64]) {
        if !self.active {
            out.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            return;
        }
        let xi = self.grid.wavenumbers();
        let nyq = self.grid.nyquist_index();
        // u and ∂ₓu are both real, so one inverse transform of û + i·(iξû)
        // yields u in the real part and ∂ₓu in the imaginary part.
        for i in 0..u_hat.len() {
            self.buf[i] = if self.keep[i] {
                let dxi = if i == nyq { 0.0 } else { xi[i] };
                u_hat[i] * (1.0 - dxi)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        self.grid.inverse(&mut self.buf);
        for c in self.buf.iter_mut() {
            let (u, ux) = (c.re, c.im);
            let v = if self.k == 1 { -u * ux } else { -u * u * ux };
            *c = Complex64::new(v, 0.0);
        }
        self.grid.forward(&mut self.buf);
        for i in 0..out.len() {
            out[i] = if self.keep[i] { self.buf[i] } else { Complex64::new(0.0, 0.0) };
        }
    }
}

/// `−uᵏ∂ₓu`, computed pseudospectrally with 2/3-rule dealiasing.
pub fn nonlinear_term(f: &RealField, k: u32) -> Result<RealField> {
    let model = Model::new(k)?;
    let mut op = NonlinearOperator::new(f.grid(), &model);
    let spec = f.to_spectrum();
    let mut out = crate::spectral::Spectrum::zeros(f.grid());
    op.apply(spec.coeffs(), out.coeffs_mut());
    Ok(out.to_field())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn max_err(a: &RealField, b: &RealField) -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_and_constant_give_zero() {
        let g = Grid::new(PI, 16).unwrap();
        for k in [1, 2] {
            assert_eq!(nonlinear_term(&RealField::zeros(&g), k).unwrap().max_abs(), 0.0);
            let c = RealField::from_fn(&g, |_| 1.7).unwrap();
            assert!(nonlinear_term(&c, k).unwrap().max_abs() < 1e-14);
        }
    }

    #[test]
    fn sine_product() {
        for n in [8, 32] {
            let g = Grid::new(PI, n).unwrap();
            let f = RealField::from_fn(&g, f64::sin).unwrap();
            let expected = RealField::from_fn(&g, |x| -0.5 * (2.0 * x).sin()).unwrap();
            assert!(max_err(&nonlinear_term(&f, 1).unwrap(), &expected) <= 1e-12);
        }
    }

    #[test]
    fn cubic_product_resolved() {
        // −sin² x cos x = −(cos x − cos 3x)/4
        let g = Grid::new(PI, 32).unwrap();
        let f = RealField::from_fn(&g, f64::sin).unwrap();
        let expected = RealField::from_fn(&g, |x| -(x.cos() - (3.0 * x).cos()) / 4.0).unwrap();
        assert!(max_err(&nonlinear_term(&f, 2).unwrap(), &expected) <= 1e-12);
    }

    #[test]
    fn rejects_other_powers() {
        let g = Grid::new(PI, 8).unwrap();
        assert!(nonlinear_term(&RealField::zeros(&g), 3).is_err());
    }

    #[test]
    fn dealiasing_removes_upper_third() {
        let g = Grid::new(PI, 16).unwrap();
        // the cutoff is (n−1)/3 = 5, so mode 6 is dropped before the product
        let f = RealField::from_fn(&g, |x| (6.0 * x).sin()).unwrap();
        assert!(nonlinear_term(&f, 1).unwrap().max_abs() < 1e-14);
    }
}
