use crate::spectral::{bessel_symbol, Grid, RealField};
use crate::weights::{truncated_family, WeightFamily};
use crate::{Error, Result};

/// Weight used by the weighted norms.
///
/// `Smooth` stands for `⟨x⟩`, which has no periodic extension; it is
/// realized as `w_N` with `N = ⌊0.8·L/3⌋` so the plateau starts inside the
/// box. `Modulus` is the literal `|x|`, defined on the box `[−L, L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightChoice {
    Smooth,
    Truncated(u32),
    Modulus,
}

impl WeightChoice {
    /// The `N` used for `w_N`; `None` for `Modulus`.
    pub fn truncation(&self, grid: &Grid) -> Result<Option<u32>> {
        match *self {
            WeightChoice::Smooth => {
                let n = (0.8 * grid.half_width() / 3.0).floor();
                if n < 1.0 {
                    return Err(Error::DomainTooSmall(format!(
                        "half width {} too small for a truncated weight",
                        grid.half_width()
                    )));
                }
                Ok(Some(n as u32))
            }
            WeightChoice::Truncated(n) => Ok(Some(n)),
            WeightChoice::Modulus => Ok(None),
        }
    }

    /// `w` and its derivatives on the grid. Not available for `Modulus`.
    pub fn family(&self, grid: &Grid) -> Result<WeightFamily> {
        match self.truncation(grid)? {
            Some(n) => truncated_family(grid, n),
            None => Err(Error::invalid("|x| is not smooth; no derivatives available")),
        }
    }

    /// Samples of `w^power`.
    pub fn powered(&self, grid: &Grid, power: f64) -> Result<Vec<f64>> {
        if power == 0.0 {
            return Ok(vec![1.0; grid.len()]);
        }
        match self.truncation(grid)? {
            Some(n) => Ok(truncated_family(grid, n)?.values().iter().map(|w| w.powf(power)).collect()),
            None => Ok(grid.points().iter().map(|x| x.abs().powf(power)).collect()),
        }
    }
}

/// `‖Jˢf‖_{L²}`.
pub fn sobolev_norm(f: &RealField, s: f64) -> f64 {
    if s == 0.0 {
        return f.to_spectrum().l2_norm();
    }
    f.to_spectrum().weighted_energy(|xi| bessel_symbol(xi, 2.0 * s)).sqrt()
}

/// `‖u‖²_{H²}` as `‖J²u‖²`.
pub fn h2_squared(f: &RealField) -> f64 {
    f.to_spectrum().weighted_energy(|xi| bessel_symbol(xi, 4.0))
}

/// `(∫ f² w^{2r} dx)^{1/2}` by the trapezoid rule.
pub fn weighted_l2_norm(f: &RealField, r: f64, weight: WeightChoice) -> Result<f64> {
    let p = weight.powered(f.grid(), 2.0 * r)?;
    let sum: f64 = f.values().iter().zip(&p).map(|(v, w)| v * v * w).sum();
    Ok((f.grid().dx() * sum).sqrt())
}

/// `(I₁, I₂)` with `I₁ = ∫f²` and `I₂ = ∫f^{k+2}/((k+1)(k+2)) + ∫(f'')²/2`,
/// i.e. `∫f³/6 + ∫(f'')²/2` for `k = 1` and `∫f⁴/12 + ∫(f'')²/2` for `k = 2`.
pub fn conserved_quantities(f: &RealField, k: u32) -> Result<(f64, f64)> {
    let curvature = f.derivative(2)?.integral_of_power(2);
    let i1 = f.integral_of_power(2);
    let i2 = match k {
        1 => f.integral_of_power(3) / 6.0 + 0.5 * curvature,
        2 => f.integral_of_power(4) / 12.0 + 0.5 * curvature,
        _ => return Err(Error::invalid(format!("nonlinearity power must be 1 or 2, got {k}"))),
    };
    Ok((i1, i2))
}
