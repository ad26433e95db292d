use serde::Serialize;

use super::norms::{conserved_quantities, h2_squared, sobolev_norm, WeightChoice};
use crate::evolution::Trajectory;
use crate::spectral::RealField;
use crate::{Error, Result};

/// Both sides of an inequality `lhs ≤ C·rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioRecord {
    pub lhs: f64,
    pub rhs: f64,
}

impl RatioRecord {
    /// `lhs / rhs`, or `None` when `rhs = 0`.
    pub fn ratio(&self) -> Option<f64> {
        (self.rhs != 0.0).then(|| self.lhs / self.rhs)
    }
}

fn require_nonzero(f: &RealField) -> Result<()> {
    if f.max_abs() == 0.0 {
        return Err(Error::invalid("inequality probe needs a nonzero function"));
    }
    Ok(())
}

/// `‖J^{θa}(w^{(1−θ)b} f)‖` against `‖w^b f‖^{1−θ} ‖Jᵃf‖^θ`.
pub fn interpolation_check(f: &RealField, a: f64, b: f64, theta: f64, weight: WeightChoice) -> Result<RatioRecord> {
    require_nonzero(f)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::invalid("interpolation exponents must be positive"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::invalid(format!("theta must lie in (0, 1), got {theta}")));
    }
    let grid = f.grid();
    let partial = f.weighted(&weight.powered(grid, (1.0 - theta) * b)?);
    let lhs = sobolev_norm(&partial, theta * a);
    let full = f.weighted(&weight.powered(grid, b)?).l2_norm();
    let rhs = full.powf(1.0 - theta) * sobolev_norm(f, a).powf(theta);
    Ok(RatioRecord { lhs, rhs })
}

/// `‖w^b ∂ⁿf‖` against `‖Jⁿ(w^b f)‖`.
pub fn leibniz_check(f: &RealField, b: f64, n: u32, weight: WeightChoice) -> Result<RatioRecord> {
    if !(n == 1 || n == 2) {
        return Err(Error::invalid(format!("derivative order must be 1 or 2, got {n}")));
    }
    let w = weight.powered(f.grid(), b)?;
    let lhs = f.derivative(n)?.weighted(&w).l2_norm();
    let rhs = sobolev_norm(&f.weighted(&w), n as f64);
    Ok(RatioRecord { lhs, rhs })
}

/// Commutator of the free group with `|x|ʳ`, realized with `ψ = w_N^r − 1`:
/// `‖ψ·W(t)u₀ − W(t)(ψu₀)‖` against `(1+|t|)(‖u₀‖ + ‖D^{4r}u₀‖)`.
pub fn pointwise_formula_residual(u0: &RealField, r: f64, t: f64, weight: WeightChoice) -> Result<RatioRecord> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::invalid(format!("r must lie in (0, 1), got {r}")));
    }
    if weight == WeightChoice::Modulus {
        return Err(Error::invalid("the commutator probe needs a truncated weight"));
    }
    let psi: Vec<f64> = weight.powered(u0.grid(), r)?.iter().map(|w| w - 1.0).collect();
    let moved_then_weighted = u0.free_propagate(t)?.weighted(&psi);
    let weighted_then_moved = u0.weighted(&psi).free_propagate(t)?;
    let lhs = moved_then_weighted.sub(&weighted_then_moved).l2_norm();
    let rhs = (1.0 + t.abs()) * (u0.l2_norm() + u0.fractional_derivative(4.0 * r)?.l2_norm());
    Ok(RatioRecord { lhs, rhs })
}

/// Both sides of the weighted energy identity
///
/// `d/dt (pu,u) = 5(p'u_xx,u_xx) − 5(p'''u_x,u_x) + (p⁽⁵⁾u,u) + 2/(k+2)(p'u^{k+2},1)`
///
/// with `p = w^{2r}`, the left side by centered differences at interior
/// times. Returns `sup |LHS − RHS| / sup |RHS|`; when the right side
/// vanishes identically the normalization is `sup (pu,u)` instead.
pub fn weighted_energy_residual(traj: &Trajectory, r: f64, k: u32, weight: WeightChoice) -> Result<f64> {
    if !(k == 1 || k == 2) {
        return Err(Error::invalid(format!("nonlinearity power must be 1 or 2, got {k}")));
    }
    if traj.len() < 3 {
        return Err(Error::invalid("centered differences need at least 3 snapshots"));
    }
    let grid = traj.grid();
    let dx = grid.dx();
    let p = if r == 0.0 {
        let ones = vec![1.0; grid.len()];
        let zeros = vec![0.0; grid.len()];
        [ones, zeros.clone(), zeros.clone(), zeros.clone(), zeros.clone(), zeros]
    } else {
        let fam = weight.family(grid)?.power(2.0 * r);
        std::array::from_fn(|j| fam.derivative(j))
    };
    let inner = |w: &[f64], a: &[f64], b: &[f64]| -> f64 {
        dx * w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum::<f64>()
    };
    let energy: Vec<f64> = traj.fields().iter().map(|u| inner(&p[0], u.values(), u.values())).collect();
    let h = traj.spacing();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 1..traj.len() - 1 {
        let u = &traj.fields()[i];
        let ux = u.derivative(1)?;
        let uxx = u.derivative(2)?;
        let nonlinear: f64 = dx
            * p[1]
                .iter()
                .zip(u.values())
                .map(|(w, v)| w * v.powi(k as i32 + 2))
                .sum::<f64>();
        let rhs = 5.0 * inner(&p[1], uxx.values(), uxx.values()) - 5.0 * inner(&p[3], ux.values(), ux.values())
            + inner(&p[5], u.values(), u.values())
            + 2.0 / (k as f64 + 2.0) * nonlinear;
        let lhs = (energy[i + 1] - energy[i - 1]) / (2.0 * h);
        worst = worst.max((lhs - rhs).abs());
        scale = scale.max(rhs.abs());
    }
    if scale == 0.0 {
        scale = energy.iter().copied().fold(0.0, f64::max);
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(worst / scale)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AprioriBound {
    /// `sup_t ‖u(t)‖²_{H²}`
    pub max_h2_sq: f64,
    /// The bound evaluated at the initial data.
    pub bound: f64,
}

/// `sup_t ‖u(t)‖²_{H²}` against `K(‖u₀‖_{H²})`, where with `h = ‖u₀‖_{H²}`
/// `K = C(h² + h³ + h⁴)` for `k = 1` and `K = C h⁴ + h²` for `k = 2`.
pub fn apriori_h2_bound(traj: &Trajectory, k: u32, constant: f64) -> Result<AprioriBound> {
    let max_h2_sq = traj.fields().iter().map(h2_squared).fold(0.0, f64::max);
    let h = h2_squared(traj.initial()).sqrt();
    let bound = match k {
        1 => constant * (h.powi(2) + h.powi(3) + h.powi(4)),
        2 => constant * h.powi(4) + h.powi(2),
        _ => return Err(Error::invalid(format!("nonlinearity power must be 1 or 2, got {k}"))),
    };
    Ok(AprioriBound { max_h2_sq, bound })
}

/// Constant-free bound for `k = 2`: `sup_t ‖∂ₓ²u‖²` against `2·I₂(u₀)`,
/// that is `∫u₀⁴/6 + ∫(∂ₓ²u₀)²` (conservation of `I₂` with `∫u⁴ ≥ 0`).
pub fn second_derivative_bound(traj: &Trajectory) -> Result<RatioRecord> {
    let mut lhs: f64 = 0.0;
    for f in traj.fields() {
        lhs = lhs.max(f.derivative(2)?.integral_of_power(2));
    }
    let (_, i2) = conserved_quantities(traj.initial(), 2)?;
    Ok(RatioRecord { lhs, rhs: 2.0 * i2 })
}
