use serde::Serialize;

use super::norms::{sobolev_norm, weighted_l2_norm, WeightChoice};
use crate::evolution::Trajectory;
use crate::spectral::RealField;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

/// Which variable carries the outer norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nesting {
    /// `L^p_x L^q_T`: time norm inside.
    SpaceOuter,
    /// `L^q_T L^p_x`: space norm inside.
    TimeOuter,
}

/// Operator applied to every snapshot before the norm is taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prefix {
    None,
    Derivative(u32),
    /// `Dˢ ∂ₓʲ`
    FractionalThenDerivative { s: f64, order: u32 },
}

impl Prefix {
    fn apply(&self, f: &RealField) -> Result<RealField> {
        match *self {
            Prefix::None => Ok(f.clone()),
            Prefix::Derivative(j) => f.derivative(j),
            Prefix::FractionalThenDerivative { s, order } => f.fractional_derivative(s)?.derivative(order),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    /// `sup_t ‖u(t)‖_{Hˢ}`
    Sobolev { s: f64 },
    /// `sup_t ‖w^r u(t)‖_{L²}`
    Weighted { r: f64, weight: WeightChoice },
    Mixed {
        space: Exponent,
        time: Exponent,
        nesting: Nesting,
        prefix: Prefix,
        /// When set, the norm is multiplied by `(1 + T)^{−ρ}`.
        rho: Option<f64>,
    },
}

impl NormSpec {
    pub fn space_time(space: Exponent, time: Exponent, prefix: Prefix) -> Self {
        NormSpec::Mixed { space, time, nesting: Nesting::SpaceOuter, prefix, rho: None }
    }

    pub fn time_space(time: Exponent, space: Exponent, prefix: Prefix) -> Self {
        NormSpec::Mixed { space, time, nesting: Nesting::TimeOuter, prefix, rho: None }
    }
}

/// Trapezoid weights in time; all zero for a single snapshot.
fn time_weights(len: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; len];
    if len == 1 {
        w[0] = 0.0;
    } else {
        w[0] = 0.5 * h;
        w[len - 1] = 0.5 * h;
    }
    w
}

/// `‖(a_i)‖` for the given exponent with quadrature weights `w`.
fn discrete_norm(values: impl Iterator<Item = f64>, weights: impl Iterator<Item = f64>, e: Exponent) -> f64 {
    match e {
        Exponent::Infinity => values.map(f64::abs).fold(0.0, f64::max),
        Exponent::Finite(p) => {
            let mut acc = 0.0;
            for (v, w) in values.zip(weights) {
                acc += w * v.abs().powf(p);
            }
            acc.powf(1.0 / p)
        }
    }
}

/// Mixed norm of already-transformed samples `rows[i][j] = v(t_i, x_j)`.
fn mixed_of_samples(rows: &[&[f64]], h: f64, dx: f64, space: Exponent, time: Exponent, nesting: Nesting) -> f64 {
    let tw = time_weights(rows.len(), h);
    let n = rows[0].len();
    match nesting {
        Nesting::SpaceOuter => {
            let inner = (0..n).map(|j| discrete_norm(rows.iter().map(|r| r[j]), tw.iter().copied(), time));
            discrete_norm(inner, std::iter::repeat(dx), space)
        }
        Nesting::TimeOuter => {
            let inner = rows.iter().map(|r| discrete_norm(r.iter().copied(), std::iter::repeat(dx), space));
            discrete_norm(inner, tw.iter().copied(), time)
        }
    }
}

/// Discrete space-time norm of a trajectory.
///
/// Inner time norms use trapezoid weights (max for `∞`), outer space norms a
/// Riemann sum with weight `dx` (max for `∞`).
pub fn mixed_spacetime_norm(traj: &Trajectory, spec: &NormSpec) -> Result<f64> {
    match *spec {
        NormSpec::Sobolev { s } => Ok(traj.fields().iter().map(|f| sobolev_norm(f, s)).fold(0.0, f64::max)),
        NormSpec::Weighted { r, weight } => {
            let mut sup: f64 = 0.0;
            for f in traj.fields() {
                sup = sup.max(weighted_l2_norm(f, r, weight)?);
            }
            Ok(sup)
        }
        NormSpec::Mixed { space, time, nesting, prefix, rho } => {
            let transformed = traj.fields().iter().map(|f| prefix.apply(f)).collect::<Result<Vec<_>>>()?;
            let rows: Vec<&[f64]> = transformed.iter().map(RealField::values).collect();
            let norm = mixed_of_samples(&rows, traj.spacing(), traj.grid().dx(), space, time, nesting);
            Ok(match rho {
                Some(rho) => norm * (1.0 + traj.final_time()).powf(-rho),
                None => norm,
            })
        }
    }
}

/// The `λ` family for one trajectory and `Λ = max λ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaNorms {
    pub values: Vec<f64>,
    pub max: f64,
}

/// The norms entering the contraction argument.
///
/// `k = 1`, `s = 4r`: `sup ‖u‖_{Hˢ}`, `‖∂ₓu‖_{L⁴_T L^∞_x}`,
/// `‖Dˢ∂ₓu‖_{L^∞_x L²_T}`, `(1+T)^{−ρ}‖u‖_{L²_x L^∞_T}`,
/// `‖|x|ʳu‖_{L^∞_T L²_x}`.
///
/// `k = 2`: `sup ‖u‖_{H²}`, `‖∂ₓ⁴u‖_{L^∞_x L²_T}`, `‖u‖_{L^{16/5}_x L^∞_T}`,
/// `‖u‖_{L⁴_x L^∞_T}`.
pub fn lambda_specs(r: f64, k: u32, rho: f64) -> Result<Vec<NormSpec>> {
    if !(rho > 0.75) {
        return Err(Error::invalid(format!("rho must exceed 3/4, got {rho}")));
    }
    use Exponent::{Finite, Infinity};
    match k {
        1 => Ok(vec![
            NormSpec::Sobolev { s: 4.0 * r },
            NormSpec::time_space(Finite(4.0), Infinity, Prefix::Derivative(1)),
            NormSpec::space_time(Infinity, Finite(2.0), Prefix::FractionalThenDerivative { s: 4.0 * r, order: 1 }),
            NormSpec::Mixed {
                space: Finite(2.0),
                time: Infinity,
                nesting: Nesting::SpaceOuter,
                prefix: Prefix::None,
                rho: Some(rho),
            },
            NormSpec::Weighted { r, weight: WeightChoice::Modulus },
        ]),
        2 => Ok(vec![
            NormSpec::Sobolev { s: 2.0 },
            NormSpec::space_time(Infinity, Finite(2.0), Prefix::Derivative(4)),
            NormSpec::space_time(Finite(3.2), Infinity, Prefix::None),
            NormSpec::space_time(Finite(4.0), Infinity, Prefix::None),
        ]),
        _ => Err(Error::invalid(format!("nonlinearity power must be 1 or 2, got {k}"))),
    }
}

pub fn lambda_norms(traj: &Trajectory, r: f64, k: u32, rho: f64) -> Result<LambdaNorms> {
    let values = lambda_specs(r, k, rho)?
        .iter()
        .map(|spec| mixed_spacetime_norm(traj, spec))
        .collect::<Result<Vec<_>>>()?;
    let max = values.iter().copied().fold(0.0, f64::max);
    Ok(LambdaNorms { values, max })
}

/// `λ` on every prefix `[0, t_i]` of the trajectory.
///
/// Derivatives are taken once per snapshot; each prefix then only re-runs
/// the quadratures.
pub fn running_lambda_norms(traj: &Trajectory, r: f64, k: u32, rho: f64) -> Result<Vec<LambdaNorms>> {
    let specs = lambda_specs(r, k, rho)?;
    let h = traj.spacing();
    let dx = traj.grid().dx();
    // per-spec: either per-snapshot scalars (sup-in-time norms) or transformed samples
    enum Prepared {
        Scalars(Vec<f64>),
        Samples { rows: Vec<RealField>, space: Exponent, time: Exponent, nesting: Nesting, rho: Option<f64> },
    }
    let prepared = specs
        .iter()
        .map(|spec| -> Result<Prepared> {
            Ok(match *spec {
                NormSpec::Sobolev { s } => Prepared::Scalars(traj.fields().iter().map(|f| sobolev_norm(f, s)).collect()),
                NormSpec::Weighted { r, weight } => Prepared::Scalars(
                    traj.fields().iter().map(|f| weighted_l2_norm(f, r, weight)).collect::<Result<_>>()?,
                ),
                NormSpec::Mixed { space, time, nesting, prefix, rho } => Prepared::Samples {
                    rows: traj.fields().iter().map(|f| prefix.apply(f)).collect::<Result<_>>()?,
                    space,
                    time,
                    nesting,
                    rho,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(traj.len());
    for m in 0..traj.len() {
        let t = traj.times()[m];
        let values: Vec<f64> = prepared
            .iter()
            .map(|p| match p {
                Prepared::Scalars(v) => v[..=m].iter().copied().fold(0.0, f64::max),
                Prepared::Samples { rows, space, time, nesting, rho } => {
                    let slices: Vec<&[f64]> = rows[..=m].iter().map(RealField::values).collect();
                    let norm = mixed_of_samples(&slices, h, dx, *space, *time, *nesting);
                    match rho {
                        Some(rho) => norm * (1.0 + t).powf(-rho),
                        None => norm,
                    }
                }
            })
            .collect();
        let max = values.iter().copied().fold(0.0, f64::max);
        out.push(LambdaNorms { values, max });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{Scheme, TrajectoryMeta};
    use crate::spectral::Grid;

    fn meta() -> TrajectoryMeta {
        TrajectoryMeta { k: 1, scheme: Scheme::External, dt: 0.1, dealias: true, nonlinear: true }
    }

    #[test]
    fn single_snapshot_time_integrals_vanish() {
        let g = Grid::new(10.0, 16).unwrap();
        let f = RealField::from_fn(&g, |x| (-x * x).exp()).unwrap();
        let traj = Trajectory::new(vec![0.0], vec![f], meta()).unwrap();
        let spec = NormSpec::space_time(Exponent::Finite(2.0), Exponent::Finite(2.0), Prefix::None);
        assert_eq!(mixed_spacetime_norm(&traj, &spec).unwrap(), 0.0);
    }

    #[test]
    fn rho_must_exceed_three_quarters() {
        assert!(lambda_specs(0.5, 1, 0.75).is_err());
        assert!(lambda_specs(0.5, 3, 1.0).is_err());
        assert_eq!(lambda_specs(0.5, 1, 1.0).unwrap().len(), 5);
        assert_eq!(lambda_specs(0.5, 2, 1.0).unwrap().len(), 4);
    }
}
