//! Weight functions and their derivatives up to fifth order.
//!
//! - `⟨x⟩^{2r}`, the Japanese bracket power;
//! - the truncated weight `w_N`: `⟨x⟩` for `|x| ≤ N`, `2N` for `|x| ≥ 3N`,
//!   non-decreasing in `|x|`, with `|w_N^{(j)}| ≤ c_j / w_N^{j−1}`;
//! - the odd weights `φ_{N,α}` and `φ̃_{N,α}`: odd extensions of
//!   `(1+x²)^{α+1/2} − 1` (resp. `(1+x²)^α − 1`) on `[0, N]` that are constant
//!   `(2N²)^{α+1/2}` (resp. `(2N²)^α`) for `x ≥ 10N`.
//!
//! Transitions use a `C^∞` blend (see `HalfLineWeight`); derivatives come
//! from jet arithmetic on the closed forms, never from finite differences.

mod jet;
mod profile;

pub use jet::{Jet, JET_LEN};

use profile::{Core, HalfLineWeight};

use std::sync::Mutex;

use crate::spectral::Grid;
use crate::{Error, Result};

/// Highest derivative order sampled for a weight.
pub const MAX_WEIGHT_DERIVATIVE: usize = 5;

/// Fraction of the half width a weight's plateau must start inside.
const ADMISSIBLE_FRACTION: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightKind {
    /// `⟨x⟩^{2r}`
    Smooth { r: f64 },
    /// `w_N`
    Truncated { n: u32 },
    /// `φ_{N,α}`
    Odd { n: u32, alpha: f64 },
    /// `φ̃_{N,α}`
    OddTilde { n: u32, alpha: f64 },
}

/// Which odd weight to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddVariant {
    Phi,
    PhiTilde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Parity {
    Even,
    Odd,
}

/// A weight as an analytic function of `x`.
#[derive(Clone, Debug)]
pub struct WeightProfile {
    kind: WeightKind,
    half: HalfLine,
    parity: Parity,
}

#[derive(Clone, Debug)]
enum HalfLine {
    Closed(Core),
    Blended(HalfLineWeight),
}

impl WeightProfile {
    /// `⟨x⟩^{2r} = (1 + x²)^r`.
    pub fn smooth(r: f64) -> Self {
        Self {
            kind: WeightKind::Smooth { r },
            half: HalfLine::Closed(Core::Bracket { exponent: r }),
            parity: Parity::Even,
        }
    }

    /// `w_N` for `N ≥ 1`; the transition sits inside `[N, 3N]`.
    pub fn truncated(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("truncation parameter N must be positive"));
        }
        let nf = n as f64;
        let half = HalfLineWeight::new(Core::Bracket { exponent: 0.5 }, nf, 3.0 * nf, 2.0 * nf);
        Ok(Self { kind: WeightKind::Truncated { n }, half: HalfLine::Blended(half), parity: Parity::Even })
    }

    /// `φ_{N,α}` or `φ̃_{N,α}` for `N ≥ 1`, `α ∈ (0, 1/8]`.
    pub fn odd(n: u32, alpha: f64, variant: OddVariant) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("truncation parameter N must be positive"));
        }
        if !(alpha > 0.0 && alpha <= 0.125) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1/8], got {alpha}")));
        }
        let nf = n as f64;
        let exponent = match variant {
            OddVariant::Phi => alpha + 0.5,
            OddVariant::PhiTilde => alpha,
        };
        let plateau = (2.0 * nf * nf).powf(exponent);
        let half = HalfLineWeight::new(Core::ShiftedBracket { exponent }, nf, 10.0 * nf, plateau);
        let kind = match variant {
            OddVariant::Phi => WeightKind::Odd { n, alpha },
            OddVariant::PhiTilde => WeightKind::OddTilde { n, alpha },
        };
        Ok(Self { kind, half: HalfLine::Blended(half), parity: Parity::Odd })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Where the weight becomes constant (`None` for `⟨x⟩^{2r}`).
    pub fn plateau_start(&self) -> Option<f64> {
        match &self.half {
            HalfLine::Closed(_) => None,
            HalfLine::Blended(h) => Some(h.end()),
        }
    }

    fn half_jet(&self, x: f64) -> Jet {
        match &self.half {
            HalfLine::Closed(core) => core.jet(Jet::variable(x)),
            HalfLine::Blended(h) => h.jet(x),
        }
    }

    /// Taylor expansion of the weight at `x`.
    pub fn jet(&self, x: f64) -> Jet {
        if x > 0.0 {
            return self.half_jet(x);
        }
        let reflected = self.half_jet(-x).reflect();
        match self.parity {
            Parity::Even => reflected,
            Parity::Odd if x == 0.0 => {
                // Odd extension: value and even derivatives vanish at the origin.
                let mut c = *reflected.coeffs();
                c[0] = 0.0;
                c[2] = 0.0;
                c[4] = 0.0;
                Jet::from_coeffs(c)
            }
            Parity::Odd => -reflected,
        }
    }

    pub fn sample(&self, grid: &Grid) -> WeightFamily {
        WeightFamily {
            kind: self.kind,
            jets: grid.points().iter().map(|&x| self.jet(x)).collect(),
        }
    }
}

/// A weight and its first five derivatives sampled on a grid.
#[derive(Clone, Debug)]
pub struct WeightFamily {
    kind: WeightKind,
    jets: Vec<Jet>,
}

impl WeightFamily {
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.jets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jets.is_empty()
    }

    /// Samples of the `j`-th derivative.
    pub fn derivative(&self, j: usize) -> Vec<f64> {
        assert!(j <= MAX_WEIGHT_DERIVATIVE);
        self.jets.iter().map(|jet| jet.derivative(j)).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.derivative(0)
    }

    /// The family of `weight^p` (requires a positive weight).
    pub fn power(&self, p: f64) -> WeightFamily {
        WeightFamily { kind: self.kind, jets: self.jets.iter().map(|j| j.powf(p)).collect() }
    }
}

fn check_order(j: usize) -> Result<()> {
    if j > MAX_WEIGHT_DERIVATIVE {
        return Err(Error::invalid(format!(
            "weight derivative order {j} exceeds {MAX_WEIGHT_DERIVATIVE}"
        )));
    }
    Ok(())
}

fn check_fits(grid: &Grid, reach: f64, what: &str) -> Result<()> {
    let limit = ADMISSIBLE_FRACTION * grid.half_width();
    if reach >= limit {
        return Err(Error::DomainTooSmall(format!(
            "{what} needs {reach} < 0.9·L = {limit}"
        )));
    }
    Ok(())
}

/// Samples of `dʲ/dxʲ ⟨x⟩^{2r}`.
pub fn smooth_weight(grid: &Grid, r: f64, j: usize) -> Result<Vec<f64>> {
    check_order(j)?;
    Ok(WeightProfile::smooth(r).sample(grid).derivative(j))
}

/// Samples of `w_N^{(j)}`. Requires `3N < 0.9·L`.
pub fn truncated_weight(grid: &Grid, n: u32, j: usize) -> Result<Vec<f64>> {
    check_order(j)?;
    Ok(truncated_family(grid, n)?.derivative(j))
}

/// `w_N` with all derivatives sampled on `grid`. Requires `3N < 0.9·L`.
///
/// Sampling costs a quadrature per grid point, so recent results are cached
/// by `(L, n, N)`.
pub fn truncated_family(grid: &Grid, n: u32) -> Result<WeightFamily> {
    type Key = (u64, usize, u32);
    static CACHE: Mutex<Vec<(Key, WeightFamily)>> = Mutex::new(Vec::new());
    const CACHE_SIZE: usize = 16;

    if n == 0 {
        return Err(Error::invalid("truncation parameter N must be positive"));
    }
    check_fits(grid, 3.0 * n as f64, "truncated weight")?;
    let key = (grid.half_width().to_bits(), grid.len(), n);
    if let Some((_, fam)) = CACHE.lock().unwrap_or_else(|e| e.into_inner()).iter().find(|(k, _)| *k == key) {
        return Ok(fam.clone());
    }
    let fam = WeightProfile::truncated(n)?.sample(grid);
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.len() == CACHE_SIZE {
        cache.remove(0);
    }
    cache.push((key, fam.clone()));
    Ok(fam)
}

/// Samples of `φ_{N,α}^{(j)}` or `φ̃_{N,α}^{(j)}`. Requires `10N < 0.9·L`.
pub fn odd_weight(grid: &Grid, n: u32, alpha: f64, variant: OddVariant, j: usize) -> Result<Vec<f64>> {
    check_order(j)?;
    let profile = WeightProfile::odd(n, alpha, variant)?;
    check_fits(grid, 10.0 * n as f64, "odd weight")?;
    Ok(profile.sample(grid).derivative(j))
}

/// Family selector for [`verify_weight_bounds`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundVariant {
    Truncated,
    Odd { alpha: f64 },
    OddTilde { alpha: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundRow {
    pub n: u32,
    pub order: usize,
    /// `max |w_N^{(j)}|·w_N^{j−1}` for `w_N`, `max |φ^{(j)}|` for the odd weights.
    pub constant: f64,
}

/// Measured derivative constants for each `(N, j)`.
pub fn verify_weight_bounds(
    grid: &Grid,
    variant: BoundVariant,
    n_list: &[u32],
    orders: &[usize],
) -> Result<Vec<BoundRow>> {
    let mut rows = Vec::with_capacity(n_list.len() * orders.len());
    for &n in n_list {
        let family = match variant {
            BoundVariant::Truncated => {
                check_fits(grid, 3.0 * n as f64, "truncated weight")?;
                WeightProfile::truncated(n)?.sample(grid)
            }
            BoundVariant::Odd { alpha } => {
                check_fits(grid, 10.0 * n as f64, "odd weight")?;
                WeightProfile::odd(n, alpha, OddVariant::Phi)?.sample(grid)
            }
            BoundVariant::OddTilde { alpha } => {
                check_fits(grid, 10.0 * n as f64, "odd weight")?;
                WeightProfile::odd(n, alpha, OddVariant::PhiTilde)?.sample(grid)
            }
        };
        let values = family.values();
        for &j in orders {
            if j == 0 {
                return Err(Error::invalid("derivative bounds are defined for j ≥ 1"));
            }
            check_order(j)?;
            let deriv = family.derivative(j);
            let constant = match variant {
                BoundVariant::Truncated => deriv
                    .iter()
                    .zip(&values)
                    .map(|(d, w)| d.abs() * w.powi(j as i32 - 1))
                    .fold(0.0, f64::max),
                _ => deriv.iter().fold(0.0_f64, |m, d| m.max(d.abs())),
            };
            rows.push(BoundRow { n, order: j, constant });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn wide() -> Grid {
        Grid::new(200.0, 4096).unwrap()
    }

    fn at(grid: &Grid, samples: &[f64], x: f64) -> f64 {
        let j = grid.points().iter().position(|&p| (p - x).abs() < 1e-9).expect("grid point");
        samples[j]
    }

    #[test]
    fn smooth_weight_examples() {
        let p = WeightProfile::smooth(0.5);
        assert_eq!(p.jet(0.0).value(), 1.0);
        assert!((p.jet(3f64.sqrt()).value() - 2.0).abs() < 1e-15);
        let q = WeightProfile::smooth(1.0);
        for x in [-1.5, 0.0, 0.25, 4.0] {
            assert!((q.jet(x).derivative(1) - 2.0 * x).abs() < 1e-13);
        }
        let g = Grid::new(4.0, 16).unwrap();
        let d1 = smooth_weight(&g, 1.0, 1).unwrap();
        for (x, d) in g.points().iter().zip(d1) {
            assert!((d - 2.0 * x).abs() < 1e-12);
        }
        assert!(smooth_weight(&g, 1.0, 6).is_err());
    }

    #[test]
    fn truncated_weight_examples() {
        let g = wide();
        let n = 8;
        let w = truncated_weight(&g, n, 0).unwrap();
        assert_eq!(at(&g, &w, 0.0), 1.0);
        let x4n = g.points().iter().copied().find(|x| (x - 32.0).abs() < 0.06).unwrap();
        assert_eq!(at(&g, &w, x4n), 16.0);
        // non-decreasing in |x| on each half, up to quadrature roundoff where
        // the profile flattens into the plateau
        let half = g.len() / 2;
        for j in half..g.len() - 1 {
            assert!(w[j + 1] >= w[j] * (1.0 - 1e-13), "x = {}", g.points()[j]);
        }
        for j in 1..half {
            assert!(w[j] >= w[j + 1] * (1.0 - 1e-13), "x = {}", g.points()[j]);
        }
    }

    #[test]
    fn truncated_matches_bracket_inside() {
        let g = wide();
        let w = WeightProfile::truncated(4).unwrap();
        let s = WeightProfile::smooth(0.5);
        for &x in g.points().iter().filter(|x| x.abs() <= 4.0) {
            assert_eq!(w.jet(x), s.jet(x));
        }
    }

    #[test]
    fn truncated_domain_check() {
        let g = Grid::new(PI, 64).unwrap();
        assert!(matches!(truncated_weight(&g, 1, 0), Err(Error::DomainTooSmall(_))));
        assert!(matches!(truncated_weight(&g, 0, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn odd_weight_examples() {
        let g = wide();
        let (n, alpha) = (4, 0.125);
        let phi = odd_weight(&g, n, alpha, OddVariant::Phi, 0).unwrap();
        assert_eq!(at(&g, &phi, 0.0), 0.0);
        let x11 = g.points().iter().copied().find(|x| (x - 44.0).abs() < 0.06).unwrap();
        let plateau = (2.0 * 16.0f64).powf(0.625);
        assert_eq!(at(&g, &phi, x11), plateau);
        for j in 1..g.len() {
            let m = g.mirror_index(j);
            assert_eq!(phi[j], -phi[m]);
        }
        let tilde = odd_weight(&g, n, alpha, OddVariant::PhiTilde, 0).unwrap();
        assert_eq!(at(&g, &tilde, x11), 32f64.powf(0.125));
        assert!(odd_weight(&g, n, 0.2, OddVariant::Phi, 0).is_err());
        assert!(odd_weight(&g, n, 0.0, OddVariant::Phi, 0).is_err());
        assert!(matches!(odd_weight(&g, 20, alpha, OddVariant::Phi, 0), Err(Error::DomainTooSmall(_))));
    }

    #[test]
    fn bound_table_rejects_order_zero() {
        let g = wide();
        assert!(verify_weight_bounds(&g, BoundVariant::Truncated, &[4], &[0]).is_err());
    }

    #[test]
    fn first_order_constant_at_least_one() {
        let g = wide();
        let rows = verify_weight_bounds(&g, BoundVariant::Truncated, &[4, 16], &[1]).unwrap();
        for row in &rows {
            // sup|⟨x⟩'| over |x| ≤ N is N/⟨N⟩, close to 1
            assert!(row.constant.is_finite() && row.constant >= 4.0 / 17f64.sqrt() - 1e-12);
        }
        let ratio = rows[0].constant / rows[1].constant;
        assert!((0.5..=2.0).contains(&ratio));
    }

    #[test]
    fn power_family_uses_chain_rule() {
        let g = Grid::new(30.0, 256).unwrap();
        let w = WeightProfile::truncated(4).unwrap().sample(&g);
        let p = w.power(1.0);
        let (w1, p1) = (w.derivative(1), w.power(2.0).derivative(1));
        for j in 0..g.len() {
            assert!((p1[j] - 2.0 * w.values()[j] * w1[j]).abs() < 1e-10);
        }
        assert_eq!(p.values(), w.values());
    }
}
