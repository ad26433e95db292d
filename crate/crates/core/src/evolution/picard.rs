use num_complex::Complex64;

use super::etdrk4::check_blowup;
use super::{Model, NonlinearOperator, Scheme, Trajectory, TrajectoryMeta};
use crate::spectral::{free_symbol, Grid, RealField, Spectrum};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PicardOptions {
    /// Number of time intervals on `[0, T]` (at least 2).
    pub nt: usize,
    /// Stop once `sup_t ‖u^{(m+1)} − u^{(m)}‖_{L²} < tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self { nt: 64, tol: 1e-10, max_iter: 60 }
    }
}

#[derive(Clone, Debug)]
pub struct PicardOutcome {
    pub trajectory: Trajectory,
    pub iterations: usize,
    /// `sup_t` size of the last update.
    pub last_update: f64,
    /// Window actually solved (smaller than requested after halving).
    pub t_final: f64,
}

/// Global-in-time fixed-point solver for the Duhamel formula.
///
/// The time integral uses composite Simpson (with a 3/8 panel or a
/// three-point start for odd indices) in the interaction picture
/// `W(−t')N(u(t'))`; the propagators themselves are exact.
#[derive(Clone, Copy, Debug)]
pub struct PicardSolver {
    model: Model,
    options: PicardOptions,
}

impl PicardSolver {
    pub fn new(model: Model, options: PicardOptions) -> Self {
        Self { model, options }
    }

    pub fn solve(&self, u0: &RealField, t_final: f64) -> Result<PicardOutcome> {
        let PicardOptions { nt, tol, max_iter } = self.options;
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::invalid(format!("final time must be positive, got {t_final}")));
        }
        if !(tol > 0.0) {
            return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
        }
        if nt < 2 {
            return Err(Error::invalid("Picard time grid needs at least 2 intervals"));
        }
        let grid = u0.grid().clone();
        let times: Vec<f64> = (0..=nt).map(|i| t_final * i as f64 / nt as f64).collect();
        let h = t_final / nt as f64;
        let u0_hat = u0.to_spectrum().into_coeffs();
        let mut duhamel = DuhamelMap::new(&grid, &self.model, &times, h);

        let mut iterate: Vec<Vec<Complex64>> = times.iter().map(|&t| duhamel.free(&u0_hat, t)).collect();
        let mut previous = f64::INFINITY;
        let mut rising = 0;
        for m in 1..=max_iter {
            let next = duhamel.apply(&u0_hat, &iterate);
            let mut update: f64 = 0.0;
            for (i, (a, b)) in next.iter().zip(&iterate).enumerate() {
                check_blowup(&grid, a, times[i])?;
                update = update.max(l2_distance(&grid, a, b));
            }
            if !update.is_finite() {
                return Err(Error::BlowUp { time: t_final, max_abs: f64::INFINITY });
            }
            iterate = next;
            if update < tol {
                let trajectory = self.assemble(&grid, times, iterate, h)?;
                return Ok(PicardOutcome { trajectory, iterations: m, last_update: update, t_final });
            }
            rising = if update > previous { rising + 1 } else { 0 };
            if rising >= 2 {
                return Err(Error::NoContraction { iterations: m, last_update: update });
            }
            previous = update;
        }
        Err(Error::NoContraction { iterations: max_iter, last_update: previous })
    }

    /// Like [`solve`](Self::solve), halving `T` after each failure to contract.
    pub fn solve_shrinking(&self, u0: &RealField, t_final: f64, max_halvings: usize) -> Result<PicardOutcome> {
        let mut t = t_final;
        let mut attempt = 0;
        loop {
            match self.solve(u0, t) {
                Err(Error::NoContraction { .. }) if attempt < max_halvings => {
                    t *= 0.5;
                    attempt += 1;
                }
                other => return other,
            }
        }
    }

    fn assemble(&self, grid: &Grid, times: Vec<f64>, spectra: Vec<Vec<Complex64>>, h: f64) -> Result<Trajectory> {
        let fields = spectra
            .into_iter()
            .map(|s| Ok(Spectrum::new(grid, s)?.to_field()))
            .collect::<Result<Vec<_>>>()?;
        let meta = TrajectoryMeta {
            k: self.model.k,
            scheme: Scheme::Picard,
            dt: h,
            dealias: self.model.dealias,
            nonlinear: self.model.nonlinear,
        };
        Trajectory::new(times, fields, meta)
    }
}

/// The map `v ↦ W(t)u₀ + ∫₀ᵗ W(t−t') N(v(t')) dt'` on a fixed time grid.
struct DuhamelMap<'a> {
    grid: Grid,
    op: NonlinearOperator,
    times: &'a [f64],
    h: f64,
}

impl<'a> DuhamelMap<'a> {
    fn new(grid: &Grid, model: &Model, times: &'a [f64], h: f64) -> Self {
        Self { grid: grid.clone(), op: NonlinearOperator::new(grid, model), times, h }
    }

    fn propagate(&self, v: &[Complex64], t: f64) -> Vec<Complex64> {
        let nyq = self.grid.nyquist_index();
        v.iter()
            .zip(self.grid.wavenumbers())
            .enumerate()
            .map(|(i, (c, &xi))| c * free_symbol(xi, t, i == nyq))
            .collect()
    }

    fn free(&self, u0_hat: &[Complex64], t: f64) -> Vec<Complex64> {
        self.propagate(u0_hat, t)
    }

    fn apply(&mut self, u0_hat: &[Complex64], v: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = self.grid.len();
        let mut pulled = Vec::with_capacity(v.len());
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (vj, &tj) in v.iter().zip(self.times) {
            self.op.apply(vj, &mut buf);
            pulled.push(self.propagate(&buf, -tj));
        }
        let integrals = cumulative_quadrature(&pulled, self.h);
        integrals
            .iter()
            .zip(self.times)
            .map(|(int, &t)| {
                let sum: Vec<Complex64> = u0_hat.iter().zip(int).map(|(a, b)| a + b).collect();
                self.propagate(&sum, t)
            })
            .collect()
    }
}

/// `∫₀^{t_i} g` for every node of a uniform grid with spacing `h`.
///
/// Even nodes: composite Simpson. Odd nodes ≥ 3: Simpson up to `i − 3`
/// followed by one 3/8 panel. Node 1: integral of the quadratic through the
/// first three samples.
fn cumulative_quadrature(g: &[Vec<Complex64>], h: f64) -> Vec<Vec<Complex64>> {
    let m = g.len();
    let n = g[0].len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; m];
    if m < 2 {
        return out;
    }
    if m == 2 {
        for k in 0..n {
            out[1][k] = 0.5 * h * (g[0][k] + g[1][k]);
        }
        return out;
    }
    for k in 0..n {
        out[1][k] = h / 12.0 * (5.0 * g[0][k] + 8.0 * g[1][k] - g[2][k]);
    }
    for i in 2..m {
        if i % 2 == 0 {
            for k in 0..n {
                out[i][k] = out[i - 2][k] + h / 3.0 * (g[i - 2][k] + 4.0 * g[i - 1][k] + g[i][k]);
            }
        } else {
            for k in 0..n {
                out[i][k] = out[i - 3][k]
                    + 3.0 * h / 8.0 * (g[i - 3][k] + 3.0 * g[i - 2][k] + 3.0 * g[i - 1][k] + g[i][k]);
            }
        }
    }
    out
}

fn l2_distance(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    (2.0 * grid.half_width() * s).sqrt()
}

/// Picard solution on `nt` uniform intervals of `[0, T]`.
pub fn picard_solve(u0: &RealField, t_final: f64, nt: usize, k: u32, tol: f64, max_iter: usize) -> Result<Trajectory> {
    let solver = PicardSolver::new(Model::new(k)?, PicardOptions { nt, tol, max_iter });
    Ok(solver.solve(u0, t_final)?.trajectory)
}

/// `sup_i ‖u(t_i) − [W(t_i)u₀ + ∫₀^{t_i} W(t_i−t') N(u(t')) dt']‖_{L²}` with
/// the quadrature used by the Picard solver.
pub fn duhamel_residual(traj: &Trajectory, model: &Model) -> Result<f64> {
    if traj.len() < 2 {
        return Ok(0.0);
    }
    let grid = traj.grid().clone();
    let h = traj.spacing();
    let spectra: Vec<Vec<Complex64>> = traj.spectra().into_iter().map(Spectrum::into_coeffs).collect();
    let mut map = DuhamelMap::new(&grid, model, traj.times(), h);
    let image = map.apply(&spectra[0], &spectra);
    Ok(image
        .iter()
        .zip(&spectra)
        .map(|(a, b)| l2_distance(&grid, a, b))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_is_exact_for_cubics() {
        let h = 0.1;
        for m in [3usize, 4, 7, 10] {
            let g: Vec<Vec<Complex64>> = (0..m)
                .map(|i| {
                    let t = i as f64 * h;
                    vec![Complex64::new(t * t * t - 2.0 * t, t * t)]
                })
                .collect();
            let out = cumulative_quadrature(&g, h);
            for i in 2..m {
                let t = i as f64 * h;
                let exact = Complex64::new(t.powi(4) / 4.0 - t * t, t.powi(3) / 3.0);
                assert!((out[i][0] - exact).norm() < 1e-14, "m={m} i={i}");
            }
            // the start panel is exact for quadratics
            let t1 = h;
            let quad_exact = t1.powi(3) / 3.0;
            assert!((out[1][0].im - quad_exact).abs() < 1e-15);
        }
    }

    #[test]
    fn validates_inputs() {
        let g = Grid::new(std::f64::consts::PI, 16).unwrap();
        let u0 = RealField::zeros(&g);
        assert!(picard_solve(&u0, 1.0, 1, 1, 1e-10, 5).is_err());
        assert!(picard_solve(&u0, 1.0, 4, 1, 0.0, 5).is_err());
        assert!(picard_solve(&u0, -1.0, 4, 1, 1e-10, 5).is_err());
        assert!(picard_solve(&u0, 1.0, 4, 3, 1e-10, 5).is_err());
    }

    #[test]
    fn zero_data_is_a_fixed_point() {
        let g = Grid::new(std::f64::consts::PI, 16).unwrap();
        let traj = picard_solve(&RealField::zeros(&g), 0.5, 8, 2, 1e-12, 5).unwrap();
        assert!(traj.fields().iter().all(|f| f.max_abs() == 0.0));
        assert_eq!(duhamel_residual(&traj, &Model::new(2).unwrap()).unwrap(), 0.0);
    }
}
