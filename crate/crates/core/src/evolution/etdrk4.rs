use num_complex::Complex64;

use super::{Model, NonlinearOperator, Scheme, Trajectory, TrajectoryMeta, BLOWUP_THRESHOLD};
use crate::spectral::{Grid, RealField, Spectrum};
use crate::{Error, Result};

/// `φ₀..φ₃` with `φ₀ = eᶻ`, `φ_{k+1}(z) = (φ_k(z) − 1/k!)/z`.
fn phi_functions(z: Complex64) -> [Complex64; 4] {
    if z.norm() < 1.0 {
        // Σ_m z^m/(m+k)!, 30 terms is far below rounding for |z| < 1.
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            for j in 1..=k {
                term /= j as f64;
            }
            let mut sum = term;
            for m in 1..30 {
                term = term * z / (m + k) as f64;
                sum += term;
            }
            *slot = sum;
        }
        out
    } else {
        let e = z.exp();
        let p1 = (e - 1.0) / z;
        let p2 = (p1 - 1.0) / z;
        let p3 = (p2 - 0.5) / z;
        [e, p1, p2, p3]
    }
}

/// Per-mode ETDRK4 coefficients for `L = −iξ⁵` (Cox–Matthews form).
struct Coefficients {
    e: Vec<Complex64>,
    e_half: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

impl Coefficients {
    fn new(grid: &Grid, dt: f64) -> Self {
        let n = grid.len();
        let nyq = grid.nyquist_index();
        let mut c = Coefficients {
            e: Vec::with_capacity(n),
            e_half: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for (i, &xi) in grid.wavenumbers().iter().enumerate() {
            let lin = if i == nyq { 0.0 } else { -xi.powi(5) };
            let z = Complex64::new(0.0, lin * dt);
            let [e, p1, p2, p3] = phi_functions(z);
            let [e_half, h1, _, _] = phi_functions(0.5 * z);
            c.e.push(e);
            c.e_half.push(e_half);
            c.q.push(0.5 * dt * h1);
            c.f1.push(dt * (p1 - 3.0 * p2 + 4.0 * p3));
            c.f2.push(dt * (p2 - 2.0 * p3));
            c.f3.push(dt * (-p2 + 4.0 * p3));
        }
        c
    }
}

/// ETDRK4 integrator for a fixed [`Model`].
#[derive(Clone, Copy, Debug)]
pub struct Integrator {
    model: Model,
    save_every: usize,
}

impl Integrator {
    pub fn new(model: Model) -> Self {
        Self { model, save_every: 1 }
    }

    /// Keep every `m`-th step (the final time is always kept when it falls on
    /// the stride).
    pub fn save_every(mut self, m: usize) -> Self {
        self.save_every = m.max(1);
        self
    }

    /// Number of steps for `(T, dt)`; `T/dt` must be an integer within rounding.
    pub fn step_count(t_final: f64, dt: f64) -> Result<usize> {
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::invalid(format!("final time must be positive, got {t_final}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("time step must be positive, got {dt}")));
        }
        let steps = (t_final / dt).round();
        if steps < 1.0 || (steps * dt - t_final).abs() > 1e-9 * t_final {
            return Err(Error::invalid(format!("T = {t_final} is not an integer multiple of dt = {dt}")));
        }
        Ok(steps as usize)
    }

    pub fn run(&self, u0: &RealField, t_final: f64, dt: f64) -> Result<Trajectory> {
        let steps = Self::step_count(t_final, dt)?;
        if steps % self.save_every != 0 {
            return Err(Error::invalid(format!(
                "{steps} steps are not a multiple of the save stride {}",
                self.save_every
            )));
        }
        let dt = t_final / steps as f64;
        let grid = u0.grid().clone();
        let coef = Coefficients::new(&grid, dt);
        let mut op = NonlinearOperator::new(&grid, &self.model);
        let n = grid.len();
        let zero = Complex64::new(0.0, 0.0);

        let mut v = u0.to_spectrum().into_coeffs();
        let (mut nv, mut na, mut nb, mut nc) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
        let (mut a, mut b, mut c) = (vec![zero; n], vec![zero; n], vec![zero; n]);

        let mut times = vec![0.0];
        let mut fields = vec![u0.clone()];
        for step in 1..=steps {
            op.apply(&v, &mut nv);
            for i in 0..n {
                a[i] = coef.e_half[i] * v[i] + coef.q[i] * nv[i];
            }
            op.apply(&a, &mut na);
            for i in 0..n {
                b[i] = coef.e_half[i] * v[i] + coef.q[i] * na[i];
            }
            op.apply(&b, &mut nb);
            for i in 0..n {
                c[i] = coef.e_half[i] * a[i] + coef.q[i] * (2.0 * nb[i] - nv[i]);
            }
            op.apply(&c, &mut nc);
            for i in 0..n {
                v[i] = coef.e[i] * v[i]
                    + coef.f1[i] * nv[i]
                    + 2.0 * coef.f2[i] * (na[i] + nb[i])
                    + coef.f3[i] * nc[i];
            }
            let t = step as f64 * dt;
            check_blowup(&grid, &v, t)?;
            if step % self.save_every == 0 {
                times.push(t);
                fields.push(Spectrum::new(&grid, v.clone())?.to_field());
            }
        }
        let meta = TrajectoryMeta {
            k: self.model.k,
            scheme: Scheme::Etdrk4,
            dt,
            dealias: self.model.dealias,
            nonlinear: self.model.nonlinear,
        };
        Trajectory::new(times, fields, meta)
    }
}

/// `Σ|û_k|` bounds `max|u_j|`, so the inverse transform is only needed when
/// the cheap bound trips.
pub(crate) fn check_blowup(grid: &Grid, v: &[Complex64], t: f64) -> Result<()> {
    let bound: f64 = v.iter().map(|c| c.norm()).sum();
    if !bound.is_finite() {
        return Err(Error::BlowUp { time: t, max_abs: f64::INFINITY });
    }
    if bound > BLOWUP_THRESHOLD {
        let f = Spectrum::new(grid, v.to_vec())?.to_field();
        let m = f.max_abs();
        if m > BLOWUP_THRESHOLD {
            return Err(Error::BlowUp { time: t, max_abs: m });
        }
    }
    Ok(())
}

/// ETDRK4 solution of the `k` equation on `[0, T]`, every step saved.
pub fn integrate(u0: &RealField, t_final: f64, dt: f64, k: u32) -> Result<Trajectory> {
    Integrator::new(Model::new(k)?).run(u0, t_final, dt)
}
