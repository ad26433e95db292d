use std::f64::consts::PI;
use std::sync::OnceLock;

use super::jet::Jet;

/// The closed-form profile a weight follows near the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Core {
    /// `(1 + x²)^β`
    Bracket { exponent: f64 },
    /// `(1 + x²)^β − 1`
    ShiftedBracket { exponent: f64 },
}

impl Core {
    pub(crate) fn jet(&self, x: Jet) -> Jet {
        match *self {
            Core::Bracket { exponent } => (x * x + 1.0).powf(exponent),
            Core::ShiftedBracket { exponent } => (x * x + 1.0).powf(exponent) - 1.0,
        }
    }

    fn value(&self, x: f64) -> f64 {
        match *self {
            Core::Bracket { exponent } => (1.0 + x * x).powf(exponent),
            Core::ShiftedBracket { exponent } => (1.0 + x * x).powf(exponent) - 1.0,
        }
    }
}

/// Sharpness `c` of the step profile `f(s) = e^{-c/s}`; 1.5 roughly
/// minimizes the fourth and fifth derivatives of the step.
const STEP_SHARPNESS: f64 = 1.5;

/// Smooth monotone step on `[0, 1]`: `σ(s) = f(s)/(f(s) + f(1−s))`,
/// `f(s) = e^{-c/s}`. All derivatives vanish at both ends.
pub(crate) fn smooth_step(s: Jet) -> Jet {
    let s0 = s.value();
    if s0 > 0.5 {
        return -smooth_step(-s + 1.0) + 1.0;
    }
    // e^{-q} with q ≥ 300 is below 1e-130, so every derivative is negligible.
    if s0 <= 0.005 {
        return Jet::constant(0.0);
    }
    let q = (s.recip() - (-s + 1.0).recip()).scale(STEP_SHARPNESS);
    let e = (-q).exp();
    e / (e + 1.0)
}

/// A weight on `[0, ∞)` that follows `core` up to `start`, stays constant at
/// `plateau` from `end` on, and in between is
///
/// ```text
/// h(x) = (1 − σ(x))·g(x) + ∫_start^x σ'(y) g(y) dy + A·σ(x)
/// ```
///
/// with `σ` the smooth step rescaled to `[start, end]` and
/// `A = plateau − ∫ σ' g ≥ 0`. Then `h' = (1 − σ) g' + A σ' ≥ 0` wherever
/// `g' ≥ 0`, so the blend is monotone by construction.
#[derive(Clone, Debug)]
pub(crate) struct HalfLineWeight {
    core: Core,
    start: f64,
    end: f64,
    plateau: f64,
    boost: f64,
}

impl HalfLineWeight {
    /// Builds the blend with the widest transition `[start, end]`,
    /// `end ≤ max_end`, for which the boost `A` is non-negative.
    pub(crate) fn new(core: Core, start: f64, max_end: f64, plateau: f64) -> Self {
        debug_assert!(plateau > core.value(start));
        let boost_for = |end: f64| plateau - blend_integral(core, start, end, end);
        let end = if boost_for(max_end) >= 0.0 {
            max_end
        } else {
            let (mut lo, mut hi) = (start, max_end);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if boost_for(mid) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        let boost = boost_for(end).max(0.0);
        Self { core, start, end, plateau, boost }
    }

    pub(crate) fn end(&self) -> f64 {
        self.end
    }

    #[cfg(test)]
    pub(crate) fn boost(&self) -> f64 {
        self.boost
    }

    /// Expansion at `x ≥ 0`.
    pub(crate) fn jet(&self, x: f64) -> Jet {
        if x <= self.start {
            return self.core.jet(Jet::variable(x));
        }
        if x >= self.end {
            return Jet::constant(self.plateau);
        }
        let xj = Jet::variable(x);
        let width = self.end - self.start;
        let sigma = smooth_step((xj - self.start).scale(1.0 / width));
        let g = self.core.jet(xj);
        // G' = σ' g, so G's coefficients above the constant come from σ' g.
        let integrand = sigma.differentiate() * g;
        let mut gc = [0.0; 6];
        gc[0] = blend_integral(self.core, self.start, self.end, x);
        for k in 1..6 {
            gc[k] = integrand.coeffs()[k - 1] / k as f64;
        }
        (-sigma + 1.0) * g + Jet::from_coeffs(gc) + sigma.scale(self.boost)
    }
}

/// `∫_start^x σ'(y) g(y) dy` for the step rescaled to `[start, end]`.
fn blend_integral(core: Core, start: f64, end: f64, x: f64) -> f64 {
    let width = end - start;
    let integrand = |y: f64| {
        let s = smooth_step(Jet::variable((y - start) / width));
        s.derivative(1) / width * core.value(y)
    };
    let panels = (((x - start) / width) * 64.0).ceil().max(1.0) as usize;
    let h = (x - start) / panels as f64;
    let (nodes, weights) = gauss_legendre();
    let mut total = 0.0;
    for p in 0..panels {
        let a = start + p as f64 * h;
        let mid = a + 0.5 * h;
        let s: f64 = nodes
            .iter()
            .zip(weights)
            .map(|(&t, &w)| w * integrand(mid + 0.5 * h * t))
            .sum();
        total += 0.5 * h * s;
    }
    total
}

const GL_POINTS: usize = 16;

/// 16-point Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre() -> &'static ([f64; GL_POINTS], [f64; GL_POINTS]) {
    static RULE: OnceLock<([f64; GL_POINTS], [f64; GL_POINTS])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}
