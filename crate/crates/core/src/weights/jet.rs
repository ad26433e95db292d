use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number of stored Taylor coefficients (derivatives `0..=5`).
pub const JET_LEN: usize = 6;

const FACTORIAL: [f64; JET_LEN] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0];

/// Truncated Taylor expansion `f(x₀ + h) = Σ cᵢ hⁱ + O(h⁶)`.
///
/// Arithmetic on jets is exact forward-mode differentiation up to fifth
/// order; it is how every weight derivative in this crate is produced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; JET_LEN],
}

impl Jet {
    pub const fn constant(v: f64) -> Self {
        Jet { c: [v, 0.0, 0.0, 0.0, 0.0, 0.0] }
    }

    /// The identity function expanded at `x`.
    pub const fn variable(x: f64) -> Self {
        Jet { c: [x, 1.0, 0.0, 0.0, 0.0, 0.0] }
    }

    pub const fn from_coeffs(c: [f64; JET_LEN]) -> Self {
        Jet { c }
    }

    pub fn coeffs(&self) -> &[f64; JET_LEN] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `f^{(j)}(x₀)`.
    pub fn derivative(&self, j: usize) -> f64 {
        self.c[j] * FACTORIAL[j]
    }

    pub fn derivatives(&self) -> [f64; JET_LEN] {
        let mut d = [0.0; JET_LEN];
        for (j, v) in d.iter_mut().enumerate() {
            *v = self.derivative(j);
        }
        d
    }

    /// Jet of `f'`. The top coefficient is unknown at this order and set to zero.
    pub fn differentiate(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        for i in 0..JET_LEN - 1 {
            c[i] = (i + 1) as f64 * self.c[i + 1];
        }
        Jet { c }
    }

    /// Jet of `x ↦ f(-x)` expanded at `-x₀`.
    pub fn reflect(&self) -> Jet {
        let mut c = self.c;
        for (i, v) in c.iter_mut().enumerate() {
            if i % 2 == 1 {
                *v = -*v;
            }
        }
        Jet { c }
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut c = self.c;
        c.iter_mut().for_each(|v| *v *= s);
        Jet { c }
    }

    pub fn recip(&self) -> Jet {
        let a = &self.c;
        let mut b = [0.0; JET_LEN];
        b[0] = 1.0 / a[0];
        for k in 1..JET_LEN {
            let s: f64 = (1..=k).map(|i| a[i] * b[k - i]).sum();
            b[k] = -s * b[0];
        }
        Jet { c: b }
    }

    pub fn exp(&self) -> Jet {
        let a = &self.c;
        let mut e = [0.0; JET_LEN];
        e[0] = a[0].exp();
        for k in 1..JET_LEN {
            let s: f64 = (1..=k).map(|i| i as f64 * a[i] * e[k - i]).sum();
            e[k] = s / k as f64;
        }
        Jet { c: e }
    }

    /// `f^r` for `f(x₀) > 0`.
    pub fn powf(&self, r: f64) -> Jet {
        let a = &self.c;
        debug_assert!(a[0] > 0.0, "powf of non-positive jet");
        let mut p = [0.0; JET_LEN];
        p[0] = a[0].powf(r);
        for k in 1..JET_LEN {
            let s: f64 = (1..=k)
                .map(|i| ((r + 1.0) * i as f64 - k as f64) * a[i] * p[k - i])
                .sum();
            p[k] = s / (k as f64 * a[0]);
        }
        Jet { c: p }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        c.iter_mut().zip(o.c).for_each(|(a, b)| *a += b);
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = (0..=k).map(|i| self.c[i] * o.c[k - i]).sum();
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, v: f64) -> Jet {
        self.c[0] += v;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, v: f64) -> Jet {
        self.c[0] -= v;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, v: f64) -> Jet {
        self.scale(v)
    }
}
