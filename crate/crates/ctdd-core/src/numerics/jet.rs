//! Truncated Taylor (jet) arithmetic.
//!
//! A [`Jet`] carries the scaled Taylor coefficients of a scalar function
//! about an expansion point: `coeff(i) = f^(i)(s0) / i!`. Propagating jets
//! through arithmetic yields machine-accurate high-order derivatives of
//! composite expressions without finite-difference step tuning.
//!
//! Coefficient recurrences for products, reciprocals and exponentials follow
//! the usual power-series identities (Cauchy product, logarithmic-derivative
//! trick for `exp`).

use std::ops::{Add, Mul, Neg, Sub};

/// Highest supported truncation order (so a jet holds at most
/// `MAX_ORDER + 1` coefficients). Backing storage is a fixed array to keep
/// jet arithmetic allocation-free in tight quadrature loops.
pub const MAX_ORDER: usize = 15;

const CAP: usize = MAX_ORDER + 1;

/// Truncated Taylor series of a scalar function: `coeff(i) = f^(i)(s0)/i!`.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    len: usize,
    c: [f64; CAP],
}

impl Jet {
    /// Jet of the constant function `value`, truncated at `order`.
    ///
    /// Panics if `order > MAX_ORDER`.
    pub fn constant(value: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [0.0; CAP];
        c[0] = value;
        Jet { len: order + 1, c }
    }

    /// Jet of the identity function evaluated at `value`: coefficients
    /// `[value, 1, 0, ...]`. This is the seed for differentiating with
    /// respect to the variable it represents.
    pub fn variable(value: f64, order: usize) -> Self {
        let mut jet = Self::constant(value, order);
        if order >= 1 {
            jet.c[1] = 1.0;
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.len - 1
    }

    /// Order-0 coefficient, i.e. the function value at the expansion point.
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Scaled coefficient `f^(i)(s0)/i!`.
    pub fn coeff(&self, i: usize) -> f64 {
        self.c[i]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..self.len]
    }

    /// Unscaled derivative `f^(i)(s0) = coeff(i) * i!`.
    pub fn derivative(&self, i: usize) -> f64 {
        let mut fact = 1.0;
        for k in 2..=i {
            fact *= k as f64;
        }
        self.c[i] * fact
    }

    pub fn scale(mut self, k: f64) -> Self {
        for a in &mut self.c[..self.len] {
            *a *= k;
        }
        self
    }

    /// Integer power by repeated multiplication (exponents here are small
    /// binomial indices, so no square-and-multiply is warranted).
    pub fn powi(self, n: u32) -> Self {
        let mut out = Jet::constant(1.0, self.order());
        for _ in 0..n {
            out = out * self;
        }
        out
    }

    /// Reciprocal via the recursive division recurrence. The order-0
    /// coefficient must be nonzero.
    pub fn recip(self) -> Self {
        let n = self.len;
        let mut out = Jet::constant(0.0, self.order());
        let inv0 = 1.0 / self.c[0];
        out.c[0] = inv0;
        for k in 1..n {
            let mut sum = 0.0;
            for j in 1..=k {
                sum += self.c[j] * out.c[k - j];
            }
            out.c[k] = -sum * inv0;
        }
        out
    }

    /// Exponential: `c[0] = exp(a[0])`, `c[k] = (1/k) Σ_{j=1..k} j a[j] c[k-j]`.
    pub fn exp(self) -> Self {
        let n = self.len;
        let mut out = Jet::constant(0.0, self.order());
        out.c[0] = self.c[0].exp();
        for k in 1..n {
            let mut sum = 0.0;
            for j in 1..=k {
                sum += j as f64 * self.c[j] * out.c[k - j];
            }
            out.c[k] = sum / k as f64;
        }
        out
    }

    /// Largest coefficient magnitude; NaN if any coefficient is NaN.
    pub fn norm_inf(&self) -> f64 {
        let mut m = 0.0f64;
        for &a in &self.c[..self.len] {
            if a.is_nan() {
                return f64::NAN;
            }
            m = m.max(a.abs());
        }
        m
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len {
            self.c[i] += rhs.c[i];
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len {
            self.c[i] -= rhs.c[i];
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for a in &mut self.c[..self.len] {
            *a = -*a;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    /// Truncated Cauchy product.
    fn mul(self, rhs: Jet) -> Jet {
        debug_assert_eq!(self.len, rhs.len);
        let n = self.len;
        let mut out = Jet { len: n, c: [0.0; CAP] };
        for i in 0..n {
            let a = self.c[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..n - i {
                out.c[i + j] += a * rhs.c[j];
            }
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}
