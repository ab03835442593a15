//! Second-order forward-mode jets of scalar functions of one real variable.
//!
//! Radial potentials, cut-offs and their products are evaluated as jets in
//! `s = |z|²`, which gives exact first and second derivatives without finite
//! differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value with first and second derivative with respect to one variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const ZERO: Jet = Jet { v: 0.0, d1: 0.0, d2: 0.0 };

    pub fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet { v, d1, d2 }
    }

    /// The independent variable at `x`.
    pub fn var(x: f64) -> Self {
        Jet { v: x, d1: 1.0, d2: 0.0 }
    }

    pub fn constant(c: f64) -> Self {
        Jet { v: c, d1: 0.0, d2: 0.0 }
    }

    /// Composition `g ∘ self` where `(g, g', g'')` are evaluated at `self.v`.
    pub fn chain(self, g: f64, g1: f64, g2: f64) -> Self {
        Jet {
            v: g,
            d1: g1 * self.d1,
            d2: g2 * self.d1 * self.d1 + g1 * self.d2,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.v;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    /// `ln(1 + x)`, accurate for small `x`.
    pub fn ln_1p(self) -> Self {
        let y = 1.0 + self.v;
        self.chain(self.v.ln_1p(), 1.0 / y, -1.0 / (y * y))
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }

    pub fn recip(self) -> Self {
        let x = self.v;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn powi(self, n: i32) -> Self {
        let x = self.v;
        let nf = n as f64;
        self.chain(x.powi(n), nf * x.powi(n - 1), nf * (nf - 1.0) * x.powi(n - 2))
    }

    pub fn scale(self, c: f64) -> Self {
        Jet { v: c * self.v, d1: c * self.d1, d2: c * self.d2 }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet { v: self.v + c, ..self }
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet { v: self.v - c, ..self }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> (f64, f64) {
        let h = 1e-3;
        let d1 = (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
        let d2 = (16.0 * (f(x + h) + f(x - h)) - (f(x + 2.0 * h) + f(x - 2.0 * h)) - 30.0 * f(x)) / (12.0 * h * h);
        (d1, d2)
    }

    #[test]
    fn composite_matches_finite_differences() {
        let f = |x: Jet| (x.sqrt() * x.ln() + x.powi(3).recip()).exp() / (x + 1.0);
        let g = |x: f64| (x.sqrt() * x.ln() + x.powi(-3)).exp() / (x + 1.0);
        for &x in &[0.7, 1.3, 2.9] {
            let j = f(Jet::var(x));
            let (d1, d2) = fd(g, x);
            assert!((j.v - g(x)).abs() < 1e-14);
            assert!((j.d1 - d1).abs() < 1e-7 * (1.0 + d1.abs()));
            assert!((j.d2 - d2).abs() < 1e-5 * (1.0 + d2.abs()));
        }
    }

    #[test]
    fn ln_1p_agrees_with_ln() {
        let a = Jet::var(0.3).ln_1p();
        let b = (Jet::var(0.3) + 1.0).ln();
        assert!((a.v - b.v).abs() < 1e-15 && (a.d1 - b.d1).abs() < 1e-15 && (a.d2 - b.d2).abs() < 1e-15);
    }
}
