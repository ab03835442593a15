use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate chart a [`ComplexPoint`] is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Chart {
    /// Flat coordinates on ℂ² or on the universal cover of a flat quotient.
    #[default]
    Standard,
    /// Orbifold chart `z` of an ALE space (Eguchi–Hanson, Gibbons–Hawking).
    Ale,
    /// Holomorphic chart `s` of Taub-NUT around its nut.
    TaubNut,
    /// Real coordinates `w` of the Gibbons–Hawking fibration (not holomorphic).
    Fibration,
}

/// Two complex coordinates in a fixed chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPoint {
    pub z: [Complex64; 2],
    pub chart: Chart,
}

impl ComplexPoint {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        ComplexPoint { z: [z1, z2], chart: Chart::Standard }
    }

    pub fn in_chart(z1: Complex64, z2: Complex64, chart: Chart) -> Result<Self> {
        if !(z1.re.is_finite() && z1.im.is_finite() && z2.re.is_finite() && z2.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinates".into()));
        }
        Ok(ComplexPoint { z: [z1, z2], chart })
    }

    /// Point with real coordinates `(Re z₁, Im z₁, Re z₂, Im z₂)`.
    pub fn from_real(x: [f64; 4]) -> Self {
        Self::from_real_in(x, Chart::Standard)
    }

    pub fn from_real_in(x: [f64; 4], chart: Chart) -> Self {
        ComplexPoint {
            z: [Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])],
            chart,
        }
    }

    pub fn to_real(&self) -> [f64; 4] {
        [self.z[0].re, self.z[0].im, self.z[1].re, self.z[1].im]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z[0].norm_sqr() + self.z[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        ComplexPoint { z: [self.z[0] * c, self.z[1] * c], chart: self.chart }
    }

    /// Translate by `dx` in real coordinates.
    pub fn shifted(&self, dx: [f64; 4]) -> Self {
        let x = self.to_real();
        Self::from_real_in([x[0] + dx[0], x[1] + dx[1], x[2] + dx[2], x[3] + dx[3]], self.chart)
    }
}

/// Components `H_{jk}` of a real (1,1)-form `i Σ H_{jk} dz_j ∧ dz̄_k`.
///
/// The flat form `i∂∂̄(|z|²/2)` has `H = I/2`; with this convention the
/// associated Riemannian metric is `2 Re H`, so the flat model is Euclidean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianForm {
    pub m: [[Complex64; 2]; 2],
}

impl HermitianForm {
    pub fn new(m: [[Complex64; 2]; 2]) -> Self {
        HermitianForm { m }
    }

    /// Hermitian form from real diagonal entries and the off-diagonal `H₁₂`.
    pub fn from_parts(h11: f64, h22: f64, h12: Complex64) -> Self {
        HermitianForm {
            m: [
                [Complex64::new(h11, 0.0), h12],
                [h12.conj(), Complex64::new(h22, 0.0)],
            ],
        }
    }

    pub fn zero() -> Self {
        Self::from_parts(0.0, 0.0, Complex64::new(0.0, 0.0))
    }

    /// The flat Kähler form of `|z|²/2`.
    pub fn flat() -> Self {
        Self::from_parts(0.5, 0.5, Complex64::new(0.0, 0.0))
    }

    pub fn det(&self) -> f64 {
        (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).re
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    pub fn add(&self, o: &HermitianForm) -> Self {
        let mut m = self.m;
        for (j, row) in m.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v += o.m[j][k];
            }
        }
        HermitianForm { m }
    }

    pub fn sub(&self, o: &HermitianForm) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut m = self.m;
        m.iter_mut().flatten().for_each(|v| *v *= c);
        HermitianForm { m }
    }

    /// Replaces `H` with `(H + H*)/2`.
    pub fn symmetrized(&self) -> Self {
        let d0 = self.m[0][0].re;
        let d1 = self.m[1][1].re;
        let off = (self.m[0][1] + self.m[1][0].conj()) * 0.5;
        Self::from_parts(d0, d1, off)
    }

    /// `‖H − H*‖` (Frobenius).
    pub fn hermitian_defect(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                s += (self.m[j][k] - self.m[k][j].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn frobenius(&self) -> f64 {
        self.m.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inverse of a Hermitian form (as a matrix).
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return Err(Error::DegenerateReference { det: d });
        }
        Ok(Self::from_parts(self.m[1][1].re / d, self.m[0][0].re / d, -self.m[0][1] / d))
    }

    /// `tr(self · o)`; real for Hermitian arguments.
    pub fn trace_product(&self, o: &HermitianForm) -> f64 {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..2 {
            for k in 0..2 {
                s += self.m[j][k] * o.m[k][j];
            }
        }
        s.re
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let half_gap = (((a - d) * 0.5).powi(2) + self.m[0][1].norm_sqr()).sqrt();
        let mid = 0.5 * (a + d);
        [mid - half_gap, mid + half_gap]
    }

    /// Positive definite with eigenvalue threshold `1e-12·trace`.
    pub fn is_positive(&self) -> bool {
        let tr = self.trace();
        tr > 0.0 && self.eigenvalues()[0] > 1e-12 * tr
    }

    /// Riemannian metric `g = 2 Re H` in real coordinates `(x₁, y₁, x₂, y₂)`.
    pub fn metric(&self) -> [[f64; 4]; 4] {
        let mut g = [[0.0; 4]; 4];
        for j in 0..2 {
            for k in 0..2 {
                let h = self.m[j][k];
                // g(∂x_j,∂x_k) = g(∂y_j,∂y_k) = 2 Re H_jk ; g(∂x_j,∂y_k) = 2 Im H_jk.
                g[2 * j][2 * k] = 2.0 * h.re;
                g[2 * j + 1][2 * k + 1] = 2.0 * h.re;
                g[2 * j][2 * k + 1] = 2.0 * h.im;
                g[2 * j + 1][2 * k] = -2.0 * h.im;
            }
        }
        g
    }

    /// Reads `H` from a real 2-form `W` (antisymmetric 4×4 in `(x₁, y₁, x₂, y₂)`)
    /// assumed to be of type (1,1).
    pub fn from_two_form(w: &[[f64; 4]; 4]) -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
                m[j][k] = Complex64::new(
                    0.25 * (w[xj][yk] - w[yj][xk]),
                    -0.25 * (w[xj][xk] + w[yj][yk]),
                );
            }
        }
        HermitianForm { m }
    }

    /// Real 2-form `ω = i Σ H_{jk} dz_j ∧ dz̄_k` as an antisymmetric matrix.
    pub fn two_form(&self) -> [[f64; 4]; 4] {
        let g = self.metric();
        // ω(X, Y) = g(JX, Y) with J∂x = ∂y, J∂y = −∂x.
        let mut w = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let (ja, sign) = if a % 2 == 0 { (a + 1, 1.0) } else { (a - 1, -1.0) };
                w[a][b] = sign * g[ja][b];
            }
        }
        w
    }
}

/// Coefficient of a holomorphic volume form `c · dz₁ ∧ dz₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoloTwoForm {
    pub coeff: Complex64,
}

impl HoloTwoForm {
    pub fn standard() -> Self {
        HoloTwoForm { coeff: Complex64::new(1.0, 0.0) }
    }

    pub fn abs_sqr(&self) -> f64 {
        self.coeff.norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_form_roundtrip() {
        let h = HermitianForm::from_parts(0.7, 0.4, c(0.1, -0.2));
        let back = HermitianForm::from_two_form(&h.two_form());
        assert!(back.sub(&h).frobenius() < 1e-14);
    }

    #[test]
    fn flat_metric_is_euclidean() {
        let g = HermitianForm::flat().metric();
        for (a, row) in g.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                assert_eq!(*v, if a == b { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn inverse_and_eigenvalues() {
        let h = HermitianForm::from_parts(2.0, 1.0, c(0.3, 0.4));
        let inv = h.inverse().unwrap();
        assert!((inv.trace_product(&h) - 2.0).abs() < 1e-14);
        let [l0, l1] = h.eigenvalues();
        assert!((l0 * l1 - h.det()).abs() < 1e-14);
        assert!((l0 + l1 - h.trace()).abs() < 1e-14);
        assert!(h.is_positive());
        assert!(!HermitianForm::from_parts(1.0, -1.0, c(0.0, 0.0)).is_positive());
    }
}
