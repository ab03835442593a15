//! Taub-NUT in the Gibbons–Hawking form over the Hopf map.
//!
//! Real coordinates `w = (a₁, b₁, a₂, b₂)` with `w_j = a_j + i b_j`. The
//! connection form `θ = 4m·Im(w̄₁dw₁ + w̄₂dw₂)/|w|²` satisfies `dθ = ⋆dV` for
//! `V = 1 + 2m/|x|` and makes the metric smooth at `w = 0`, where it is
//! `8m|dw|²` to leading order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahler::{ComplexPoint, HermitianForm, Potential, PotentialJet};
use crate::models::gibbons_hawking::{GhKind, GibbonsHawking, GibbonsHawkingData};

pub type Mat4 = [[f64; 4]; 4];

/// Hopf map `x₁ + i x₂ = 2w₁w̄₂`, `x₃ = |w₁|² − |w₂|²`.
pub fn hopf_map(w: &[f64; 4]) -> [f64; 3] {
    let [a1, b1, a2, b2] = *w;
    [2.0 * (a1 * a2 + b1 * b2), 2.0 * (b1 * a2 - a1 * b2), a1 * a1 + b1 * b1 - a2 * a2 - b2 * b2]
}

/// Rows are the differentials `dx₁, dx₂, dx₃` in `w`-coordinates.
pub fn hopf_differential(w: &[f64; 4]) -> [[f64; 4]; 3] {
    let [a1, b1, a2, b2] = *w;
    [
        [2.0 * a2, 2.0 * b2, 2.0 * a1, 2.0 * b1],
        [-2.0 * b2, 2.0 * a2, 2.0 * b1, -2.0 * a1],
        [2.0 * a1, 2.0 * b1, -2.0 * a2, -2.0 * b2],
    ]
}

/// `α ∧ β` as an antisymmetric matrix.
pub fn wedge(a: &[f64; 4], b: &[f64; 4]) -> Mat4 {
    let mut w = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            w[i][j] = a[i] * b[j] - a[j] * b[i];
        }
    }
    w
}

/// The `dw₁∧dw₂∧dw₃∧dw₄` component of `α ∧ β` for 2-forms.
pub fn wedge4(a: &Mat4, b: &Mat4) -> f64 {
    a[0][1] * b[2][3] - a[0][2] * b[1][3] + a[0][3] * b[1][2] + a[1][2] * b[0][3] - a[1][3] * b[0][2]
        + a[2][3] * b[0][1]
}

fn lin(c: &[(f64, &Mat4)]) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (k, m) in c {
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += k * m[i][j];
            }
        }
    }
    out
}

/// Geometric data of Taub-NUT at one point.
#[derive(Clone, Debug)]
pub struct TaubNutFrame {
    pub x: [f64; 3],
    pub v: f64,
    pub theta: [f64; 4],
    pub omega: Mat4,
    pub big_omega_re: Mat4,
    pub big_omega_im: Mat4,
    pub metric: Mat4,
    /// Set when evaluated with a negative mass (reporting only).
    pub negative_mass: bool,
}

/// Taub-NUT with mass `m`.
#[derive(Clone, Copy, Debug)]
pub struct TaubNut {
    pub mass: f64,
}

impl TaubNut {
    /// `m > 0`; negative masses are accepted and flagged in every frame.
    pub fn new(mass: f64) -> Result<Self> {
        if mass == 0.0 || !mass.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Taub-NUT mass {mass} must be finite and nonzero"
            )));
        }
        Ok(TaubNut { mass })
    }

    pub fn harmonic(&self, r: f64) -> f64 {
        1.0 + 2.0 * self.mass / r
    }

    /// `θ` in `w`-coordinates.
    pub fn connection(&self, w: &[f64; 4]) -> Result<[f64; 4]> {
        let n2: f64 = w.iter().map(|v| v * v).sum();
        if n2 == 0.0 {
            return Err(Error::OriginSingular);
        }
        let c = 4.0 * self.mass / n2;
        Ok([-c * w[1], c * w[0], -c * w[3], c * w[2]])
    }

    /// `V`, `θ`, `ω`, `Ω`, `g` at `w`.
    pub fn eval(&self, w: &[f64; 4]) -> Result<TaubNutFrame> {
        let x = hopf_map(w);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r == 0.0 {
            return Err(Error::OriginSingular);
        }
        let v = self.harmonic(r);
        let theta = self.connection(w)?;
        let dx = hopf_differential(w);
        let (w12, w23, w31) = (wedge(&dx[0], &dx[1]), wedge(&dx[1], &dx[2]), wedge(&dx[2], &dx[0]));
        let (w3t, w1t, w2t) = (wedge(&dx[2], &theta), wedge(&dx[0], &theta), wedge(&dx[1], &theta));
        let omega = lin(&[(v, &w12), (1.0, &w3t)]);
        let big_omega_re = lin(&[(v, &w23), (1.0, &w1t)]);
        let big_omega_im = lin(&[(v, &w31), (1.0, &w2t)]);
        let mut metric = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let flat: f64 = (0..3).map(|a| dx[a][i] * dx[a][j]).sum();
                metric[i][j] = v * flat + theta[i] * theta[j] / v;
            }
        }
        Ok(TaubNutFrame { x, v, theta, omega, big_omega_re, big_omega_im, metric, negative_mass: self.mass < 0.0 })
    }

    /// `ω²/(Ω∧Ω̄)` from the component formulas.
    pub fn volume_ratio(frame: &TaubNutFrame) -> f64 {
        let oo = wedge4(&frame.omega, &frame.omega);
        let bb = wedge4(&frame.big_omega_re, &frame.big_omega_re) + wedge4(&frame.big_omega_im, &frame.big_omega_im);
        oo / bb
    }

    /// Holomorphic chart normalized so that `ω = i∂∂̄(|s|²/2) + O(|s|²)` at the nut:
    /// `s = √(8m)·(w₁e^{x₃/4m}, w̄₂e^{−x₃/4m})`.
    pub fn chart(&self, w: &[f64; 4]) -> [Complex64; 2] {
        let x3 = hopf_map(w)[2];
        let m = self.mass;
        let scale = (8.0 * m).sqrt();
        let e = (x3 / (4.0 * m)).exp();
        [Complex64::new(w[0], w[1]) * (scale * e), Complex64::new(w[2], -w[3]) * (scale / e)]
    }

    /// Real Jacobian `∂(Re s₁, Im s₁, Re s₂, Im s₂)/∂w` of [`TaubNut::chart`].
    pub fn chart_jacobian(&self, w: &[f64; 4]) -> Mat4 {
        let s = self.chart(w);
        let dx3 = hopf_differential(w)[2];
        let m = self.mass;
        let scale = (8.0 * m).sqrt();
        let e = (hopf_map(w)[2] / (4.0 * m)).exp();
        let mut jac = [[0.0; 4]; 4];
        for b in 0..4 {
            // s₁ = √(8m)·w₁·e^{x₃/4m}, s₂ = √(8m)·w̄₂·e^{−x₃/4m}.
            let dw1 = Complex64::new((b == 0) as u8 as f64, (b == 1) as u8 as f64);
            let dw2bar = Complex64::new((b == 2) as u8 as f64, -((b == 3) as u8 as f64));
            let d1 = dw1 * (scale * e) + s[0] * (dx3[b] / (4.0 * m));
            let d2 = dw2bar * (scale / e) - s[1] * (dx3[b] / (4.0 * m));
            jac[0][b] = d1.re;
            jac[1][b] = d1.im;
            jac[2][b] = d2.re;
            jac[3][b] = d2.im;
        }
        jac
    }

    /// Inverse of [`TaubNut::chart`].
    pub fn chart_inverse(&self, s: &[Complex64; 2]) -> Result<[f64; 4]> {
        let gh = self.normalized_gh()?;
        let scale = (8.0 * self.mass).sqrt();
        let su = [s[0] / scale, s[1] / scale];
        let (x3, rho) = gh.axial_coordinates(&su)?;
        let r = x3.hypot(rho);
        let (m1, m2) = (((r + x3) / 2.0).max(0.0).sqrt(), ((r - x3) / 2.0).max(0.0).sqrt());
        let (p1, p2) = (su[0].arg(), -su[1].arg());
        Ok([m1 * p1.cos(), m1 * p1.sin(), m2 * p2.cos(), m2 * p2.sin()])
    }

    fn normalized_gh(&self) -> Result<GibbonsHawking> {
        if self.mass <= 0.0 {
            return Err(Error::InvalidParameter("the holomorphic chart needs m > 0".into()));
        }
        GibbonsHawking::new(GibbonsHawkingData { centers: vec![[0.0; 3]], kind: GhKind::Alf { mass: self.mass } })
    }

    /// Kähler potential of `ω` in the chart `s`.
    pub fn potential(&self) -> Result<TaubNutPotential> {
        Ok(TaubNutPotential { gh: self.normalized_gh()?, scale: (8.0 * self.mass).sqrt() })
    }
}

/// `ω_TN = i∂∂̄φ` in the chart of [`TaubNut::chart`]; `φ(0) = 0` and
/// `φ = |s|²/2 + O(|s|⁴)`.
#[derive(Clone, Debug)]
pub struct TaubNutPotential {
    gh: GibbonsHawking,
    scale: f64,
}

impl TaubNutPotential {
    pub fn mass(&self) -> f64 {
        self.scale * self.scale / 8.0
    }
}

impl Potential for TaubNutPotential {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        let s = [p.z[0] / self.scale, p.z[1] / self.scale];
        Ok(self.gh.value_in_s(&s)? * self.scale * self.scale)
    }

    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        let n = p.norm();
        if p.z[0].norm() < 1e-6 * n || p.z[1].norm() < 1e-6 * n {
            return None;
        }
        let s = [p.z[0] / self.scale, p.z[1] / self.scale];
        Some(self.gh.jet_in_s(&s).map(|j| j.dilated(self.scale)))
    }

    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        p.z[0].norm() > radius && p.z[1].norm() > radius
    }
}

/// Hermitian form of a real (1,1) 2-form `W` given in `w`-coordinates, expressed in
/// a holomorphic chart with real Jacobian `J = ∂(chart)/∂w`.
pub fn form_in_chart(w_form: &Mat4, jacobian: &Mat4) -> Result<HermitianForm> {
    let j = nalgebra::Matrix4::from_fn(|a, b| jacobian[a][b]);
    let inv = j.try_inverse().ok_or_else(|| Error::InvalidParameter("singular chart Jacobian".into()))?;
    let w = nalgebra::Matrix4::from_fn(|a, b| w_form[a][b]);
    let ws = inv.transpose() * w * inv;
    let mut out = [[0.0; 4]; 4];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = ws[(a, b)];
        }
    }
    Ok(HermitianForm::from_two_form(&out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_examples() {
        assert_eq!(hopf_map(&[1.0, 0.0, 0.0, 0.0]), [0.0, 0.0, 1.0]);
        let c = 0.5f64.sqrt();
        let x = hopf_map(&[c, 0.0, c, 0.0]);
        assert!((x[0] - 1.0).abs() < 1e-15 && x[1].abs() < 1e-15 && x[2].abs() < 1e-15);
    }

    #[test]
    fn harmonic_example() {
        let tn = TaubNut::new(0.5).unwrap();
        assert_eq!(tn.eval(&[1.0, 0.0, 0.0, 0.0]).unwrap().v, 2.0);
        assert!(TaubNut::new(0.0).is_err());
        assert!(tn.eval(&[0.0; 4]).is_err());
        assert!(TaubNut::new(-1.0).unwrap().eval(&[1.0, 0.0, 0.0, 0.0]).unwrap().negative_mass);
    }

    #[test]
    fn chart_jacobian_matches_differences() {
        let tn = TaubNut::new(0.3).unwrap();
        let w = [0.4, 0.1, -0.6, 0.3];
        let jac = tn.chart_jacobian(&w);
        let h = 1e-6;
        for b in 0..4 {
            let (mut wp, mut wm) = (w, w);
            wp[b] += h;
            wm[b] -= h;
            let (p, q) = (tn.chart(&wp), tn.chart(&wm));
            let d = [(p[0] - q[0]) / (2.0 * h), (p[1] - q[1]) / (2.0 * h)];
            let fd = [d[0].re, d[0].im, d[1].re, d[1].im];
            for a in 0..4 {
                assert!((jac[a][b] - fd[a]).abs() < 1e-8, "{a}{b}");
            }
        }
    }

    #[test]
    fn chart_roundtrip() {
        let tn = TaubNut::new(0.7).unwrap();
        let w = [0.3, -0.5, 0.7, 0.2];
        let back = tn.chart_inverse(&tn.chart(&w)).unwrap();
        for a in 0..4 {
            assert!((back[a] - w[a]).abs() < 1e-12, "{back:?}");
        }
    }
}
