//! Finite groups of real-linear isometries of `ℝ⁴ = ℂ²`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::taub_nut::{hopf_map, Mat4, TaubNut};

/// Finite group generated by real 4×4 matrices acting on `w = (a₁, b₁, a₂, b₂)`.
#[derive(Clone, Debug)]
pub struct IsometryAction {
    pub name: String,
    pub generators: Vec<Mat4>,
    /// Group elements, identity first.
    pub elements: Vec<Mat4>,
}

fn mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn dist(a: &Mat4, b: &Mat4) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[i][j]).abs());
        }
    }
    d
}

pub fn identity() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn apply(m: &Mat4, w: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|k| m[i][k] * w[k]).sum();
    }
    out
}

/// `(w₁, w₂) ↦ (w̄₂, −w̄₁)`.
pub fn tau() -> Mat4 {
    [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, -1.0], [-1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]
}

/// `(w₁, w₂) ↦ (e^{iα}w₁, e^{iα}w₂)`.
pub fn phase(alpha: f64) -> Mat4 {
    let (c, s) = (alpha.cos(), alpha.sin());
    [[c, -s, 0.0, 0.0], [s, c, 0.0, 0.0], [0.0, 0.0, c, -s], [0.0, 0.0, s, c]]
}

/// `(w₁, w₂) ↦ (−w₁, −w₂)`.
pub fn minus_identity() -> Mat4 {
    phase(std::f64::consts::PI)
}

impl IsometryAction {
    /// Closes the generated group; fails above `max_order` elements.
    pub fn generate(name: &str, generators: Vec<Mat4>, max_order: usize) -> Result<Self> {
        let mut elements = vec![identity()];
        let mut frontier = vec![identity()];
        while let Some(e) = frontier.pop() {
            for g in &generators {
                let n = mul(g, &e);
                if !elements.iter().any(|x| dist(x, &n) < 1e-9) {
                    if elements.len() >= max_order {
                        return Err(Error::InvalidParameter(format!("{name}: group exceeds order {max_order}")));
                    }
                    elements.push(n);
                    frontier.push(n);
                }
            }
        }
        Ok(IsometryAction { name: name.to_string(), generators, elements })
    }

    /// Binary dihedral group of order `4(k−2)`, generated by `τ` and `ζ_k`, for `k ≥ 3`.
    pub fn binary_dihedral(k: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidParameter(format!("binary dihedral group needs k ≥ 3, got {k}")));
        }
        let zeta = phase(std::f64::consts::PI / (k as f64 - 2.0));
        Self::generate(&format!("D{k}"), vec![tau(), zeta], 4 * (k as usize - 2))
    }

    /// `ℤ₂ = {±1}`.
    pub fn plus_minus() -> Self {
        Self::generate("Z2", vec![minus_identity()], 2).expect("order two")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// `ζ_k` for the binary dihedral group with index `k`.
pub fn zeta(k: u32) -> Mat4 {
    phase(std::f64::consts::PI / (k as f64 - 2.0))
}

/// Sup-norm deviations of Taub-NUT tensors under pullback by each generator.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub generator: usize,
    pub harmonic: f64,
    /// `θ` compared up to the sign `ε(g)` of the action on `x`.
    pub connection: f64,
    pub kahler_form: f64,
    pub holomorphic_form: f64,
    pub metric: f64,
}

fn pull(m: &Mat4, t: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    s += m[a][i] * t[a][b] * m[b][j];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

/// Pulls back `V`, `θ`, `ω`, `Ω`, `g` of Taub-NUT by every generator and
/// records the largest deviation over the sample points.
pub fn apply_action(action: &IsometryAction, tn: &TaubNut, points: &[[f64; 4]]) -> Result<Vec<InvarianceReport>> {
    let mut out = Vec::new();
    for (gi, g) in action.generators.iter().enumerate() {
        let mut rep = InvarianceReport {
            generator: gi,
            harmonic: 0.0,
            connection: 0.0,
            kahler_form: 0.0,
            holomorphic_form: 0.0,
            metric: 0.0,
        };
        for w in points {
            let a = tn.eval(w)?;
            let gw = apply(g, w);
            let b = tn.eval(&gw)?;
            rep.harmonic = rep.harmonic.max((a.v - b.v).abs());
            // Sign of the induced map on x: +1 if x is fixed, −1 if reversed.
            let (xa, xb) = (hopf_map(w), hopf_map(&gw));
            let sign = if (0..3).all(|i| (xa[i] - xb[i]).abs() < 1e-9 * (1.0 + xa[i].abs())) { 1.0 } else { -1.0 };
            let mut th = [0.0f64; 4];
            for (i, t) in th.iter_mut().enumerate() {
                *t = (0..4).map(|k| g[k][i] * b.theta[k]).sum();
            }
            for i in 0..4 {
                rep.connection = rep.connection.max((th[i] - sign * a.theta[i]).abs());
            }
            let dev = |p: &Mat4, q: &Mat4| dist(&pull(g, p), q);
            rep.kahler_form = rep.kahler_form.max(dev(&b.omega, &a.omega));
            rep.holomorphic_form = rep
                .holomorphic_form
                .max(holomorphic_deviation(&pull(g, &b.big_omega_re), &pull(g, &b.big_omega_im), &a));
            rep.metric = rep.metric.max(dev(&b.metric, &a.metric));
        }
        out.push(rep);
    }
    Ok(out)
}

/// `Ω` is preserved up to a unit complex factor; compares `|g*Ω − cΩ|` for the best `c`.
fn holomorphic_deviation(re: &Mat4, im: &Mat4, a: &crate::models::taub_nut::TaubNutFrame) -> f64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let p = Complex64::new(re[i][j], im[i][j]);
            let q = Complex64::new(a.big_omega_re[i][j], a.big_omega_im[i][j]);
            num += p * q.conj();
            den += q.norm_sqr();
        }
    }
    let c = num / den;
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let p = Complex64::new(re[i][j], im[i][j]);
            let q = Complex64::new(a.big_omega_re[i][j], a.big_omega_im[i][j]);
            d = d.max((p - c * q).norm());
        }
    }
    d + (c.norm() - 1.0).abs()
}
