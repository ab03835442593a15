//! Multi-center Gibbons–Hawking metrics with collinear centers.
//!
//! The harmonic function is normalized as `V = c₀ + Σ 1/(4|x − pᵢ|)`, so one
//! center with `c₀ = 0` is flat ℂ² with `|w|² = |x|`. For centers on the
//! `x₃`-axis the holomorphic coordinates `s₁, s₂` of the complex structure
//! with moment map `x₃` satisfy
//!
//! `log|s₁|² = Σ log((rᵢ + zᵢ)/2) + 4c₀x₃`, `log|s₂|² = Σ log((rᵢ − zᵢ)/2) − 4c₀x₃`,
//!
//! with `zᵢ = x₃ − cᵢ`, `rᵢ = |x − pᵢ|`. The Kähler potential is the Legendre
//! transform of the function `F` with `∂F/∂x₃ = log|s₁|²`:
//!
//! `φ = ½(Σ [cᵢ log((rᵢ + zᵢ)/2) + rᵢ] + c₀(2x₃² + ρ²))`, `ρ² = x₁² + x₂²`.
//!
//! `φ` is invariant under the torus rotating `s₁`, `s₂`; its moment maps are
//! `μ₁ = x₃/2 + S/(4k)` and `μ₂ = S/(4k)` with `S = Σ(rᵢ − zᵢ) + 2c₀ρ²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kahler::{ComplexPoint, HermitianForm, Potential, PotentialJet};

/// Asymptotic type of a Gibbons–Hawking space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GhKind {
    /// `V` without constant term.
    Ale,
    /// `V = 1 + Σ 2m/|x − pᵢ|`; the potential is computed for the metric
    /// divided by `8m`, whose harmonic function is `1/(8m) + Σ 1/(4|x − pᵢ|)`.
    Alf { mass: f64 },
}

/// Centers and asymptotic type of a Gibbons–Hawking space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GibbonsHawkingData {
    pub centers: Vec<[f64; 3]>,
    pub kind: GhKind,
}

/// Evaluator for the Kähler potential of a collinear Gibbons–Hawking space.
#[derive(Clone, Debug)]
pub struct GibbonsHawking {
    pub data: GibbonsHawkingData,
    /// Positions of the centers along their common axis, shifted to mean zero.
    axis: Vec<f64>,
    c0: f64,
}

/// Solution of the moment-map inversion at a point.
#[derive(Clone, Copy, Debug)]
struct AxialPoint {
    x3: f64,
    rho: f64,
}

impl GibbonsHawking {
    pub fn new(data: GibbonsHawkingData) -> Result<Self> {
        if data.centers.is_empty() {
            return Err(Error::InvalidParameter("at least one center is required".into()));
        }
        let c0 = match data.kind {
            GhKind::Ale => 0.0,
            GhKind::Alf { mass } if mass > 0.0 => 1.0 / (8.0 * mass),
            GhKind::Alf { mass } => {
                return Err(Error::InvalidParameter(format!("ALF mass {mass} must be positive")))
            }
        };
        let n = data.centers.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let d: f64 = (0..3).map(|a| (data.centers[i][a] - data.centers[j][a]).powi(2)).sum();
                if d.sqrt() < 1e-12 {
                    return Err(Error::CenterCollision(i, j));
                }
            }
        }
        let axis = axial_positions(&data.centers)?;
        Ok(GibbonsHawking { data, axis, c0 })
    }

    /// Centers on the `x₃`-axis at the given heights.
    pub fn ale_axial(heights: &[f64]) -> Result<Self> {
        Self::new(GibbonsHawkingData {
            centers: heights.iter().map(|&h| [0.0, 0.0, h]).collect(),
            kind: GhKind::Ale,
        })
    }

    /// Eguchi–Hanson as the two-center space with centers at `±½`.
    pub fn eguchi_hanson() -> Self {
        Self::ale_axial(&[-0.5, 0.5]).expect("distinct centers")
    }

    pub fn order(&self) -> usize {
        self.axis.len()
    }

    /// Constant term of the normalized harmonic function.
    pub fn constant_term(&self) -> f64 {
        self.c0
    }

    /// Normalized harmonic function `V` at axial coordinates.
    pub fn harmonic(&self, x3: f64, rho: f64) -> f64 {
        self.c0 + self.axis.iter().map(|c| 0.25 / (rho.hypot(x3 - c))).sum::<f64>()
    }

    /// `(log|s₁|², log|s₂|²)` at axial coordinates.
    fn log_pq(&self, x3: f64, rho: f64) -> (f64, f64) {
        let mut lp = 4.0 * self.c0 * x3;
        let mut lq = -4.0 * self.c0 * x3;
        for c in &self.axis {
            let (plus, minus) = split(x3 - c, rho);
            lp += (0.5 * plus).ln();
            lq += (0.5 * minus).ln();
        }
        (lp, lq)
    }

    /// Inverts `(|s₁|², |s₂|²) ↦ (x₃, ρ)`.
    fn invert(&self, p: f64, q: f64) -> Result<AxialPoint> {
        if !(p > 0.0 && q > 0.0) {
            return Err(Error::Unsupported("point on a coordinate axis of the chart".into()));
        }
        let k = self.order() as f64;
        let (lnp, lnq) = (p.ln(), q.ln());
        let rho = 2.0 * ((lnp + lnq) / (2.0 * k)).exp();
        // log|s₁|² is strictly increasing in x₃; safeguarded Newton on it.
        let g = |x3: f64| self.log_pq(x3, rho).0 - lnp;
        let dg = |x3: f64| {
            4.0 * self.c0 + self.axis.iter().map(|c| 1.0 / rho.hypot(x3 - c)).sum::<f64>()
        };
        let guess = if self.c0 == 0.0 {
            p.powf(1.0 / k) - q.powf(1.0 / k)
        } else {
            0.0
        };
        let (mut lo, mut hi) = (guess - 1.0, guess + 1.0);
        while g(lo) > 0.0 {
            lo -= 2.0 * (hi - lo);
        }
        while g(hi) < 0.0 {
            hi += 2.0 * (hi - lo);
        }
        let mut x = guess.clamp(lo, hi);
        for _ in 0..200 {
            let gx = g(x);
            if gx == 0.0 {
                break;
            }
            if gx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let mut next = x - gx / dg(x);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs());
            x = next;
            if done || hi - lo <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
                break;
            }
        }
        Ok(AxialPoint { x3: x, rho })
    }

    fn potential_at(&self, a: AxialPoint) -> f64 {
        let mut acc = self.c0 * (2.0 * a.x3 * a.x3 + a.rho * a.rho);
        for c in &self.axis {
            let z = a.x3 - c;
            let (plus, _) = split(z, a.rho);
            acc += c * (0.5 * plus).ln() + a.rho.hypot(z);
        }
        0.5 * acc
    }

    /// Moment maps `(μ₁, μ₂)` and their Jacobian with respect to
    /// `(log|s₁|², log|s₂|²)`.
    fn moment_data(&self, a: AxialPoint) -> ([f64; 2], [[f64; 2]; 2]) {
        let k = self.order() as f64;
        let rho = a.rho;
        let mut s = 2.0 * self.c0 * rho * rho;
        let mut s_x = 0.0;
        let mut s_rho = 4.0 * self.c0 * rho;
        let mut lp_x = 4.0 * self.c0;
        let mut lp_rho = 0.0;
        let mut lq_rho = 0.0;
        for c in &self.axis {
            let z = a.x3 - c;
            let r = rho.hypot(z);
            let (plus, minus) = split(z, rho);
            s += minus;
            s_x -= minus / r;
            s_rho += rho / r;
            lp_x += 1.0 / r;
            lp_rho += rho / (r * plus);
            lq_rho += rho / (r * minus);
        }
        let mu = [0.5 * a.x3 + s / (4.0 * k), s / (4.0 * k)];
        // Jacobians in (x₃, ρ).
        let jb = [[0.5 + s_x / (4.0 * k), s_rho / (4.0 * k)], [s_x / (4.0 * k), s_rho / (4.0 * k)]];
        let det = lp_x * (lp_rho + lq_rho);
        let ja_inv = [[lq_rho / det, -lp_rho / det], [lp_x / det, lp_x / det]];
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = jb[i][0] * ja_inv[0][j] + jb[i][1] * ja_inv[1][j];
            }
        }
        (mu, m)
    }

    /// Potential jet in the holomorphic chart `s`.
    pub fn jet_in_s(&self, s: &[Complex64; 2]) -> Result<PotentialJet> {
        let (p, q) = (s[0].norm_sqr(), s[1].norm_sqr());
        let a = self.invert(p, q)?;
        let (mu, m) = self.moment_data(a);
        let m12 = 0.5 * (m[0][1] + m[1][0]);
        Ok(PotentialJet {
            value: self.potential_at(a),
            grad: [mu[0] / s[0], mu[1] / s[1]],
            hess: HermitianForm::from_parts(m[0][0] / p, m[1][1] / q, m12 / (s[0] * s[1].conj())),
        })
    }

    /// Potential value in the chart `s`.
    pub fn value_in_s(&self, s: &[Complex64; 2]) -> Result<f64> {
        let a = self.invert(s[0].norm_sqr(), s[1].norm_sqr())?;
        Ok(self.potential_at(a))
    }

    /// Map from the orbifold chart `z` of `ℂ²/ℤ_k` to `s`: `s_j = z_j^k / k^{k/2}`.
    /// For ALF spaces and one-center spaces the charts coincide.
    pub fn s_from_z(&self, z: &[Complex64; 2]) -> [Complex64; 2] {
        let k = self.order();
        if k == 1 || self.c0 != 0.0 {
            return *z;
        }
        let norm = (k as f64).powf(-(k as f64) / 2.0);
        [z[0].powu(k as u32) * norm, z[1].powu(k as u32) * norm]
    }

    /// Axial coordinates `(x₃, ρ)` of a point given in the chart `z`.
    pub fn axial_coordinates(&self, z: &[Complex64; 2]) -> Result<(f64, f64)> {
        let s = self.s_from_z(z);
        let a = self.invert(s[0].norm_sqr(), s[1].norm_sqr())?;
        Ok((a.x3, a.rho))
    }

    /// Potential jet in the orbifold chart `z`.
    pub fn jet_in_z(&self, z: &[Complex64; 2]) -> Result<PotentialJet> {
        let k = self.order();
        if k == 1 || self.c0 != 0.0 {
            return self.jet_in_s(z);
        }
        let s = self.s_from_z(z);
        let js = self.jet_in_s(&s)?;
        let kf = k as f64;
        // ds_j/dz_j = k s_j / z_j.
        let d = [s[0] * kf / z[0], s[1] * kf / z[1]];
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = js.hess.m[i][j] * d[i] * d[j].conj();
            }
        }
        Ok(PotentialJet {
            value: js.value,
            grad: [js.grad[0] * d[0], js.grad[1] * d[1]],
            hess: HermitianForm::new(m).symmetrized(),
        })
    }
}

/// `(r + z, r − z)` without cancellation.
fn split(z: f64, rho: f64) -> (f64, f64) {
    let r = rho.hypot(z);
    if z >= 0.0 {
        let plus = r + z;
        (plus, rho * rho / plus)
    } else {
        let minus = r - z;
        (rho * rho / minus, minus)
    }
}

/// Heights of collinear centers along their axis, shifted to mean zero.
fn axial_positions(centers: &[[f64; 3]]) -> Result<Vec<f64>> {
    let n = centers.len() as f64;
    let mut mean = [0.0; 3];
    for c in centers {
        for a in 0..3 {
            mean[a] += c[a] / n;
        }
    }
    let rel: Vec<[f64; 3]> = centers.iter().map(|c| [c[0] - mean[0], c[1] - mean[1], c[2] - mean[2]]).collect();
    let Some(far) = rel.iter().max_by(|a, b| norm3(a).total_cmp(&norm3(b))).copied() else {
        return Ok(vec![]);
    };
    let len = norm3(&far);
    if len == 0.0 {
        return Ok(vec![0.0]);
    }
    let dir = [far[0] / len, far[1] / len, far[2] / len];
    let mut out = Vec::with_capacity(rel.len());
    for c in &rel {
        let t = c[0] * dir[0] + c[1] * dir[1] + c[2] * dir[2];
        let off = [c[0] - t * dir[0], c[1] - t * dir[1], c[2] - t * dir[2]];
        if norm3(&off) > 1e-10 * (1.0 + len) {
            return Err(Error::NonCollinearCenters);
        }
        out.push(t);
    }
    Ok(out)
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl Potential for GibbonsHawking {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        self.value_in_s(&self.s_from_z(&p.z))
    }

    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        let n = p.norm();
        if p.z[0].norm() < 1e-6 * n || p.z[1].norm() < 1e-6 * n {
            return None;
        }
        Some(self.jet_in_z(&p.z))
    }

    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        p.z[0].norm() > radius && p.z[1].norm() > radius
    }
}

/// Potential of an ALE Gibbons–Hawking space in its orbifold chart.
pub fn gh_ale_potential(data: &GibbonsHawkingData, p: &ComplexPoint) -> Result<f64> {
    GibbonsHawking::new(data.clone())?.value(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::eguchi_hanson::eh_potential;

    fn pt(x: [f64; 4]) -> ComplexPoint {
        ComplexPoint::from_real(x)
    }

    #[test]
    fn one_center_is_flat() {
        let gh = GibbonsHawking::ale_axial(&[0.0]).unwrap();
        let p = pt([0.3, -0.7, 1.1, 0.2]);
        assert!((gh.value(&p).unwrap() - 0.5 * p.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn two_centers_reproduce_eguchi_hanson() {
        let gh = GibbonsHawking::eguchi_hanson();
        for x in [[0.3, 0.2, 0.5, -0.1], [1.2, 0.0, 0.0, 0.4], [2.0, 1.0, -0.7, 0.0]] {
            let p = pt(x);
            let a = gh.value(&p).unwrap();
            let b = eh_potential(&p).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn collisions_and_noncollinear_rejected() {
        let d = GibbonsHawkingData { centers: vec![[0.0; 3], [0.0; 3]], kind: GhKind::Ale };
        assert_eq!(GibbonsHawking::new(d).unwrap_err(), Error::CenterCollision(0, 1));
        let d = GibbonsHawkingData {
            centers: vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            kind: GhKind::Ale,
        };
        assert_eq!(GibbonsHawking::new(d).unwrap_err(), Error::NonCollinearCenters);
    }

    #[test]
    fn tilted_axis_is_accepted() {
        let d = GibbonsHawkingData { centers: vec![[1.0, 1.0, 0.0], [-1.0, -1.0, 0.0]], kind: GhKind::Ale };
        let gh = GibbonsHawking::new(d).unwrap();
        let sqrt2 = 2f64.sqrt();
        assert_eq!(gh.order(), 2);
        assert!(((gh.axis[1] - gh.axis[0]).abs() - 2.0 * sqrt2).abs() < 1e-12);
    }
}
