//! Harmonic extension of a quartic jet to an Eguchi–Hanson background.
//!
//! For a `U(2)`-invariant background with potential `g(s)`, `s = |z|²`, and a
//! flat-harmonic polynomial `P` of bidegree `(a, b)`, the function `G(s)P(z)`
//! is harmonic iff
//!
//! `sG'' + (2+a+b)G' − κ(s²G'' + (1+a+b)sG' + abG) = 0`, `κ = g''/(g' + sg'')`.
//!
//! On Eguchi–Hanson with core scale `λ` (`g = λ²g₁(s/λ²)`), `κ = −λ⁴/s³`; in
//! `u = s/λ²`, `τ = log u` and for `a + b = 4`:
//!
//! `(1 + u²)G_ττ + (4 + 5u²)G_τ + abG = 0`.
//!
//! The solution regular on the exceptional curve behaves like `u^ν`,
//! `ν = −2 + √(4 − ab)`, at `u → 0` and is normalized by `G(∞) = 1`.

use num_complex::Complex64;
use serde::Serialize;

use super::quartic::QuarticJet;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::kahler::{ComplexPoint, Potential, PotentialJet};
use crate::models::eguchi_hanson::eh_radial_jet;
use crate::models::gibbons_hawking::{GhKind, GibbonsHawking, GibbonsHawkingData};

const TAU_MIN: f64 = -18.0;
const TAU_MAX: f64 = 16.0;
const STEPS: usize = 6800;

/// Radial profile `G(u)` for one value of `ab`.
#[derive(Clone, Debug, Serialize)]
pub struct RadialProfile {
    pub ab: u32,
    /// `(τ, G, G_τ)` on a uniform grid in `τ = log u`; empty when `G` is closed-form.
    #[serde(skip)]
    table: Vec<(f64, f64, f64)>,
}

fn rhs(ab: f64, tau: f64, g: f64, gt: f64) -> f64 {
    let u2 = (2.0 * tau).exp();
    -((4.0 + 5.0 * u2) * gt + ab * g) / (1.0 + u2)
}

impl RadialProfile {
    pub fn new(ab: u32) -> Result<Self> {
        if ab > 4 {
            return Err(Error::InvalidParameter(format!("bidegree product {ab} exceeds 4")));
        }
        if ab == 0 || ab == 4 {
            return Ok(RadialProfile { ab, table: Vec::new() });
        }
        let abf = ab as f64;
        let nu = -2.0 + (4.0 - abf).sqrt();
        let h = (TAU_MAX - TAU_MIN) / STEPS as f64;
        let mut tau = TAU_MIN;
        let mut y = [(nu * tau).exp(), nu * (nu * tau).exp()];
        let mut table = Vec::with_capacity(STEPS + 1);
        table.push((tau, y[0], y[1]));
        let f = |t: f64, y: [f64; 2]| [y[1], rhs(abf, t, y[0], y[1])];
        for _ in 0..STEPS {
            let k1 = f(tau, y);
            let k2 = f(tau + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = f(tau + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = f(tau + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for i in 0..2 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            tau += h;
            table.push((tau, y[0], y[1]));
        }
        let limit = y[0];
        if !(limit.is_finite() && limit.abs() > 0.0) {
            return Err(Error::NonConvergence { iterations: STEPS, residual: limit });
        }
        for row in &mut table {
            row.1 /= limit;
            row.2 /= limit;
        }
        Ok(RadialProfile { ab, table })
    }

    /// Jet of `G` in `u`.
    pub fn jet(&self, u: f64) -> Jet {
        match self.ab {
            0 => Jet::constant(1.0),
            4 => Jet::new(1.0 + 2.0 / (3.0 * u * u), -4.0 / (3.0 * u * u * u), 4.0 / (u * u * u * u)),
            _ => {
                let tau = u.ln();
                let (g, gt) = self.interpolate(tau);
                let gtt = rhs(self.ab as f64, tau, g, gt);
                // d/du = (1/u) d/dτ.
                Jet::new(g, gt / u, (gtt - gt) / (u * u))
            }
        }
    }

    fn interpolate(&self, tau: f64) -> (f64, f64) {
        let (t0, t1) = (self.table[0].0, self.table[self.table.len() - 1].0);
        if tau >= t1 {
            // G → 1 with G_τ decaying like u^{-2}; use the last slope.
            let last = self.table[self.table.len() - 1];
            let decay = (-2.0 * (tau - t1)).exp();
            return (1.0 + (last.1 - 1.0) * decay, last.2 * decay);
        }
        let h = (t1 - t0) / (self.table.len() - 1) as f64;
        let x = ((tau - t0) / h).max(0.0);
        let i = (x.floor() as usize).min(self.table.len() - 2);
        let t = x - i as f64;
        let (a, b) = (self.table[i], self.table[i + 1]);
        // Cubic Hermite with τ-derivatives.
        let (h00, h10, h01, h11) =
            (2.0 * t * t * t - 3.0 * t * t + 1.0, t * t * t - 2.0 * t * t + t, -2.0 * t * t * t + 3.0 * t * t, t * t * t - t * t);
        let g = h00 * a.1 + h10 * h * a.2 + h01 * b.1 + h11 * h * b.2;
        let (d00, d10, d01, d11) = (6.0 * t * t - 6.0 * t, 3.0 * t * t - 4.0 * t + 1.0, -6.0 * t * t + 6.0 * t, 3.0 * t * t - 2.0 * t);
        let gt = (d00 * a.1 + d01 * b.1) / h + d10 * a.2 + d11 * b.2;
        (g, gt)
    }
}

/// `U(2)`-invariant ALE background for the harmonic extension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum AleBackground {
    Flat,
    /// Eguchi–Hanson with `g = λ²g₁(s/λ²)`; `core_sq = λ²`.
    EguchiHanson { core_sq: f64 },
}

impl AleBackground {
    /// Reads the background from Gibbons–Hawking data: no center or one center is
    /// flat, two centers at distance `d` are Eguchi–Hanson with `λ² = d`.
    pub fn from_gh(data: &GibbonsHawkingData) -> Result<Self> {
        if data.kind != GhKind::Ale {
            return Err(Error::Unsupported("harmonic extension needs an ALE background".into()));
        }
        match data.centers.len() {
            0 | 1 => Ok(AleBackground::Flat),
            2 => {
                GibbonsHawking::new(data.clone())?;
                let (p, q) = (data.centers[0], data.centers[1]);
                let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
                Ok(AleBackground::EguchiHanson { core_sq: d })
            }
            n => Err(Error::Unsupported(format!(
                "harmonic extension is implemented for U(2)-invariant backgrounds; {n} centers given"
            ))),
        }
    }

    /// Potential jet of the background at `z`.
    pub fn potential_jet(&self, z: &[Complex64; 2]) -> Result<PotentialJet> {
        let s = z[0].norm_sqr() + z[1].norm_sqr();
        match *self {
            AleBackground::Flat => Ok(PotentialJet::radial(z, Jet::new(0.5 * s, 0.5, 0.0))),
            AleBackground::EguchiHanson { core_sq } => {
                if s == 0.0 {
                    return Err(Error::OriginSingular);
                }
                let j = eh_radial_jet(s / core_sq);
                Ok(PotentialJet::radial(z, Jet::new(core_sq * j.v, j.d1, j.d2 / core_sq)))
            }
        }
    }
}

/// `h₄ = Σ_{a+b=4} G_{ab}(|z|²/λ²) P_{ab}(z)`, harmonic for the background and
/// asymptotic to the quartic jet `P = Σ P_{ab}`.
#[derive(Clone, Debug, Serialize)]
pub struct HarmonicExtension {
    pub jet: QuarticJet,
    pub background: AleBackground,
    components: Vec<(QuarticJet, RadialProfile)>,
}

/// Solves `Δ_ALE h₄ = 0` with `h₄ − θ₄ → 0` relative to `|z|⁴`.
pub fn solve_decaying_harmonic(jet: &QuarticJet, ale: &GibbonsHawkingData) -> Result<HarmonicExtension> {
    HarmonicExtension::new(jet, AleBackground::from_gh(ale)?)
}

impl HarmonicExtension {
    pub fn new(jet: &QuarticJet, background: AleBackground) -> Result<Self> {
        let mut components = Vec::new();
        for a in 0..=4u32 {
            let part = jet.bidegree_part(a, 4 - a);
            if !part.is_zero() {
                components.push((part, RadialProfile::new(a * (4 - a))?));
            }
        }
        Ok(HarmonicExtension { jet: jet.clone(), background, components })
    }

    pub fn jet_at(&self, z: &[Complex64; 2]) -> Result<PotentialJet> {
        let s = z[0].norm_sqr() + z[1].norm_sqr();
        let mut acc = PotentialJet::zero();
        match self.background {
            AleBackground::Flat => return Ok(self.jet.jet(z)),
            AleBackground::EguchiHanson { core_sq } => {
                if s == 0.0 {
                    return Err(Error::OriginSingular);
                }
                for (p, profile) in &self.components {
                    let g = profile.jet(s / core_sq);
                    let g = Jet::new(g.v, g.d1 / core_sq, g.d2 / (core_sq * core_sq));
                    acc = acc.add(&PotentialJet::radial(z, g).mul(&p.jet(z)));
                }
            }
        }
        Ok(acc)
    }

    /// `Δ_ALE h₄` at `z`, as `tr(H⁻¹ ∂∂̄h₄)`.
    pub fn laplacian(&self, z: &[Complex64; 2]) -> Result<f64> {
        let h = self.background.potential_jet(z)?.hess;
        Ok(h.inverse()?.trace_product(&self.jet_at(z)?.hess))
    }
}

impl Potential for HarmonicExtension {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        Ok(self.jet_at(&p.z)?.value)
    }

    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        Some(self.jet_at(&p.z))
    }

    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        matches!(self.background, AleBackground::Flat) || p.norm() > radius
    }
}
