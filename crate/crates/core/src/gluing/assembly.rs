//! Approximately Ricci-flat metric on the resolution of `(ℝ × T³)/±`.
//!
//! Points are `(t, x, y, z)` with `t ∈ ℝ` and `(x, y, z)` periodic with period
//! one. The complex coordinates are `ζ₁ = t + ix`, `ζ₂ = y + iz`, the flat
//! potential is `|ζ|²/2` and the holomorphic volume form is `dζ₁ ∧ dζ₂`. Near
//! each of the eight fixed points `p_j` of `−1` the potential is corrected by
//!
//! `χ(ρ_j/√ε) · ε_j² D(ρ_j²/ε_j²)`, `ε_j = a_j ε`,
//!
//! where `D` is the Eguchi–Hanson deficit, so that `ω_ε` is a scaled
//! Eguchi–Hanson metric for `ρ_j ≤ √ε` and flat for `ρ_j ≥ 2√ε`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{GridDomain, ScalarField};
use crate::jet::Jet;
use crate::kahler::{HermitianForm, PotentialJet};
use crate::models::eguchi_hanson::deficit_jet;

/// Radius of the neighbourhoods `N_j` of the singular points.
pub const NECK_DOMAIN_RADIUS: f64 = 0.125;

/// Assembly description read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssemblyConfig {
    /// `"alh-x1"`; the solver config also accepts `"manufactured-t4"`.
    pub model: String,
    pub epsilon: f64,
    /// Per-point scale factors `a_j`; defaults to all ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
}

/// Region of a point relative to the singular points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "region", content = "point")]
pub enum Region {
    /// `ρ_j ≤ √ε`: scaled Eguchi–Hanson.
    Core(usize),
    /// `√ε < ρ_j < 2√ε`.
    Neck(usize),
    /// `ρ ≥ 2√ε`: flat.
    Background,
}

/// Glued Kähler potential on the resolution of `(ℝ × T³)/±`.
#[derive(Clone, Debug)]
pub struct AlhAssembly {
    pub eps: f64,
    pub scales: Vec<f64>,
    /// Fixed points `(0, x, y, z)` with `x, y, z ∈ {0, ½}`.
    pub centers: Vec<[f64; 4]>,
    pub cutoff: CutoffSpec,
}

/// The eight fixed points of `−1` on `ℝ × T³`.
pub fn x1_fixed_points() -> Vec<[f64; 4]> {
    let mut out = Vec::with_capacity(8);
    for i in 0..8 {
        let h = |b: usize| if i >> b & 1 == 1 { 0.5 } else { 0.0 };
        out.push([0.0, h(2), h(1), h(0)]);
    }
    out
}

fn wrap(d: f64) -> f64 {
    d - d.round()
}

impl AlhAssembly {
    pub fn x1(eps: f64, scales: Option<Vec<f64>>) -> Result<Self> {
        let cutoff = CutoffSpec::neck(eps)?;
        let centers = x1_fixed_points();
        let scales = scales.unwrap_or_else(|| vec![1.0; centers.len()]);
        if scales.len() != centers.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} scale factors, got {}",
                centers.len(),
                scales.len()
            )));
        }
        if let Some(a) = scales.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidParameter(format!("scale factor {a} must be positive")));
        }
        Ok(AlhAssembly { eps, scales, centers, cutoff })
    }

    pub fn from_config(cfg: &AssemblyConfig) -> Result<Self> {
        if cfg.model != "alh-x1" {
            return Err(Error::UnknownModel(cfg.model.clone()));
        }
        Self::x1(cfg.epsilon, cfg.a.clone())
    }

    pub fn neck_count(&self) -> usize {
        self.centers.len()
    }

    /// Whether the gluing annuli of distinct points are disjoint.
    pub fn necks_disjoint(&self) -> bool {
        2.0 * self.cutoff.outer() < 0.5
    }

    /// Displacements `x − p_j − n` (over lattice images `n`) with `ρ < limit`.
    fn displacements(&self, x: &[f64; 4], limit: f64) -> Vec<(usize, [f64; 4])> {
        let mut out = Vec::new();
        let reach = limit.ceil() as i32;
        for (j, c) in self.centers.iter().enumerate() {
            let base = [x[0] - c[0], wrap(x[1] - c[1]), wrap(x[2] - c[2]), wrap(x[3] - c[3])];
            for i in -reach..=reach {
                for k in -reach..=reach {
                    for l in -reach..=reach {
                        let d = [base[0], base[1] + i as f64, base[2] + k as f64, base[3] + l as f64];
                        if d.iter().map(|v| v * v).sum::<f64>().sqrt() < limit {
                            out.push((j, d));
                        }
                    }
                }
            }
        }
        out
    }

    /// Index of the nearest singular point and the flat distance to it.
    pub fn nearest(&self, x: &[f64; 4]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (j, c) in self.centers.iter().enumerate() {
            let d = [x[0] - c[0], wrap(x[1] - c[1]), wrap(x[2] - c[2]), wrap(x[3] - c[3])];
            let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r < best.1 {
                best = (j, r);
            }
        }
        best
    }

    pub fn region(&self, x: &[f64; 4]) -> Region {
        let (j, rho) = self.nearest(x);
        if rho <= self.cutoff.inner {
            Region::Core(j)
        } else if rho < self.cutoff.outer() {
            Region::Neck(j)
        } else {
            Region::Background
        }
    }

    /// Radial jet in `s = ρ²` of the correction of point `j`.
    fn correction_radial(&self, j: usize, s: f64) -> Jet {
        let ej = self.scales[j] * self.eps;
        let d = deficit_jet(s / (ej * ej));
        let d = Jet::new(d.v * ej * ej, d.d1, d.d2 / (ej * ej));
        self.cutoff.jet_in_s(s) * d
    }

    /// Jet of `φ_ε − |ζ|²/2`, a periodic function.
    pub fn correction_jet(&self, x: &[f64; 4]) -> Result<PotentialJet> {
        let mut acc = PotentialJet::zero();
        for (j, d) in self.displacements(x, self.cutoff.outer()) {
            let s = d.iter().map(|v| v * v).sum::<f64>();
            if s == 0.0 {
                return Err(Error::OriginSingular);
            }
            let z = [Complex64::new(d[0], d[1]), Complex64::new(d[2], d[3])];
            acc = acc.add(&PotentialJet::radial(&z, self.correction_radial(j, s)));
        }
        Ok(acc)
    }

    /// `ω_ε` at `x` as a Hermitian matrix in `ζ`.
    pub fn form(&self, x: &[f64; 4]) -> Result<HermitianForm> {
        Ok(HermitianForm::flat().add(&self.correction_jet(x)?.hess))
    }

    /// `f_ε = log(Ω∧Ω̄ / ω_ε²)` normalized to vanish for the flat metric.
    pub fn ricci_potential(&self, x: &[f64; 4]) -> Result<f64> {
        let h = self.form(x)?;
        let det = h.det();
        if !h.is_positive() {
            return Err(Error::NonPositiveForm { locus: *x, min_eigenvalue: h.eigenvalues()[0] });
        }
        Ok(-(4.0 * det).ln())
    }

    /// Points on `shells` spheres in each of `[2ε_j, √ε]`, `[√ε, 2√ε]` and
    /// `[2√ε, 3√ε]` around every singular point, along `directions` random directions.
    pub fn sample_points(&self, shells: usize, directions: usize, seed: u64) -> Vec<[f64; 4]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dirs: Vec<[f64; 4]> = (0..directions)
            .map(|_| loop {
                let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if n > 0.1 && n <= 1.0 {
                    break v.map(|a| a / n);
                }
            })
            .collect();
        let root = self.eps.sqrt();
        let mut out = Vec::new();
        for (j, c) in self.centers.iter().enumerate() {
            let core = 2.0 * self.scales[j] * self.eps;
            let bands = [(core.min(root), root), (root, 2.0 * root), (2.0 * root, 3.0 * root)];
            for (lo, hi) in bands {
                for i in 0..shells {
                    let r = lo + (hi - lo) * i as f64 / (shells.max(2) - 1) as f64;
                    for d in &dirs {
                        out.push(std::array::from_fn(|a| c[a] + r * d[a]));
                    }
                }
            }
        }
        out
    }

    /// Sup-norms of `ω_ε − ω₀` and `f_ε` per region over sample points.
    pub fn summary(&self, points: &[[f64; 4]], exec: Exec) -> Result<AssemblySummary> {
        let rows = exec.try_map(points.len(), |i| -> Result<(Region, f64, f64)> {
            let x = &points[i];
            let h = self.form(x)?;
            Ok((self.region(x), h.sub(&HermitianForm::flat()).frobenius(), self.ricci_potential(x)?.abs()))
        })?;
        let mut s = AssemblySummary::default();
        for (region, dw, f) in rows {
            let slot = match region {
                Region::Core(_) => &mut s.core,
                Region::Neck(_) => &mut s.neck,
                Region::Background => &mut s.background,
            };
            slot.samples += 1;
            slot.form_deviation = slot.form_deviation.max(dw);
            slot.ricci_potential = slot.ricci_potential.max(f);
        }
        Ok(s)
    }

    /// `f_ε` sampled on a grid together with a support certificate.
    pub fn compute_f_eps(&self, domain: GridDomain, exec: Exec) -> Result<(ScalarField, SupportCertificate)> {
        let values = exec.try_map(domain.len(), |i| self.ricci_potential(&domain.point(i)))?;
        let mut cert = SupportCertificate::default();
        for (i, v) in values.iter().enumerate() {
            match self.region(&domain.point(i)) {
                Region::Neck(_) => cert.inside_annuli = cert.inside_annuli.max(v.abs()),
                _ => cert.outside_annuli = cert.outside_annuli.max(v.abs()),
            }
        }
        Ok((ScalarField::from_values(domain, values)?, cert))
    }
}

/// Largest `|f_ε|` inside and outside the gluing annuli.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SupportCertificate {
    pub inside_annuli: f64,
    pub outside_annuli: f64,
}

/// Sup-norms over the samples of one region.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RegionStats {
    pub samples: usize,
    pub form_deviation: f64,
    pub ricci_potential: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct AssemblySummary {
    pub core: RegionStats,
    pub neck: RegionStats,
    pub background: RegionStats,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_distinct_fixed_points() {
        let p = x1_fixed_points();
        assert_eq!(p.len(), 8);
        for (i, a) in p.iter().enumerate() {
            // Fixed by −1 modulo the lattice.
            for c in &a[1..] {
                assert_eq!(wrap(-c - c), 0.0);
            }
            for b in &p[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn regions_and_flat_background() {
        let asm = AlhAssembly::x1(0.01, None).unwrap();
        assert_eq!(asm.region(&[0.05, 0.0, 0.0, 0.0]), Region::Core(0));
        assert_eq!(asm.region(&[0.15, 0.5, 0.5, 0.5]), Region::Neck(7));
        assert_eq!(asm.region(&[0.5, 0.2, 0.3, 0.1]), Region::Background);
        let h = asm.form(&[0.5, 0.2, 0.3, 0.1]).unwrap();
        assert_eq!(h, HermitianForm::flat());
        assert!(asm.necks_disjoint());
        assert!(!AlhAssembly::x1(0.04, None).unwrap().necks_disjoint());
    }

    #[test]
    fn wrong_scale_count_rejected() {
        assert!(AlhAssembly::x1(0.01, Some(vec![1.0; 3])).is_err());
        assert!(AlhAssembly::x1(0.01, Some(vec![-1.0; 8])).is_err());
        assert!(AlhAssembly::x1(-0.01, None).is_err());
    }
}
