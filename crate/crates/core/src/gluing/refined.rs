//! Gluing an Eguchi–Hanson core into Taub-NUT modulo `±1`.
//!
//! In the holomorphic chart `s` of Taub-NUT,
//!
//! `φ_ε = χ(|s|/√ε)·[ε²φ_EH(s/ε) + ε⁴h₄(s/ε)] + (1 − χ(|s|/√ε))·φ_TN(s)`,
//!
//! where `h₄` is the Eguchi–Hanson-harmonic extension of the quartic jet of
//! `φ_TN`. Without the correction the inner potential misses `θ₄(s)`.

use num_complex::Complex64;
use serde::Serialize;

use super::cutoff::CutoffSpec;
use super::harmonic::{AleBackground, HarmonicExtension};
use super::quartic::{shell_points, QuarticJet};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kahler::{complex_hessian, ComplexPoint, Potential, PotentialJet};
use crate::models::eguchi_hanson::EguchiHanson;
use crate::models::taub_nut::{TaubNut, TaubNutPotential};

/// Glued potential on the resolution of Taub-NUT`/±`.
#[derive(Clone, Debug)]
pub struct RefinedGluing {
    pub eps: f64,
    pub cutoff: CutoffSpec,
    pub taub_nut: TaubNutPotential,
    pub correction: Option<HarmonicExtension>,
}

impl RefinedGluing {
    /// `jet` is the quartic jet of `φ_TN`; `None` disables the harmonic correction.
    pub fn new(mass: f64, eps: f64, jet: Option<&QuarticJet>) -> Result<Self> {
        let taub_nut = TaubNut::new(mass)?.potential()?;
        let correction = jet
            .map(|j| HarmonicExtension::new(j, AleBackground::EguchiHanson { core_sq: 1.0 }))
            .transpose()?;
        Ok(RefinedGluing { eps, cutoff: CutoffSpec::neck(eps)?, taub_nut, correction })
    }

    /// `ε²φ_EH(s/ε) + ε⁴h₄(s/ε)`.
    pub fn inner_jet(&self, s: &[Complex64; 2]) -> Result<PotentialJet> {
        let e = self.eps;
        let z = [s[0] / e, s[1] / e];
        let zp = ComplexPoint::new(z[0], z[1]);
        let mut j = EguchiHanson.jet(&zp).expect("closed form")?.dilated(e);
        if let Some(h) = &self.correction {
            j = j.add(&h.jet_at(&z)?.dilated(e).scale(e * e));
        }
        Ok(j)
    }

    fn inner_value(&self, s: &[Complex64; 2]) -> Result<f64> {
        let e = self.eps;
        let z = ComplexPoint::new(s[0] / e, s[1] / e);
        let mut v = e * e * EguchiHanson.value(&z)?;
        if let Some(h) = &self.correction {
            v += e.powi(4) * h.value(&z)?;
        }
        Ok(v)
    }

    /// `f_ε = log(Ω∧Ω̄/ω_ε²)`, normalized to vanish on Taub-NUT.
    pub fn ricci_potential(&self, s: &[Complex64; 2]) -> Result<f64> {
        let h = complex_hessian(self, &ComplexPoint::new(s[0], s[1]), 1e-3 * self.eps)?;
        if !h.is_positive() {
            let p = ComplexPoint::new(s[0], s[1]);
            return Err(Error::NonPositiveForm { locus: p.to_real(), min_eigenvalue: h.eigenvalues()[0] });
        }
        Ok(-(4.0 * h.det()).ln())
    }

    /// Sup of `|f_ε|` over `shells` spheres with `directions` points each: a third
    /// log-spaced in the core `[ε, √ε]`, the rest uniform in the cutoff annulus
    /// `[√ε, 2√ε]` at positions that do not depend on `ε`.
    pub fn sup_ricci_potential(&self, shells: usize, directions: usize, exec: Exec) -> Result<f64> {
        let root = self.eps.sqrt();
        let core = (shells / 3).max(2);
        let neck = shells.saturating_sub(core).max(2);
        let mut radii: Vec<f64> = (0..core).map(|i| self.eps * root.powf(-(i as f64) / core as f64)).collect();
        radii.extend((0..neck).map(|i| root * (1.0 + i as f64 / (neck - 1) as f64)));
        let mut pts = Vec::new();
        for (i, r) in radii.into_iter().enumerate() {
            pts.extend(shell_points(r, directions, 100 + i as u64));
        }
        let vals = exec.try_map(pts.len(), |i| self.ricci_potential(&pts[i]).map(f64::abs))?;
        Ok(vals.into_iter().fold(0.0, f64::max))
    }
}

impl Potential for RefinedGluing {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        let chi = self.cutoff.value(p.norm());
        if chi == 1.0 {
            return self.inner_value(&p.z);
        }
        if chi == 0.0 {
            return self.taub_nut.value(p);
        }
        Ok(chi * self.inner_value(&p.z)? + (1.0 - chi) * self.taub_nut.value(p)?)
    }

    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        let chi = PotentialJet::radial(&p.z, self.cutoff.jet_in_s(p.norm_sqr()));
        let flat_cut = chi.grad == [Complex64::new(0.0, 0.0); 2];
        if flat_cut && chi.value == 1.0 {
            return Some(self.inner_jet(&p.z));
        }
        let outer = self.taub_nut.jet(p)?;
        if flat_cut && chi.value == 0.0 {
            return Some(outer);
        }
        Some((|| {
            let (a, b) = (self.inner_jet(&p.z)?, outer?);
            Ok(chi.mul(&a.sub(&b)).add(&b))
        })())
    }

    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        self.taub_nut.contains(p, radius) && p.norm() > radius
    }
}

/// `|ω_loc,ε − ω_ALE|` at `z`, where `ω_loc,ε = i∂∂̄(ε⁻²φ_TN(εz))` is Taub-NUT in
/// the rescaled chart and `ω_ALE` is Eguchi–Hanson.
pub fn local_model_deviation(mass: f64, eps: f64, z: &[Complex64; 2]) -> Result<f64> {
    let tn = TaubNut::new(mass)?.potential()?;
    let p = ComplexPoint::new(z[0] * eps, z[1] * eps);
    let h_tn = complex_hessian(&tn, &p, 1e-3 * eps * (1.0 + p.norm()))?;
    let zp = ComplexPoint::new(z[0], z[1]);
    let h_eh = EguchiHanson.jet(&zp).expect("closed form")?.hess;
    Ok(h_tn.sub(&h_eh).frobenius())
}

/// Sup-norm of `f_ε` at one scale, with and without the harmonic correction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RefinedSample {
    pub eps: f64,
    pub with_correction: f64,
    pub without_correction: f64,
}

/// `sup|f_ε|` across scales for the refined and the plain gluing.
pub fn refined_scaling(mass: f64, jet: &QuarticJet, eps: &[f64], exec: Exec) -> Result<Vec<RefinedSample>> {
    eps.iter()
        .map(|&e| {
            let with = RefinedGluing::new(mass, e, Some(jet))?.sup_ricci_potential(24, 48, exec)?;
            let without = RefinedGluing::new(mass, e, None)?.sup_ricci_potential(24, 48, exec)?;
            Ok(RefinedSample { eps: e, with_correction: with, without_correction: without })
        })
        .collect()
}

