//! Volume ratios, Ricci potentials, Laplacian and the Monge–Ampère residual.
//!
//! Forms are Hermitian matrices `A = (∂_j∂̄_k φ)`. For a perturbation `B = ∂∂̄ψ`
//! the exact expansion in complex dimension two is
//!
//! `det(A+B)/det A = 1 + tr(A⁻¹B) + det B/det A`,
//!
//! and with the Laplacian normalized as `Δu = −2 tr(A⁻¹ ∂∂̄u)` (so that the
//! flat Laplacian is `−Σ ∂²`) the residual reads `Φ(ψ) = 1 − ½Δψ + Q(ψ) − e^f`.

use super::forms::{ComplexPoint, HermitianForm, HoloTwoForm};
use super::potential::{complex_hessian, Potential};
use crate::error::{Error, Result};

/// Anything that produces a Kähler form at a point.
pub trait FormField: Send + Sync {
    fn form(&self, p: &ComplexPoint) -> Result<HermitianForm>;
}

/// The form `∂∂̄φ` of a potential, with finite-difference step `h` as fallback.
pub struct PotentialForm<P> {
    pub potential: P,
    pub step: f64,
}

impl<P: Potential> PotentialForm<P> {
    pub fn new(potential: P, step: f64) -> Self {
        PotentialForm { potential, step }
    }
}

impl<P: Potential> FormField for PotentialForm<P> {
    fn form(&self, p: &ComplexPoint) -> Result<HermitianForm> {
        complex_hessian(&self.potential, p, self.step)
    }
}

/// Constant form.
impl FormField for HermitianForm {
    fn form(&self, _p: &ComplexPoint) -> Result<HermitianForm> {
        Ok(*self)
    }
}

/// `ω²/ω_ref²` as a ratio of determinants.
pub fn ma_density_ratio(omega: &HermitianForm, reference: &HermitianForm) -> Result<f64> {
    let d = reference.det();
    if !(d > 0.0) || !reference.is_positive() {
        return Err(Error::DegenerateReference { det: d });
    }
    Ok(omega.det() / d)
}

/// Density ratio of two form fields at a point.
pub fn ma_density_ratio_at(omega: &dyn FormField, reference: &dyn FormField, p: &ComplexPoint) -> Result<f64> {
    ma_density_ratio(&omega.form(p)?, &reference.form(p)?)
}

/// Ricci potential `f = log(Ω∧Ω̄ / ω²)`, normalized so that the flat form with
/// `Ω = dz₁∧dz₂` gives `f = 0`.
pub fn ricci_potential_at(omega: &HermitianForm, big_omega: &HoloTwoForm, p: &ComplexPoint) -> Result<f64> {
    if !omega.is_positive() {
        return Err(Error::NonPositiveForm { locus: p.to_real(), min_eigenvalue: omega.eigenvalues()[0] });
    }
    Ok((big_omega.abs_sqr() / (4.0 * omega.det())).ln())
}

/// `Δu = −2 tr(A⁻¹ B)` with `B = ∂∂̄u`.
pub fn laplacian_of(omega: &HermitianForm, ddc_u: &HermitianForm) -> Result<f64> {
    Ok(-2.0 * omega.inverse()?.trace_product(ddc_u))
}

/// `Q(ψ) = det B / det A`.
pub fn quadratic_remainder_of(omega: &HermitianForm, ddc_psi: &HermitianForm) -> Result<f64> {
    let d = omega.det();
    if !(d > 0.0) {
        return Err(Error::DegenerateReference { det: d });
    }
    Ok(ddc_psi.det() / d)
}

/// `Φ(ψ) = det(A+B)/det A − e^f`.
pub fn ma_residual_of(omega: &HermitianForm, ddc_psi: &HermitianForm, f: f64) -> Result<f64> {
    let d = omega.det();
    if !(d > 0.0) {
        return Err(Error::DegenerateReference { det: d });
    }
    Ok(omega.add(ddc_psi).det() / d - f.exp())
}

/// Geometer's Laplacian of `u` against `ω` at `p`.
pub fn laplacian<U: Potential + ?Sized>(omega: &dyn FormField, u: &U, p: &ComplexPoint, h: f64) -> Result<f64> {
    laplacian_of(&omega.form(p)?, &complex_hessian(u, p, h)?)
}

/// Quadratic remainder `Q(ψ)` at `p`.
pub fn quadratic_remainder<U: Potential + ?Sized>(
    omega: &dyn FormField,
    psi: &U,
    p: &ComplexPoint,
    h: f64,
) -> Result<f64> {
    quadratic_remainder_of(&omega.form(p)?, &complex_hessian(psi, p, h)?)
}

/// Monge–Ampère residual `Φ(ψ)` at `p` for a prescribed `f(p)`.
pub fn ma_residual<U: Potential + ?Sized>(
    omega: &dyn FormField,
    psi: &U,
    f: f64,
    p: &ComplexPoint,
    h: f64,
) -> Result<f64> {
    ma_residual_of(&omega.form(p)?, &complex_hessian(psi, p, h)?, f)
}
