//! Potentials patched together with a radial cut-off.

use num_complex::Complex64;

use super::cutoff::CutoffSpec;
use crate::error::Result;
use crate::kahler::{ComplexPoint, Potential, PotentialJet};

/// `χ φ_inner + (1 − χ) φ_outer` with `χ` radial about `center`.
#[derive(Clone, Debug)]
pub struct GluedPotential<I, O> {
    pub inner: I,
    pub outer: O,
    pub cutoff: CutoffSpec,
    pub center: [Complex64; 2],
}

impl<I: Potential, O: Potential> GluedPotential<I, O> {
    pub fn new(inner: I, outer: O, cutoff: CutoffSpec) -> Self {
        GluedPotential { inner, outer, cutoff, center: [Complex64::new(0.0, 0.0); 2] }
    }

    fn offset(&self, p: &ComplexPoint) -> [Complex64; 2] {
        [p.z[0] - self.center[0], p.z[1] - self.center[1]]
    }
}

/// Value of `χ φ_inner + (1 − χ) φ_outer`; only the potentials whose weight is
/// nonzero are evaluated.
pub fn glue_potential<I: Potential + ?Sized, O: Potential + ?Sized>(
    inner: &I,
    outer: &O,
    cutoff: &CutoffSpec,
    p: &ComplexPoint,
) -> Result<f64> {
    let chi = cutoff.value(p.norm());
    if chi == 1.0 {
        return inner.value(p);
    }
    if chi == 0.0 {
        return outer.value(p);
    }
    Ok(chi * inner.value(p)? + (1.0 - chi) * outer.value(p)?)
}

impl<I: Potential, O: Potential> Potential for GluedPotential<I, O> {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        let d = self.offset(p);
        let chi = self.cutoff.value((d[0].norm_sqr() + d[1].norm_sqr()).sqrt());
        if chi == 1.0 {
            return self.inner.value(p);
        }
        if chi == 0.0 {
            return self.outer.value(p);
        }
        Ok(chi * self.inner.value(p)? + (1.0 - chi) * self.outer.value(p)?)
    }

    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        let d = self.offset(p);
        let chi = PotentialJet::radial(&d, self.cutoff.jet_in_s(d[0].norm_sqr() + d[1].norm_sqr()));
        let g = |p: &ComplexPoint, which: bool| if which { self.inner.jet(p) } else { self.outer.jet(p) };
        if chi.value == 1.0 && chi.grad == [Complex64::new(0.0, 0.0); 2] {
            return g(p, true);
        }
        if chi.value == 0.0 && chi.grad == [Complex64::new(0.0, 0.0); 2] {
            return g(p, false);
        }
        let (a, b) = match (g(p, true)?, g(p, false)?) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Some(Err(e)),
        };
        Some(Ok(chi.mul(&a.sub(&b)).add(&b)))
    }

    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        let d = self.offset(p);
        let r = (d[0].norm_sqr() + d[1].norm_sqr()).sqrt();
        let inner_needed = r - radius < self.cutoff.outer();
        let outer_needed = r + radius > self.cutoff.inner;
        (!inner_needed || self.inner.contains(p, radius)) && (!outer_needed || self.outer.contains(p, radius))
    }
}
