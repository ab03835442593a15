use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::kahler::{ComplexPoint, Potential, PotentialJet};

/// Eguchi–Hanson metric on the resolution of `ℂ²/±` with unit core size,
/// in the orbifold chart `z`:
///
/// `φ(z) = ½(√(1+|z|⁴) + 2 log|z| − log(1 + √(1+|z|⁴)))`.
#[derive(Clone, Copy, Debug, Default)]
pub struct EguchiHanson;

/// Jet in `s = |z|²` of the deviation `D(s) = φ(s) − s/2`.
///
/// Written as `½(1/(R+s) − log1p((1 + 1/(R+s))/s))` with `R = √(1+s²)` to
/// avoid cancellation for large `s`; `D ≈ −1/(4s)` there.
pub fn deficit_jet(s: f64) -> Jet {
    let r = (1.0 + s * s).sqrt();
    let rs = r + s;
    let value = 0.5 * (1.0 / rs - ((1.0 + 1.0 / rs) / s).ln_1p());
    let q = s * rs;
    let dq = r + 2.0 * s + s * s / r;
    Jet::new(value, 0.5 / q, -dq / (2.0 * q * q))
}

/// Jet of `φ` in `s = |z|²`.
pub fn eh_radial_jet(s: f64) -> Jet {
    deficit_jet(s) + Jet::new(0.5 * s, 0.5, 0.0)
}

/// Value of the Eguchi–Hanson potential; singular at the origin of the chart.
pub fn eh_potential(p: &ComplexPoint) -> Result<f64> {
    let s = p.norm_sqr();
    if s == 0.0 {
        return Err(Error::OriginSingular);
    }
    Ok(eh_radial_jet(s).v)
}

impl Potential for EguchiHanson {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        eh_potential(p)
    }

    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        let s = p.norm_sqr();
        if s == 0.0 {
            return Some(Err(Error::OriginSingular));
        }
        Some(Ok(PotentialJet::radial(&p.z, eh_radial_jet(s))))
    }

    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        p.norm() > radius
    }
}

/// `φ − |z|²/2` as a potential.
#[derive(Clone, Copy, Debug, Default)]
pub struct EguchiHansonDeficit;

impl Potential for EguchiHansonDeficit {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        let s = p.norm_sqr();
        if s == 0.0 {
            return Err(Error::OriginSingular);
        }
        Ok(deficit_jet(s).v)
    }

    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        let s = p.norm_sqr();
        if s == 0.0 {
            return Some(Err(Error::OriginSingular));
        }
        Some(Ok(PotentialJet::radial(&p.z, deficit_jet(s))))
    }

    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        p.norm() > radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(s: f64) -> f64 {
        let r = (1.0 + s * s).sqrt();
        0.5 * (r + s.ln() - (1.0 + r).ln())
    }

    #[test]
    fn stable_form_matches_closed_form() {
        for &s in &[0.01, 0.3, 1.0, 4.0, 50.0] {
            let j = eh_radial_jet(s);
            assert!((j.v - naive(s)).abs() < 1e-13 * (1.0 + s), "s = {s}");
            let r = (1.0 + s * s).sqrt();
            assert!((j.d1 - r / (2.0 * s)).abs() < 1e-14 * (1.0 + j.d1.abs()));
            let d2 = -1.0 / (2.0 * s * s * r);
            assert!((j.d2 - d2).abs() < 1e-13 * d2.abs());
        }
    }

    #[test]
    fn deficit_far_field() {
        let s = 1e6;
        assert!((deficit_jet(s).v * 4.0 * s + 1.0).abs() < 1e-6);
    }

    #[test]
    fn origin_is_singular() {
        assert_eq!(eh_potential(&ComplexPoint::from_real([0.0; 4])), Err(Error::OriginSingular));
    }
}
