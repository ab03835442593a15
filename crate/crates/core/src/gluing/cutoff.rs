//! Smooth cut-off profiles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// `e^{−1/t}` for `t > 0`, zero otherwise.
pub fn bump(t: Jet) -> Jet {
    if t.v <= 0.0 {
        Jet::constant(0.0)
    } else {
        (-t.recip()).exp()
    }
}

/// Non-increasing profile equal to 1 on `[0, 1]` and 0 on `[2, ∞)`:
/// `χ(x) = ψ(2 − x) / (ψ(2 − x) + ψ(x − 1))` with `ψ = bump`.
pub fn profile(x: Jet) -> Jet {
    if x.v <= 1.0 {
        return Jet::constant(1.0);
    }
    if x.v >= 2.0 {
        return Jet::constant(0.0);
    }
    let a = bump(-x + 2.0);
    let b = bump(x - 1.0);
    a / (a + b)
}

/// `χ(r / inner)`, so the cut-off is 1 for `r ≤ inner` and 0 for `r ≥ 2·inner`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSpec {
    pub eps: f64,
    pub inner: f64,
}

impl CutoffSpec {
    /// Cut-off `χ(√ε|z|)` in a rescaled model chart.
    pub fn chart(eps: f64) -> Result<Self> {
        check_eps(eps)?;
        Ok(CutoffSpec { eps, inner: 1.0 / eps.sqrt() })
    }

    /// Cut-off `χ(ρ/√ε)` in the background coordinates.
    pub fn neck(eps: f64) -> Result<Self> {
        check_eps(eps)?;
        Ok(CutoffSpec { eps, inner: eps.sqrt() })
    }

    pub fn outer(&self) -> f64 {
        2.0 * self.inner
    }

    pub fn value(&self, r: f64) -> f64 {
        profile(Jet::constant(r / self.inner)).v
    }

    /// Jet of the cut-off in `s = r²`.
    pub fn jet_in_s(&self, s: f64) -> Jet {
        let r = s.sqrt();
        if r <= self.inner || r >= self.outer() {
            return Jet::constant(self.value(r));
        }
        profile(Jet::var(s).sqrt().scale(1.0 / self.inner))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gluing scale ε = {eps} must be positive")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_plateaus_and_midpoint() {
        assert_eq!(profile(Jet::var(0.3)).v, 1.0);
        assert_eq!(profile(Jet::var(2.5)).v, 0.0);
        assert!((profile(Jet::var(1.5)).v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jet_matches_differences() {
        let c = CutoffSpec::neck(0.04).unwrap();
        let h = 1e-5;
        for &s in &[0.045, 0.06, 0.09, 0.13] {
            let j = c.jet_in_s(s);
            let v = |s: f64| c.value(s.sqrt());
            let d1 = (v(s + h) - v(s - h)) / (2.0 * h);
            let d2 = (v(s + h) - 2.0 * v(s) + v(s - h)) / (h * h);
            assert!((j.d1 - d1).abs() < 1e-6 * (1.0 + d1.abs()), "{s}");
            assert!((j.d2 - d2).abs() < 1e-3 * (1.0 + d2.abs()), "{s}");
        }
    }
}
