//! The weight `r_ε` and the weighted-space parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::AlhAssembly;

/// Radius below which `r_ε` follows the distance to the exceptional set.
pub const NECK_ZONE: f64 = 0.125;

/// `r_ε` as a function of the distance `r` to infinity and the distance `ρ`
/// to the exceptional set.
///
/// * `r ≥ 1`: `r`
/// * `ρ ≤ ε`: `ε`
/// * `ε ≤ ρ ≤ 2ε`: monotone cubic from `ε` to `2ε`, `C¹` at both ends
/// * `2ε ≤ ρ ≤ 1/8`: `ρ`
/// * otherwise: `max(r, min(ρ, 1))`, which lies in `[1/8, 1]`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightFunction {
    pub epsilon: f64,
}

impl WeightFunction {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && 2.0 * epsilon <= NECK_ZONE) {
            return Err(Error::InvalidParameter(format!("ε = {epsilon} must lie in (0, 1/16]")));
        }
        Ok(WeightFunction { epsilon })
    }

    pub fn eval(&self, r: f64, rho: f64) -> f64 {
        let e = self.epsilon;
        if r >= 1.0 {
            return r;
        }
        if rho <= e {
            return e;
        }
        if rho <= 2.0 * e {
            // h(0) = 0, h(1) = 1, h'(0) = 0, h'(1) = 1; h' = 4x − 3x² ≥ 0 on [0, 1].
            let x = rho / e - 1.0;
            return e * (1.0 + x * x * (2.0 - x));
        }
        if rho <= NECK_ZONE {
            return rho;
        }
        r.max(rho.min(1.0))
    }

    /// `r_ε` on the `X̂₁` assembly: `r = |t|`, `ρ` the distance to the nearest singular point.
    pub fn on_assembly(&self, assembly: &AlhAssembly, x: &[f64; 4]) -> f64 {
        self.eval(x[0].abs(), assembly.nearest(x).1)
    }
}

/// The summand added to the weighted space of potentials at the ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndSummand {
    /// `ℝ r̃`, for ALH ends.
    Affine,
    /// `ℝ log r`, for ALG ends.
    Logarithmic,
    /// Nothing, for ALF ends.
    None,
}

/// Pipeline whose extra constraints on `(a, b)` are checked by [`WeightSpec::check_pipeline`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "pipeline")]
pub enum Pipeline {
    Alh,
    Alg { k: u32 },
    AlfCyclic,
    AlfDihedral,
}

/// Parameters of the spaces `E^{a,b}_ε` and `F^{a,b}_ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub summand: EndSummand,
}

impl WeightSpec {
    pub fn new(a: f64, b: f64, alpha: f64, epsilon: f64, summand: EndSummand) -> Result<Self> {
        let s = WeightSpec { a, b, alpha, epsilon, summand };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(Error::InvalidParameter(format!("a = {} must be positive", self.a)));
        }
        if !(self.b > 0.0 && self.b < 2.0) {
            return Err(Error::InvalidParameter(format!("b = {} must lie in (0, 2)", self.b)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("α = {} must lie in (0, 1)", self.alpha)));
        }
        WeightFunction::new(self.epsilon)?;
        Ok(())
    }

    pub fn check_pipeline(&self, pipeline: Pipeline) -> Result<()> {
        self.validate()?;
        let expected = match pipeline {
            Pipeline::Alh => EndSummand::Affine,
            Pipeline::Alg { .. } => EndSummand::Logarithmic,
            Pipeline::AlfCyclic | Pipeline::AlfDihedral => EndSummand::None,
        };
        if self.summand != expected {
            return Err(Error::InvalidParameter(format!("{pipeline:?} needs the {expected:?} end summand")));
        }
        match pipeline {
            Pipeline::Alg { k } if self.a >= k as f64 => {
                Err(Error::InvalidParameter(format!("ALG with k = {k} needs a < k, got a = {}", self.a)))
            }
            Pipeline::AlfCyclic if self.a >= 1.0 => {
                Err(Error::InvalidParameter(format!("cyclic ALF needs a < 1, got a = {}", self.a)))
            }
            Pipeline::AlfDihedral if self.b >= 1.0 => {
                Err(Error::InvalidParameter(format!("dihedral ALF needs b < 1, got b = {}", self.b)))
            }
            _ => Ok(()),
        }
    }

    pub fn weight_function(&self) -> WeightFunction {
        WeightFunction { epsilon: self.epsilon }
    }

    /// `w_i = r_ε^{a+i}·min(1, 8r_ε)^{b−a}`: `r_ε^{a+i}` far out and
    /// proportional to `r_ε^{b+i}` on the necks. `i` may be fractional.
    pub fn weight(&self, i: f64, r_eps: f64) -> f64 {
        r_eps.powf(self.a + i) * (8.0 * r_eps).min(1.0).powf(self.b - self.a)
    }

    /// Weights of the target space `F^{a,b}_ε = C^{0,α}_{ε,a+2,b+2}`.
    pub fn target(&self) -> WeightSpec {
        WeightSpec { a: self.a + 2.0, b: self.b + 2.0, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        let w = WeightFunction::new(0.01).unwrap();
        assert_eq!(w.eval(3.0, 5.0), 3.0);
        assert_eq!(w.eval(0.0, 0.05), 0.05);
        assert_eq!(w.eval(0.0, 0.005), 0.01);
        assert!((w.eval(0.0, 0.02) - 0.02).abs() < 1e-15);
        let v = w.eval(0.5, 0.6);
        assert!((0.125..=1.0).contains(&v));
    }

    #[test]
    fn collar_is_monotone() {
        let w = WeightFunction::new(0.01).unwrap();
        let mut prev = w.eval(0.0, 0.01);
        for i in 1..=1000 {
            let v = w.eval(0.0, 0.01 + 0.01 * i as f64 / 1000.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn spec_constraints() {
        assert!(WeightSpec::new(1.0, 2.0, 0.5, 0.01, EndSummand::Affine).is_err());
        let s = WeightSpec::new(1.0, 1.0, 0.5, 0.01, EndSummand::Affine).unwrap();
        assert!(s.check_pipeline(Pipeline::Alh).is_ok());
        assert!(s.check_pipeline(Pipeline::AlfDihedral).is_err());
        let g = WeightSpec::new(1.5, 0.5, 0.5, 0.01, EndSummand::Logarithmic).unwrap();
        assert!(g.check_pipeline(Pipeline::Alg { k: 1 }).is_err());
        assert!(g.check_pipeline(Pipeline::Alg { k: 2 }).is_ok());
        let f = WeightSpec::new(1.5, 0.5, 0.5, 0.01, EndSummand::None).unwrap();
        assert!(f.check_pipeline(Pipeline::AlfCyclic).is_err());
    }

    #[test]
    fn weight_cancels_decay_far_out() {
        let s = WeightSpec::new(1.3, 0.7, 0.5, 0.01, EndSummand::Affine).unwrap();
        for r in [0.2, 1.0, 7.0] {
            assert!((s.weight(0.0, r) * r.powf(-1.3) - 1.0).abs() < 1e-14);
        }
        let near = 0.05;
        assert!((s.weight(0.0, near) / near.powf(0.7) - 8f64.powf(-0.6)).abs() < 1e-14);
    }
}
