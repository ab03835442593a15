//! Quantitative Banach fixed point for `Φ(x) = 0` with `Φ(x) = Φ(0) + Lx + Q(x)`.
//!
//! If `‖L⁻¹‖ ≤ c`, `‖Q(x) − Q(y)‖ ≤ q‖x − y‖(‖x‖ + ‖y‖)` on `B(0, r₀)` and
//! `‖Φ(0)‖ ≤ r/(2c)` with `r ≤ min(r₀, 1/(2qc))`, the iteration
//! `x ← x − L⁻¹Φ(x)` stays in `B(0, r)` and contracts with ratio `≤ 2qcr`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Text of the smallness hypothesis, used in diagnoses.
pub const SMALLNESS_DIAGNOSIS: &str = "‖Φ(0)‖ > r/2c";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointConfig {
    pub q: f64,
    pub c: f64,
    pub r0: f64,
    pub r: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl FixedPointConfig {
    /// Chooses the largest admissible ball `r = min(r₀, 1/(2qc))`.
    pub fn new(q: f64, c: f64, r0: f64, tol: f64, max_iter: usize) -> Result<Self> {
        let r = if q > 0.0 { r0.min(1.0 / (2.0 * q * c)) } else { r0 };
        let cfg = FixedPointConfig { q, c, r0, r, tol, max_iter };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 0.0 && self.c > 0.0 && self.r0 > 0.0 && self.r > 0.0 && self.tol > 0.0) {
            return Err(Error::InvalidParameter("fixed-point constants must be positive".into()));
        }
        let cap = if self.q > 0.0 { self.r0.min(1.0 / (2.0 * self.q * self.c)) } else { self.r0 };
        if self.r > cap * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!("ball radius {} exceeds min(r0, 1/(2qc)) = {cap}", self.r)));
        }
        Ok(())
    }

    /// Upper bound `2qcr` for the contraction ratio.
    pub fn contraction_bound(&self) -> f64 {
        2.0 * self.q * self.c * self.r
    }
}

/// Outcome of the smallness test on `‖Φ(0)‖`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmallnessCheck {
    pub phi0_norm: f64,
    /// `r/(2c)`.
    pub bound: f64,
    /// `‖Φ(0)‖·2c/r`; the hypothesis holds iff this is at most one.
    pub margin: f64,
    pub go: bool,
}

impl SmallnessCheck {
    /// Turns a no-go into [`Error::HypothesisViolated`].
    pub fn require(&self) -> Result<()> {
        if self.go {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(format!(
                "{SMALLNESS_DIAGNOSIS}: {:e} > {:e} (margin {:.3})",
                self.phi0_norm, self.bound, self.margin
            )))
        }
    }
}

pub fn check_smallness(phi0_norm: f64, cfg: &FixedPointConfig) -> SmallnessCheck {
    let bound = cfg.r / (2.0 * cfg.c);
    let margin = phi0_norm / bound;
    SmallnessCheck { phi0_norm, bound, margin, go: margin <= 1.0 }
}

/// A residual map with a fixed approximate inverse of its linearization.
pub trait FixedPointProblem {
    type State: Clone;

    fn zero(&self) -> Self::State;
    /// `Φ(x)`.
    fn residual(&self, x: &Self::State) -> Result<Self::State>;
    /// `x − L⁻¹ρ` for a residual `ρ = Φ(x)`.
    fn correct(&self, x: &Self::State, residual: &Self::State) -> Result<Self::State>;
    /// Norm on the unknowns (the space `E`).
    fn norm(&self, x: &Self::State) -> f64;
    /// Norm on residuals (the space `F`).
    fn residual_norm(&self, r: &Self::State) -> f64;
    /// Norm the stopping tolerance applies to.
    fn stop_norm(&self, r: &Self::State) -> f64 {
        self.residual_norm(r)
    }
    /// `‖x − y‖_E`.
    fn distance(&self, x: &Self::State, y: &Self::State) -> f64;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointReport {
    pub iterations: usize,
    /// Stopping norm of `Φ(x_n)`, starting with the initial iterate.
    pub residual_history: Vec<f64>,
    /// `‖x_{n+1} − x_n‖ / ‖x_n − x_{n−1}‖`.
    pub contraction_history: Vec<f64>,
    pub final_norm: f64,
    pub smallness: SmallnessCheck,
    pub contraction_bound: f64,
    /// First iterate norm above `r`, recorded when the hypotheses are not enforced.
    pub left_ball: Option<f64>,
}

/// Runs `x ← x − L⁻¹Φ(x)` from `x0` until `‖Φ(x)‖ ≤ tol`.
///
/// With `enforce_smallness` a failed smallness test or an iterate outside
/// `B(0, r)` is an error; otherwise both are only recorded in the report.
pub fn banach_fixed_point<P: FixedPointProblem>(
    problem: &P,
    x0: P::State,
    cfg: &FixedPointConfig,
    enforce_smallness: bool,
) -> Result<(P::State, FixedPointReport)> {
    cfg.validate()?;
    let phi0 = problem.residual(&problem.zero())?;
    let smallness = check_smallness(problem.residual_norm(&phi0), cfg);
    if enforce_smallness {
        smallness.require()?;
    }
    let mut x = x0;
    let mut residual_history = Vec::new();
    let mut contraction_history = Vec::new();
    let mut last_step: Option<f64> = None;
    let mut left_ball = None;
    for it in 0..=cfg.max_iter {
        let rho = problem.residual(&x)?;
        let rn = problem.stop_norm(&rho);
        residual_history.push(rn);
        if rn <= cfg.tol {
            let report = FixedPointReport {
                iterations: it,
                residual_history,
                contraction_history,
                final_norm: problem.norm(&x),
                smallness,
                contraction_bound: cfg.contraction_bound(),
                left_ball,
            };
            return Ok((x, report));
        }
        if !rn.is_finite() {
            return Err(Error::NonConvergence { iterations: it, residual: rn });
        }
        if it == cfg.max_iter {
            break;
        }
        let next = problem.correct(&x, &rho)?;
        let step = problem.distance(&next, &x);
        if let Some(prev) = last_step {
            if prev > 0.0 {
                contraction_history.push(step / prev);
            }
        }
        last_step = Some(step);
        let norm = problem.norm(&next);
        if norm > cfg.r {
            if enforce_smallness {
                return Err(Error::LeftBall { norm, radius: cfg.r });
            }
            left_ball.get_or_insert(norm);
        }
        x = next;
    }
    Err(Error::MaxIterations(cfg.max_iter))
}

/// `Φ(x) = x + x² − t` on ℝ, with `L = 1`, `q = c = 1`.
#[derive(Clone, Copy, Debug)]
pub struct ScalarModel {
    pub t: f64,
}

impl FixedPointProblem for ScalarModel {
    type State = f64;

    fn zero(&self) -> f64 {
        0.0
    }

    fn residual(&self, x: &f64) -> Result<f64> {
        Ok(x + x * x - self.t)
    }

    fn correct(&self, x: &f64, residual: &f64) -> Result<f64> {
        Ok(x - residual)
    }

    fn norm(&self, x: &f64) -> f64 {
        x.abs()
    }

    fn residual_norm(&self, r: &f64) -> f64 {
        r.abs()
    }

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        (x - y).abs()
    }
}

impl ScalarModel {
    /// Configuration with `q = c = 1` and `r₀ = 1`, so `r = ½`.
    pub fn config(tol: f64) -> FixedPointConfig {
        FixedPointConfig::new(1.0, 1.0, 1.0, tol, 200).expect("constants are positive")
    }

    /// Root `(−1 + √(1 + 4t))/2` in the ball.
    pub fn exact_root(&self) -> f64 {
        let d = (1.0 + 4.0 * self.t).sqrt();
        // Rationalized to avoid cancellation for small t.
        2.0 * self.t / (1.0 + d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_root() {
        let m = ScalarModel { t: 0.01 };
        let (x, rep) = banach_fixed_point(&m, 0.0, &ScalarModel::config(1e-15), true).unwrap();
        assert!((x - ((1.04f64).sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert!(rep.contraction_history.iter().all(|&k| k <= rep.contraction_bound));
    }

    #[test]
    fn linear_map_converges_in_one_step() {
        struct Lin;
        impl FixedPointProblem for Lin {
            type State = f64;
            fn zero(&self) -> f64 {
                0.0
            }
            fn residual(&self, x: &f64) -> Result<f64> {
                Ok(3.0 * x - 0.1)
            }
            fn correct(&self, x: &f64, r: &f64) -> Result<f64> {
                Ok(x - r / 3.0)
            }
            fn norm(&self, x: &f64) -> f64 {
                x.abs()
            }
            fn residual_norm(&self, r: &f64) -> f64 {
                r.abs()
            }
            fn distance(&self, x: &f64, y: &f64) -> f64 {
                (x - y).abs()
            }
        }
        let cfg = FixedPointConfig::new(0.0, 1.0 / 3.0, 1.0, 1e-14, 10).unwrap();
        let (_, rep) = banach_fixed_point(&Lin, 0.0, &cfg, true).unwrap();
        assert_eq!(rep.iterations, 1);
    }

    #[test]
    fn large_forcing_is_rejected() {
        let err = banach_fixed_point(&ScalarModel { t: 1.0 }, 0.0, &ScalarModel::config(1e-12), true).unwrap_err();
        match err {
            Error::HypothesisViolated(msg) => assert!(msg.starts_with(SMALLNESS_DIAGNOSIS)),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn oversized_ball_is_invalid() {
        let cfg = FixedPointConfig { q: 1.0, c: 1.0, r0: 1.0, r: 0.9, tol: 1e-9, max_iter: 5 };
        assert!(cfg.validate().is_err());
    }
}
