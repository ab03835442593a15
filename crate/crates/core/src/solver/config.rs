//! JSON solver configuration.

use serde::{Deserialize, Serialize};

use super::ma::Accelerator;
use super::manufactured::{manufactured_solve, Manufactured, RecoveryRow};
use super::pipeline::{alh_problem, solve_ma, SolveOptions, SolveOutcome};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gluing::{AlhAssembly, AssemblyConfig};
use crate::weighted::{EndSummand, WeightSpec};

/// Model name of the manufactured-solution problem on the flat `T⁴`.
pub const MANUFACTURED_T4: &str = "manufactured-t4";

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// `"alh-x1"` or `"manufactured-t4"`.
    pub assembly: AssemblyConfig,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// Truncation length of open ends; must be 1 on the torus.
    #[serde(rename = "L")]
    pub half_length: f64,
    /// Cells per axis; for ALH the `t`-count covers `[−L, L]`.
    pub grid: [usize; 4],
    pub max_iter: usize,
    pub tol: f64,
    #[serde(default)]
    pub accelerator: Accelerator,
    #[serde(default = "default_true")]
    pub enforce_smallness: bool,
}

/// A finished (or failed) solve together with its manufactured error, if any.
#[derive(Clone, Debug)]
pub struct SolverRun {
    pub outcome: SolveOutcome,
    pub recovery: Option<RecoveryRow>,
}

impl SolverConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SolverConfig = serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("solver config: {e}")))?;
        cfg.spec()?;
        Ok(cfg)
    }

    pub fn spec(&self) -> Result<WeightSpec> {
        if (self.assembly.epsilon - self.epsilon).abs() > 1e-15 {
            return Err(Error::InvalidParameter(format!(
                "epsilon {} differs from assembly epsilon {}",
                self.epsilon, self.assembly.epsilon
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol = {} must be positive", self.tol)));
        }
        let summand = if self.assembly.model == MANUFACTURED_T4 { EndSummand::None } else { EndSummand::Affine };
        WeightSpec::new(self.a, self.b, self.alpha, self.epsilon, summand)
    }

    pub fn options(&self, seed: u64) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            accelerator: self.accelerator,
            enforce_smallness: self.enforce_smallness,
            seed,
            ..SolveOptions::default()
        }
    }

    /// Builds and solves the configured problem. Configuration errors are
    /// returned as `Err`; solver failures are carried in the outcome.
    pub fn run(&self, seed: u64, exec: Exec) -> Result<SolverRun> {
        let spec = self.spec()?;
        let opts = self.options(seed);
        if self.assembly.model == MANUFACTURED_T4 {
            let n = self.grid[0];
            if self.grid.iter().any(|&m| m != n) {
                return Err(Error::InvalidParameter(format!("{MANUFACTURED_T4} needs a cubic grid, got {:?}", self.grid)));
            }
            if self.half_length != 1.0 || self.assembly.a.is_some() {
                return Err(Error::InvalidParameter(format!("{MANUFACTURED_T4} takes L = 1 and no scale factors")));
            }
            let (outcome, recovery) = manufactured_solve(&Manufactured::standard(), n, &spec, &opts, exec)?;
            return Ok(SolverRun { outcome, recovery });
        }
        let assembly = AlhAssembly::from_config(&self.assembly)?;
        let mut p = alh_problem(&assembly, &spec, self.half_length, self.grid, exec)?;
        Ok(SolverRun { outcome: solve_ma(&mut p, &opts)?, recovery: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{"assembly":{"model":"alh-x1","epsilon":0.05},"a":1,"b":1,"alpha":0.5,"epsilon":0.05,"L":4,"grid":[32,8,8,8],"max_iter":50,"tol":1e-9}"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = SolverConfig::from_json(BASE).unwrap();
        assert_eq!(cfg.accelerator, Accelerator::None);
        assert!(cfg.enforce_smallness);
        assert_eq!(cfg.half_length, 4.0);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = BASE.replace("\"tol\"", "\"tolerance\":1,\"tol\"");
        assert!(SolverConfig::from_json(&text).is_err());
    }

    #[test]
    fn rejects_mismatched_epsilon() {
        let text = BASE.replace("\"epsilon\":0.05,\"L\"", "\"epsilon\":0.04,\"L\"");
        assert!(SolverConfig::from_json(&text).is_err());
    }
}
