//! Manufactured Monge–Ampère solutions on the flat `T⁴`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ma::Accelerator;
use super::pipeline::{solve_ma, torus_problem, SolveOptions, SolveOutcome};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kahler::{complex_from_real_hessian, HermitianForm};
use crate::weighted::{EndSummand, WeightSpec};

/// `ψ*(x) = Σ A cos(2π k·x + φ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manufactured {
    /// `(A, k, φ)` per mode.
    pub modes: Vec<(f64, [i32; 4], f64)>,
}

impl Manufactured {
    /// Three low modes mixing all four directions; `ω₀ + dd^cψ*` stays
    /// comfortably positive.
    pub fn standard() -> Self {
        Manufactured {
            modes: vec![(0.004, [1, 1, 0, 0], 0.3), (0.003, [0, 0, 1, -1], 0.0), (0.002, [1, 0, 0, 1], 1.1)],
        }
    }

    pub fn value(&self, x: &[f64; 4]) -> f64 {
        self.modes.iter().map(|(a, k, p)| a * (2.0 * PI * dot(k, x) + p).cos()).sum()
    }

    pub fn real_hessian(&self, x: &[f64; 4]) -> [[f64; 4]; 4] {
        let mut h = [[0.0; 4]; 4];
        for (amp, k, p) in &self.modes {
            let c = -amp * 4.0 * PI * PI * (2.0 * PI * dot(k, x) + p).cos();
            for a in 0..4 {
                for b in 0..4 {
                    h[a][b] += c * (k[a] * k[b]) as f64;
                }
            }
        }
        h
    }

    /// `f = log det(ω₀ + dd^cψ*) − log det ω₀`.
    pub fn rhs(&self, x: &[f64; 4]) -> f64 {
        let h = HermitianForm::flat().add(&complex_from_real_hessian(&self.real_hessian(x)));
        (4.0 * h.det()).ln()
    }
}

fn dot(k: &[i32; 4], x: &[f64; 4]) -> f64 {
    (0..4).map(|a| k[a] as f64 * x[a]).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoveryRow {
    pub cells: usize,
    pub spacing: f64,
    /// `sup|ψ − ψ*|` after removing means.
    pub error: f64,
    pub iterations: usize,
    pub residual: f64,
    pub normalization: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoveryReport {
    pub solution: Manufactured,
    pub rows: Vec<RecoveryRow>,
    /// `error(n) / error(2n)` for consecutive rows.
    pub ratios: Vec<f64>,
}

/// Solves for the manufactured right-hand side on the `n⁴` torus and
/// measures the recovery error.
pub fn manufactured_solve(m: &Manufactured, n: usize, spec: &WeightSpec, opts: &SolveOptions, exec: Exec) -> Result<(SolveOutcome, Option<RecoveryRow>)> {
    let mm = m.clone();
    let mut p = torus_problem(n, move |x| mm.rhs(x), spec, exec)?;
    let out = solve_ma(&mut p, opts)?;
    let row = out.psi.as_ref().map(|psi| {
        let d = &psi.domain;
        let exact = exec.map(d.len(), |i| m.value(&d.point(i)));
        let shift = (psi.values.iter().sum::<f64>() - exact.iter().sum::<f64>()) / d.len() as f64;
        let error = psi.values.iter().zip(&exact).map(|(u, v)| (u - shift - v).abs()).fold(0.0, f64::max);
        RecoveryRow {
            cells: n,
            spacing: 1.0 / n as f64,
            error,
            iterations: out.report.iterations,
            residual: out.report.final_residual,
            normalization: out.report.normalization.unwrap_or(0.0),
        }
    });
    Ok((out, row))
}

/// Recovery errors of [`Manufactured::standard`] on a sequence of grids.
pub fn manufactured_recovery(sizes: &[usize], accelerator: Accelerator, tol: f64, exec: Exec) -> Result<RecoveryReport> {
    let m = Manufactured::standard();
    let spec = WeightSpec::new(1.0, 1.0, 0.5, 0.01, EndSummand::None)?;
    let opts = SolveOptions { tol, max_iter: 200, accelerator, enforce_smallness: false, constant_samples: 2, seed: 0 };
    let mut rows = Vec::new();
    for &n in sizes {
        match manufactured_solve(&m, n, &spec, &opts, exec)? {
            (_, Some(row)) => rows.push(row),
            (out, None) => {
                return Err(out.error.unwrap_or(Error::NonConvergence { iterations: opts.max_iter, residual: f64::NAN }))
            }
        }
    }
    let ratios = rows.windows(2).map(|w| w[0].error / w[1].error).collect();
    Ok(RecoveryReport { solution: m, rows, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_vanishes_without_modes() {
        let m = Manufactured { modes: vec![] };
        assert_eq!(m.rhs(&[0.1, 0.2, 0.3, 0.4]), 0.0);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let m = Manufactured::standard();
        let x = [0.13, 0.41, 0.77, 0.29];
        let h = 1e-4;
        let hess = m.real_hessian(&x);
        for a in 0..4 {
            for b in 0..4 {
                let shift = |da: f64, db: f64| {
                    let mut y = x;
                    y[a] += da;
                    y[b] += db;
                    m.value(&y)
                };
                let fd = (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4.0 * h * h);
                assert!((fd - hess[a][b]).abs() < 1e-5, "{a}{b}: {fd} vs {}", hess[a][b]);
            }
        }
    }
}
