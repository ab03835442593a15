//! Problem builders, the full solve with its report, and end-expansion fits.

use serde::{Deserialize, Serialize};

use super::discrete::{Ends, Stencil};
use super::fixed_point::{banach_fixed_point, FixedPointConfig, FixedPointProblem, SmallnessCheck};
use super::ma::{estimate_constants, fibre_means, Accelerator, ConstantEstimate, MaProblem};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fit::{linear_fit, loglog_slope, DecayFit};
use crate::gluing::AlhAssembly;
use crate::grid::{GridDomain, ScalarField};
use crate::kahler::HermitianForm;
use crate::weighted::{weighted_holder_norm_at, weighted_norm_at, NormReport, WeightSpec};

/// Symmetry tag of grids reduced by the point reflection `−1`.
pub const PM_REDUCED: &str = "pm-reduced";

/// Mirror-reduced grid `[0, L] × T³` for `n_t` cells on `[−L, L]`.
pub fn alh_domain(half_length: f64, grid: [usize; 4]) -> Result<GridDomain> {
    let [nt, nx, ny, nz] = grid;
    if nt % 2 != 0 || half_length <= 0.0 {
        return Err(Error::InvalidParameter(format!("need an even t-count and L > 0, got {nt} and {half_length}")));
    }
    let mut d = GridDomain::new(
        [nt / 2, nx, ny, nz],
        [0.0; 4],
        [2.0 * half_length / nt as f64, 1.0 / nx as f64, 1.0 / ny as f64, 1.0 / nz as f64],
        [false, true, true, true],
    )?;
    d.symmetry.push(PM_REDUCED.into());
    Ok(d)
}

/// The Monge–Ampère problem of an `X̂₁` assembly on the mirror-reduced grid.
pub fn alh_problem(assembly: &AlhAssembly, spec: &WeightSpec, half_length: f64, grid: [usize; 4], exec: Exec) -> Result<MaProblem> {
    if half_length < 4.0 {
        return Err(Error::InvalidParameter(format!("truncation length {half_length} is below 4")));
    }
    if (spec.epsilon - assembly.eps).abs() > 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "weight ε = {} differs from assembly ε = {}",
            spec.epsilon, assembly.eps
        )));
    }
    let d = alh_domain(half_length, grid)?;
    let background = exec.try_map(d.len(), |i| assembly.form(&d.point(i)))?;
    let f = exec.map(d.len(), |i| -(4.0 * background[i].det()).ln());
    let w = spec.weight_function();
    let r_eps = exec.map(d.len(), |i| w.on_assembly(assembly, &d.point(i)));
    let mut p = MaProblem::new(Stencil::new(d, Ends::MIRROR)?, background, f, *spec, r_eps, exec)?;
    p.end_start = Some(assembly.cutoff.outer());
    Ok(p)
}

/// Flat `T⁴` problem with `n` cells per side and right-hand side `f`.
pub fn torus_problem(n: usize, f: impl Fn(&[f64; 4]) -> f64 + Sync, spec: &WeightSpec, exec: Exec) -> Result<MaProblem> {
    let d = GridDomain::torus(n);
    let fv = exec.map(d.len(), |i| f(&d.point(i)));
    let len = d.len();
    MaProblem::new(Stencil::new(d, Ends::DIRICHLET)?, vec![HermitianForm::flat(); len], fv, *spec, vec![1.0; len], exec)
}

/// Affine part `λt + η` of the fibre mean on one end, and the decay of the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndFit {
    /// Fibre means are fitted on `t ≥ fit_from`.
    pub fit_from: f64,
    pub lambda: f64,
    pub eta: f64,
    /// Power law of `sup_fibre |ψ − λt − η|` against `t` on the decay window.
    pub decay: Option<DecayFit>,
    /// Rate `κ` of the fit `sup_fibre |ψ − λt − η| ≈ C e^{−κt}`.
    pub exponential_rate: Option<f64>,
    pub decay_window: [f64; 2],
}

/// Fits the end expansion of `u` on the upper end of axis 0.
pub fn end_fit(u: &ScalarField, fit_from: f64, decay_window: [f64; 2]) -> Result<EndFit> {
    let d = &u.domain;
    let means = fibre_means(d, &u.values);
    let ts: Vec<f64> = (0..d.dims[0]).map(|i| d.coord(0, i)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = ts.iter().zip(&means).filter(|(t, _)| **t >= fit_from).map(|(t, m)| (*t, *m)).unzip();
    let (eta, lambda, _) = linear_fit(&xs, &ys)?;
    let m = d.fiber_len();
    let mut samples = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        if t < decay_window[0] || t > decay_window[1] {
            continue;
        }
        let v = u.values[i * m..(i + 1) * m].iter().map(|x| (x - lambda * t - eta).abs()).fold(0.0, f64::max);
        if v > 0.0 {
            samples.push((t, v));
        }
    }
    let (decay, exponential_rate) = if samples.len() >= 4 {
        let (t, lv): (Vec<f64>, Vec<f64>) = samples.iter().map(|(t, v)| (*t, v.ln())).unzip();
        (loglog_slope(&samples).ok(), linear_fit(&t, &lv).ok().map(|(_, b, _)| -b))
    } else {
        (None, None)
    };
    Ok(EndFit { fit_from, lambda, eta, decay, exponential_rate, decay_window })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub accelerator: Accelerator,
    /// Refuse to iterate when the smallness hypothesis fails.
    pub enforce_smallness: bool,
    pub constant_samples: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-10, max_iter: 100, accelerator: Accelerator::None, enforce_smallness: true, constant_samples: 8, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub grid: GridDomain,
    pub spec: WeightSpec,
    pub accelerator: Accelerator,
    pub constants: ConstantEstimate,
    pub fixed_point: FixedPointConfig,
    pub smallness: SmallnessCheck,
    pub converged: bool,
    /// Set when the iteration did not run or did not finish.
    pub diagnosis: Option<String>,
    pub iterations: usize,
    /// `sup|Φ(ψ_n)|` per iterate.
    pub residual_history: Vec<f64>,
    pub contraction_history: Vec<f64>,
    pub contraction_bound: f64,
    /// First iterate norm above the ball radius, when hypotheses were not enforced.
    pub left_ball: Option<f64>,
    pub final_residual: f64,
    pub weighted_norms: Vec<NormReport>,
    pub min_eigenvalue: f64,
    pub min_eigenvalue_locus: [f64; 4],
    pub ends: Vec<EndFit>,
    /// Additive constant of the equation on closed domains.
    pub normalization: Option<f64>,
}

/// Result of [`solve_ma`]: the report is always produced, the field only on
/// convergence.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub psi: Option<ScalarField>,
    pub report: SolveReport,
    pub error: Option<Error>,
}

/// Estimates the constants, checks smallness and runs the fixed-point
/// iteration on `problem`.
pub fn solve_ma(problem: &mut MaProblem, opts: &SolveOptions) -> Result<SolveOutcome> {
    problem.accelerator = opts.accelerator;
    let constants = estimate_constants(problem, opts.constant_samples, opts.seed)?;
    let cfg = FixedPointConfig::new(constants.q, constants.c, constants.r0, opts.tol, opts.max_iter)?;
    let phi0 = problem.residual(&problem.zero())?;
    let smallness = super::fixed_point::check_smallness(problem.residual_norm(&phi0), &cfg);
    let mut report = SolveReport {
        grid: problem.domain().clone(),
        spec: problem.spec,
        accelerator: opts.accelerator,
        constants,
        fixed_point: cfg,
        smallness,
        converged: false,
        diagnosis: None,
        iterations: 0,
        residual_history: Vec::new(),
        contraction_history: Vec::new(),
        contraction_bound: cfg.contraction_bound(),
        left_ball: None,
        final_residual: f64::NAN,
        weighted_norms: Vec::new(),
        min_eigenvalue: f64::NAN,
        min_eigenvalue_locus: [f64::NAN; 4],
        ends: Vec::new(),
        normalization: None,
    };
    let run = banach_fixed_point(problem, problem.zero(), &cfg, opts.enforce_smallness);
    let (psi, fp) = match run {
        Ok(v) => v,
        Err(e) => {
            report.diagnosis = Some(e.to_string());
            return Ok(SolveOutcome { psi: None, report, error: Some(e) });
        }
    };
    report.converged = true;
    report.iterations = fp.iterations;
    report.left_ball = fp.left_ball;
    report.final_residual = *fp.residual_history.last().unwrap_or(&f64::NAN);
    report.residual_history = fp.residual_history;
    report.contraction_history = fp.contraction_history;
    let (lam, locus) = problem.min_eigenvalue(&psi);
    report.min_eigenvalue = lam;
    report.min_eigenvalue_locus = locus;
    let field = problem.field(psi);
    let exec = problem.exec;
    for (name, spec, k, holder) in [
        ("C0", problem.spec, 0, false),
        ("C2", problem.spec, 2, false),
        ("C2,alpha", problem.spec, 2, true),
    ] {
        let value = if holder {
            weighted_holder_norm_at(&field, &spec, k, &problem.r_eps, exec)?
        } else {
            weighted_norm_at(&field, &spec, k, &problem.r_eps, exec)?
        };
        report.weighted_norms.push(NormReport { norm: name.into(), spec, domain: field.domain.clone(), value });
    }
    if problem.closed() {
        report.normalization = Some(problem.residual_mean(&field.values));
    } else {
        let top = field.domain.period(0) + field.domain.lower[0];
        let from = 1.0f64.max(2.0 * problem.spec.epsilon.sqrt());
        report.ends.push(end_fit(&field, from, [from, top - 1.0])?);
    }
    Ok(SolveOutcome { psi: Some(field), report, error: None })
}
