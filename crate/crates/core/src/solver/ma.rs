//! The discrete complex Monge–Ampère equation
//! `log det(H + ∂∂̄ψ) − log det H = f` on a grid, with `H` the background form
//! at each node and `∂∂̄` the second-order stencil.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::discrete::{real_coefficients, EndCondition, SparseMatrix, Stencil};
use super::fixed_point::FixedPointProblem;
use super::linear::{bicgstab, KrylovOptions, KrylovStats};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{GridDomain, ScalarField};
use crate::kahler::HermitianForm;
use crate::fit::linear_fit;
use crate::weighted::{weighted_norm_at, EndSummand, WeightSpec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accelerator {
    /// Frozen linearization at `ψ = 0`.
    #[default]
    None,
    /// Linearization re-assembled at every iterate.
    Newton,
}

/// Grid data of one Monge–Ampère problem.
#[derive(Clone, Debug)]
pub struct MaProblem {
    pub stencil: Stencil,
    pub background: Vec<HermitianForm>,
    pub f: Vec<f64>,
    pub spec: WeightSpec,
    /// `r_ε` at each node.
    pub r_eps: Vec<f64>,
    pub accelerator: Accelerator,
    pub krylov: KrylovOptions,
    pub exec: Exec,
    /// Start of the flat end region on axis 0; with an affine end summand the
    /// norm on `E` splits off `λt + η` there.
    pub end_start: Option<f64>,
    log_det: Vec<f64>,
    frozen: SparseMatrix,
}

impl MaProblem {
    pub fn new(
        stencil: Stencil,
        background: Vec<HermitianForm>,
        f: Vec<f64>,
        spec: WeightSpec,
        r_eps: Vec<f64>,
        exec: Exec,
    ) -> Result<Self> {
        let n = stencil.len();
        if background.len() != n || f.len() != n || r_eps.len() != n {
            return Err(Error::InvalidParameter("background, f and weights need one value per node".into()));
        }
        for (i, h) in background.iter().enumerate() {
            if !h.is_positive() {
                return Err(Error::NonPositiveForm { locus: stencil.domain.point(i), min_eigenvalue: h.eigenvalues()[0] });
            }
        }
        let log_det = background.iter().map(|h| h.det().ln()).collect();
        let coeffs = exec.try_map(n, |i| Ok::<_, Error>(real_coefficients(&background[i].inverse()?)))?;
        let frozen = stencil.assemble(&coeffs, exec);
        let closed = stencil.domain.periodic.iter().all(|&p| p);
        let krylov = KrylovOptions { rel_tol: 1e-13, max_iter: 20_000, project_mean: closed };
        Ok(MaProblem { stencil, background, f, spec, r_eps, accelerator: Accelerator::None, krylov, exec, end_start: None, log_det, frozen })
    }

    pub fn domain(&self) -> &GridDomain {
        &self.stencil.domain
    }

    pub fn len(&self) -> usize {
        self.stencil.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether every axis is periodic, so constants span the kernel and the
    /// equation is solved up to the additive constant `log(vol ratio)`.
    pub fn closed(&self) -> bool {
        self.krylov.project_mean
    }

    /// `H_i + ∂∂̄ψ` at node `i`.
    pub fn solved_form(&self, psi: &[f64], i: usize) -> HermitianForm {
        self.background[i].add(&self.stencil.complex_hessian(psi, i))
    }

    /// Pointwise `log det(H + ∂∂̄ψ) − log det H − f`; on closed domains the
    /// mean is removed.
    pub fn ma_residual(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.exec.try_map(self.len(), |i| {
            let h = self.solved_form(psi, i);
            if !h.is_positive() {
                return Err(Error::PositivityLost { locus: self.domain().point(i) });
            }
            Ok(h.det().ln() - self.log_det[i] - self.f[i])
        })?;
        if self.closed() {
            remove_mean(&mut out);
        }
        Ok(out)
    }

    /// Mean of the raw residual; the normalization constant on closed domains.
    pub fn residual_mean(&self, psi: &[f64]) -> f64 {
        let s = self.exec.sum(self.len(), |i| self.solved_form(psi, i).det().ln() - self.log_det[i] - self.f[i]);
        s / self.len() as f64
    }

    /// Smallest eigenvalue of `H + ∂∂̄ψ` over the grid and where it occurs.
    pub fn min_eigenvalue(&self, psi: &[f64]) -> (f64, [f64; 4]) {
        let vals = self.exec.map(self.len(), |i| self.solved_form(psi, i).eigenvalues()[0]);
        let (i, v) = vals.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &v)| if v < b.1 { (i, v) } else { b });
        (v, self.domain().point(i))
    }

    /// `tr(H⁻¹∂∂̄·)`, the linearization at zero.
    pub fn linearization(&self) -> &SparseMatrix {
        &self.frozen
    }

    /// `tr((H + ∂∂̄ψ)⁻¹∂∂̄·)`, the linearization at `ψ`.
    pub fn linearization_at(&self, psi: &[f64]) -> Result<SparseMatrix> {
        let coeffs = self.exec.try_map(self.len(), |i| {
            let h = self.solved_form(psi, i);
            if !h.is_positive() {
                return Err(Error::PositivityLost { locus: self.domain().point(i) });
            }
            Ok(real_coefficients(&h.inverse()?))
        })?;
        Ok(self.stencil.assemble(&coeffs, self.exec))
    }

    /// Solves `A δ = rhs`; on closed domains the rhs mean is dropped.
    pub fn solve_linear(&self, a: &SparseMatrix, rhs: &[f64]) -> Result<(Vec<f64>, KrylovStats)> {
        let mut b = rhs.to_vec();
        if self.closed() {
            remove_mean(&mut b);
        }
        bicgstab(a, &b, self.krylov, self.exec)
    }

    pub fn field(&self, values: Vec<f64>) -> ScalarField {
        ScalarField::from_values(self.domain().clone(), values).expect("one value per node")
    }

    /// Splits `ψ = χ(t)(λt + η) + v`, with `λ, η` fitted to the fibre means on
    /// the end and `χ` a smooth step over the half unit before it.
    pub fn split_end(&self, psi: &[f64]) -> Option<(f64, f64, Vec<f64>)> {
        let t0 = self.end_start?;
        if self.closed() || self.spec.summand != EndSummand::Affine {
            return None;
        }
        let d = self.domain();
        let t1 = t0 + 0.5;
        let means = fibre_means(d, psi);
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            (0..d.dims[0]).map(|i| (d.coord(0, i), means[i])).filter(|(t, _)| *t >= t1).unzip();
        let (eta, lambda, _) = linear_fit(&xs, &ys).ok()?;
        let m = d.fiber_len();
        let v = (0..psi.len())
            .map(|i| {
                let t = d.coord(0, i / m);
                let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
                let chi = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
                psi[i] - chi * (lambda * t + eta)
            })
            .collect();
        Some((lambda, eta, v))
    }

    /// `‖ψ‖_E`: weighted `C²` sup norm, plus `|λ| + |η|` for an affine end summand.
    pub fn norm_e(&self, psi: &[f64]) -> f64 {
        let (head, v) = match self.split_end(psi) {
            Some((l, e, v)) => (l.abs() + e.abs(), v),
            None => (0.0, psi.to_vec()),
        };
        head + weighted_norm_at(&self.field(v), &self.spec, 2, &self.r_eps, self.exec).unwrap_or(f64::NAN)
    }

    /// `‖ρ‖_F`: weighted sup norm with the target weights.
    pub fn norm_f(&self, rho: &[f64]) -> f64 {
        weighted_norm_at(&self.field(rho.to_vec()), &self.spec.target(), 0, &self.r_eps, self.exec).unwrap_or(f64::NAN)
    }

    /// Validity radius: `ψ` with `‖ψ‖_E ≤ r₀` keeps `H + ∂∂̄ψ` positive.
    pub fn validity_radius(&self) -> f64 {
        self.exec
            .map(self.len(), |i| self.background[i].eigenvalues()[0] * self.spec.weight(2.0, self.r_eps[i]))
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

fn remove_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

impl FixedPointProblem for MaProblem {
    type State = Vec<f64>;

    fn zero(&self) -> Vec<f64> {
        vec![0.0; self.len()]
    }

    fn residual(&self, x: &Vec<f64>) -> Result<Vec<f64>> {
        self.ma_residual(x)
    }

    fn correct(&self, x: &Vec<f64>, residual: &Vec<f64>) -> Result<Vec<f64>> {
        let delta = match self.accelerator {
            Accelerator::None => self.solve_linear(&self.frozen, residual)?.0,
            Accelerator::Newton => self.solve_linear(&self.linearization_at(x)?, residual)?.0,
        };
        let mut out: Vec<f64> = x.iter().zip(&delta).map(|(a, d)| a - d).collect();
        if self.closed() {
            remove_mean(&mut out);
        }
        Ok(out)
    }

    fn norm(&self, x: &Vec<f64>) -> f64 {
        self.norm_e(x)
    }

    fn residual_norm(&self, r: &Vec<f64>) -> f64 {
        self.norm_f(r)
    }

    fn stop_norm(&self, r: &Vec<f64>) -> f64 {
        sup(r)
    }

    fn distance(&self, x: &Vec<f64>, y: &Vec<f64>) -> f64 {
        let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.norm_e(&d)
    }
}

/// Empirical constants of the fixed-point scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantEstimate {
    /// `max ‖Q(ψ₁) − Q(ψ₂)‖_F / (‖ψ₁ − ψ₂‖_E (‖ψ₁‖_E + ‖ψ₂‖_E))`.
    pub q: f64,
    /// `max ‖u‖_E / ‖Lu‖_F` over random smooth `u` and over `u = L⁻¹g` for
    /// `g = Φ(0)` and random rough `g`.
    pub c: f64,
    pub r0: f64,
    pub samples: usize,
}

/// Smooth random field compatible with the boundary treatment, scaled so that
/// `|∂∂̄u|` stays below `amplitude`.
fn random_field(p: &MaProblem, rng: &mut ChaCha8Rng, amplitude: f64) -> Vec<f64> {
    use std::f64::consts::PI;
    let d = p.domain();
    let modes: Vec<([i32; 4], f64, f64)> = (0..3)
        .map(|_| {
            let mut k = [0i32; 4];
            while k.iter().all(|&v| v == 0) {
                for (a, v) in k.iter_mut().enumerate() {
                    *v = if d.periodic[a] { rng.gen_range(-2..=2) } else { rng.gen_range(0..3) };
                }
            }
            (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let even = !d.periodic[0] && p.stencil.ends.lower == EndCondition::Mirror;
    let values: Vec<f64> = p.exec.map(d.len(), |i| {
        let x = d.point(i);
        modes
            .iter()
            .map(|(k, c, phase)| {
                let mut arg = 0.0;
                let mut profile = 1.0;
                for a in 0..4 {
                    if d.periodic[a] {
                        arg += 2.0 * PI * k[a] as f64 * (x[a] - d.lower[a]) / d.period(a);
                    } else if a == 0 && even {
                        // Even in t, vanishing at the far face.
                        profile *= ((2 * k[a] + 1) as f64 * PI * x[a] / (2.0 * d.period(a))).cos();
                    } else {
                        profile *= ((k[a] + 1) as f64 * PI * (x[a] - d.lower[a]) / d.period(a)).sin();
                    }
                }
                // Only the cosine is even under the point reflection.
                let phase = if even { 0.0 } else { *phase };
                c * profile * (arg + phase).cos()
            })
            .sum()
    });
    let scale = p.exec.max(d.len(), |i| p.stencil.complex_hessian(&values, i).frobenius());
    values.iter().map(|v| v * amplitude / scale).collect()
}

/// Samples the constants `q`, `c` on random smooth fields.
pub fn estimate_constants(p: &MaProblem, samples: usize, seed: u64) -> Result<ConstantEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = 0.05 * p.background.iter().map(|h| h.eigenvalues()[0]).fold(f64::INFINITY, f64::min);
    let phi0 = p.ma_residual(&vec![0.0; p.len()])?;
    let mut lu = vec![0.0; p.len()];
    let quad = |psi: &[f64], out: &mut Vec<f64>| -> Result<Vec<f64>> {
        let r = p.ma_residual(psi)?;
        p.frozen.apply(psi, out, p.exec);
        Ok((0..psi.len()).map(|i| r[i] - phi0[i] - out[i]).collect())
    };
    let (mut q, mut c): (f64, f64) = (0.0, 0.0);
    // Inverse direction: u = L⁻¹g for g = Φ(0) and random rough g.
    let mut sources = vec![phi0.clone()];
    for _ in 0..samples {
        sources.push((0..p.len()).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }
    for g in sources {
        if sup(&g) == 0.0 {
            continue;
        }
        let (u, _) = p.solve_linear(&p.frozen, &g)?;
        p.frozen.apply(&u, &mut lu, p.exec);
        if p.closed() {
            remove_mean(&mut lu);
        }
        c = c.max(p.norm_e(&u) / p.norm_f(&lu));
    }
    for _ in 0..samples {
        let u = random_field(p, &mut rng, amp);
        p.frozen.apply(&u, &mut lu, p.exec);
        if p.closed() {
            remove_mean(&mut lu);
        }
        c = c.max(p.norm_e(&u) / p.norm_f(&lu));
        let v = random_field(p, &mut rng, amp);
        let qu = quad(&u, &mut lu)?;
        let qv = quad(&v, &mut lu)?;
        let dq: Vec<f64> = qu.iter().zip(&qv).map(|(a, b)| a - b).collect();
        let duv: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a - b).collect();
        q = q.max(p.norm_f(&dq) / (p.norm_e(&duv) * (p.norm_e(&u) + p.norm_e(&v))));
    }
    Ok(ConstantEstimate { q, c, r0: p.validity_radius(), samples })
}

/// Solution of a linear problem `Δu = g` with `Δ = −2 tr(H⁻¹∂∂̄)`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub u: ScalarField,
    /// `d/dt` of the fibre mean at the upper face of axis 0.
    pub lambda_upper: Option<f64>,
    /// Same at the lower face, for Dirichlet lower faces.
    pub lambda_lower: Option<f64>,
    /// `−Σ g·cell / vol(fibre)`, which equals `λ_upper − λ_lower` for flat ends.
    pub flux: Option<f64>,
    pub stats: KrylovStats,
}

/// Solves `Δu = rhs` for the background forms on the stencil's grid.
pub fn linear_solve(stencil: &Stencil, background: &[HermitianForm], rhs: &[f64], exec: Exec) -> Result<LinearSolution> {
    let d = &stencil.domain;
    let n = d.len();
    if background.len() != n || rhs.len() != n {
        return Err(Error::InvalidParameter("background and rhs need one value per node".into()));
    }
    let closed = d.periodic.iter().all(|&p| p);
    if closed {
        // Solvability against the volume form `det H`.
        let vol: f64 = background.iter().map(|h| h.det()).sum();
        let mean = background.iter().zip(rhs).map(|(h, g)| h.det() * g).sum::<f64>() / vol;
        if mean.abs() > 1e-10 * (sup(rhs) + f64::MIN_POSITIVE) {
            return Err(Error::IncompatibleRhs { mean });
        }
    }
    let coeffs = exec.try_map(n, |i| {
        let mut a = real_coefficients(&background[i].inverse()?);
        a.iter_mut().flatten().for_each(|v| *v *= -2.0);
        Ok::<_, Error>(a)
    })?;
    let m = stencil.assemble(&coeffs, exec);
    let opts = KrylovOptions { rel_tol: 1e-13, max_iter: 20_000, project_mean: closed };
    let (u, stats) = bicgstab(&m, rhs, opts, exec)?;
    let (mut lambda_upper, mut lambda_lower, mut flux) = (None, None, None);
    if !d.periodic[0] && d.dims[0] >= 2 {
        let means = fibre_means(d, &u);
        let n0 = d.dims[0];
        let h = d.spacing[0];
        // Ghost values of the fibre mean are odd across Dirichlet faces.
        lambda_upper = Some((-means[n0 - 1] - means[n0 - 1]) / h);
        if stencil.ends.lower == EndCondition::Dirichlet {
            lambda_lower = Some((means[0] + means[0]) / h);
        }
        let fibre_volume = d.cell_volume() / h * d.fiber_len() as f64;
        flux = Some(-rhs.iter().sum::<f64>() * d.cell_volume() / fibre_volume);
    }
    Ok(LinearSolution { u: ScalarField::from_values(d.clone(), u)?, lambda_upper, lambda_lower, flux, stats })
}

/// Mean over each slice of constant axis-0 index.
pub fn fibre_means(d: &GridDomain, u: &[f64]) -> Vec<f64> {
    let m = d.fiber_len();
    (0..d.dims[0]).map(|i| u[i * m..(i + 1) * m].iter().sum::<f64>() / m as f64).collect()
}
