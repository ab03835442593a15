//! Jacobi-preconditioned BiCGSTAB for the discrete linearized operators.

use serde::{Deserialize, Serialize};

use super::discrete::SparseMatrix;
use crate::error::{Error, Result};
use crate::exec::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrylovOptions {
    /// Stop when `‖b − Ax‖ ≤ rel_tol·‖b‖` (max norm).
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Remove the mean of iterates; used when constants span the kernel.
    pub project_mean: bool,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions { rel_tol: 1e-12, max_iter: 5000, project_mean: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrylovStats {
    pub iterations: usize,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64], exec: Exec) -> f64 {
    exec.sum(a.len(), |i| a[i] * b[i])
}

fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn remove_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

/// Solves `A x = b` from `x = 0`. With `project_mean` it solves `PAx = Pb`
/// on mean-zero vectors, `P` removing the mean.
pub fn bicgstab(a: &SparseMatrix, b: &[f64], opts: KrylovOptions, exec: Exec) -> Result<(Vec<f64>, KrylovStats)> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::InvalidParameter(format!("rhs length {} does not match operator size {n}", b.len())));
    }
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|&d| if d != 0.0 { 1.0 / d } else { 1.0 }).collect();
    let precondition = |v: &[f64], out: &mut [f64]| {
        exec.fill(out, |i| inv_diag[i] * v[i]);
        if opts.project_mean {
            remove_mean(out);
        }
    };
    let apply = |v: &[f64], out: &mut [f64]| {
        a.apply(v, out, exec);
        if opts.project_mean {
            remove_mean(out);
        }
    };
    let mut b = b.to_vec();
    if opts.project_mean {
        remove_mean(&mut b);
    }
    let b = &b[..];
    let target = opts.rel_tol * sup(b);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    if sup(&r) <= target || sup(b) == 0.0 {
        return Ok((x, KrylovStats { iterations: 0, residual: sup(&r) }));
    }
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let (mut y, mut z, mut s, mut t) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for it in 1..=opts.max_iter {
        let rho_new = dot(&r_hat, &r, exec);
        if rho_new == 0.0 || omega == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        precondition(&p, &mut y);
        apply(&y, &mut v);
        let denom = dot(&r_hat, &v, exec);
        if denom == 0.0 {
            break;
        }
        alpha = rho / denom;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if sup(&s) <= target {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            return finish(a, b, x, it, opts, exec);
        }
        precondition(&s, &mut z);
        apply(&z, &mut t);
        let tt = dot(&t, &t, exec);
        omega = if tt > 0.0 { dot(&t, &s, exec) / tt } else { 0.0 };
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        if sup(&r) <= target {
            return finish(a, b, x, it, opts, exec);
        }
    }
    let mut ax = vec![0.0; n];
    apply(&x, &mut ax);
    let res = (0..n).map(|i| (b[i] - ax[i]).abs()).fold(0.0, f64::max);
    Err(Error::NonConvergence { iterations: opts.max_iter, residual: res })
}

fn finish(
    a: &SparseMatrix,
    b: &[f64],
    mut x: Vec<f64>,
    iterations: usize,
    opts: KrylovOptions,
    exec: Exec,
) -> Result<(Vec<f64>, KrylovStats)> {
    if opts.project_mean {
        remove_mean(&mut x);
    }
    let mut ax = vec![0.0; x.len()];
    a.apply(&x, &mut ax, exec);
    if opts.project_mean {
        remove_mean(&mut ax);
    }
    let residual = (0..x.len()).map(|i| (b[i] - ax[i]).abs()).fold(0.0, f64::max);
    Ok((x, KrylovStats { iterations, residual }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_system() {
        let n = 50;
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![(i as u32, 2.5)];
                if i > 0 {
                    r.insert(0, ((i - 1) as u32, -1.0));
                }
                if i + 1 < n {
                    r.push(((i + 1) as u32, -1.2));
                }
                r
            })
            .collect();
        let a = SparseMatrix::from_rows(rows);
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let (x, st) = bicgstab(&a, &b, KrylovOptions::default(), Exec::Sequential).unwrap();
        let mut ax = vec![0.0; n];
        a.apply(&x, &mut ax, Exec::Sequential);
        assert!(ax.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-11), "{st:?}");
    }
}
