//! `‖u‖_{L∞(A_R)} / (R^{−m/2}‖u‖_{L²(A¹_R)} + R²‖Δu‖_{L∞(A¹_R)})` on a flat end
//! `ℝ^m × T^{4−m}` with unit torus, `A_R = {R ≤ |x| ≤ 2R}` and
//! `A¹_R = {R/2 ≤ |x| ≤ 4R}` in the `ℝ^m` factor.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MoserReport {
    pub radius: f64,
    pub sup: f64,
    pub l2_term: f64,
    pub laplacian_term: f64,
    pub ratio: f64,
}

/// Sampling resolution: `base` nodes per axis of `[−4R, 4R]^m`, `fibre` per torus axis.
#[derive(Clone, Copy, Debug)]
pub struct MoserGrid {
    pub m: usize,
    pub base: usize,
    pub fibre: usize,
}

fn laplacian(u: &(dyn Fn(&[f64; 4]) -> f64 + Sync), x: &[f64; 4], h: f64) -> f64 {
    let c = u(x);
    (0..4)
        .map(|a| {
            let (mut p, mut q) = (*x, *x);
            p[a] += h;
            q[a] -= h;
            (u(&p) - 2.0 * c + u(&q)) / (h * h)
        })
        .sum()
}

pub fn moser_ratio(u: &(dyn Fn(&[f64; 4]) -> f64 + Sync), radius: f64, grid: MoserGrid, exec: Exec) -> Result<MoserReport> {
    let MoserGrid { m, base, fibre } = grid;
    if !(1..=4).contains(&m) || base < 2 || (m < 4 && fibre == 0) || !(radius > 0.0) {
        return Err(Error::InvalidParameter("Moser ratio needs 1 ≤ m ≤ 4, a grid and R > 0".into()));
    }
    let hb = 8.0 * radius / base as f64;
    let hf = if m < 4 { 1.0 / fibre as f64 } else { 1.0 };
    let counts: Vec<usize> = (0..4).map(|a| if a < m { base } else { fibre }).collect();
    let total: usize = counts.iter().product();
    let point = |mut i: usize| -> ([f64; 4], f64) {
        let mut x = [0.0; 4];
        for a in (0..4).rev() {
            let j = i % counts[a];
            i /= counts[a];
            x[a] = if a < m { -4.0 * radius + (j as f64 + 0.5) * hb } else { (j as f64 + 0.5) * hf };
        }
        let r = x[..m].iter().map(|v| v * v).sum::<f64>().sqrt();
        (x, r)
    };
    let step = 1e-3;
    let rows = exec.map(total, |i| {
        let (x, r) = point(i);
        if !(0.5 * radius..=4.0 * radius).contains(&r) {
            return (0.0, 0.0, 0.0);
        }
        let v = u(&x);
        let inner = if (radius..=2.0 * radius).contains(&r) { v.abs() } else { 0.0 };
        (inner, v * v, laplacian(u, &x, step).abs())
    });
    let cell = hb.powi(m as i32) * hf.powi(4 - m as i32);
    let sup = rows.iter().fold(0.0f64, |s, r| s.max(r.0));
    let l2 = (rows.iter().map(|r| r.1).sum::<f64>() * cell).sqrt();
    let lap = rows.iter().fold(0.0f64, |s, r| s.max(r.2));
    let l2_term = radius.powf(-(m as f64) / 2.0) * l2;
    let laplacian_term = radius * radius * lap;
    Ok(MoserReport { radius, sup, l2_term, laplacian_term, ratio: sup / (l2_term + laplacian_term) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_scale_invariant() {
        let g = MoserGrid { m: 1, base: 256, fibre: 3 };
        let a = moser_ratio(&|_| 1.0, 4.0, g, Exec::default()).unwrap();
        let b = moser_ratio(&|_| 1.0, 8.0, g, Exec::default()).unwrap();
        assert!(a.laplacian_term < 1e-6);
        assert!((a.ratio - b.ratio).abs() < 0.02 * a.ratio);
    }
}
