//! Discrete weighted sup and Hölder norms.

use serde::{Deserialize, Serialize};

use super::weight::WeightSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{GridDomain, ScalarField};

/// Record written for every norm or diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormReport {
    pub norm: String,
    pub spec: WeightSpec,
    pub domain: GridDomain,
    pub value: f64,
}

/// Neighbour of `idx` along `axis` shifted by `step`, or `None` off a non-periodic edge.
fn shift(d: &GridDomain, idx: [usize; 4], axis: usize, step: i64) -> Option<[usize; 4]> {
    let n = d.dims[axis] as i64;
    let j = idx[axis] as i64 + step;
    let mut out = idx;
    if d.periodic[axis] {
        out[axis] = j.rem_euclid(n) as usize;
    } else if (0..n).contains(&j) {
        out[axis] = j as usize;
    } else {
        return None;
    }
    Some(out)
}

/// Flat derivative tensor of order `k ≤ 2` at node `i` by central differences,
/// flattened; `None` if the stencil leaves the grid. Axes of length one are skipped.
fn derivative(u: &ScalarField, i: usize, k: usize) -> Option<Vec<f64>> {
    let d = &u.domain;
    let idx = d.index(i);
    let at = |j: [usize; 4]| u.values[d.linear(j)];
    let axes: Vec<usize> = (0..4).filter(|&a| d.dims[a] > 1).collect();
    match k {
        0 => Some(vec![u.values[i]]),
        1 => axes
            .iter()
            .map(|&a| {
                let (p, m) = (shift(d, idx, a, 1)?, shift(d, idx, a, -1)?);
                Some((at(p) - at(m)) / (2.0 * d.spacing[a]))
            })
            .collect(),
        2 => {
            let mut out = Vec::with_capacity(axes.len() * axes.len());
            for &a in &axes {
                for &b in &axes {
                    let v = if a == b {
                        let (p, m) = (shift(d, idx, a, 1)?, shift(d, idx, a, -1)?);
                        (at(p) - 2.0 * u.values[i] + at(m)) / (d.spacing[a] * d.spacing[a])
                    } else {
                        let pp = shift(d, shift(d, idx, a, 1)?, b, 1)?;
                        let pm = shift(d, shift(d, idx, a, 1)?, b, -1)?;
                        let mp = shift(d, shift(d, idx, a, -1)?, b, 1)?;
                        let mm = shift(d, shift(d, idx, a, -1)?, b, -1)?;
                        (at(pp) - at(pm) - at(mp) + at(mm)) / (4.0 * d.spacing[a] * d.spacing[b])
                    };
                    out.push(v);
                }
            }
            Some(out)
        }
        _ => None,
    }
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `Σ_{i≤k} sup|w_i ∇^i u|`, where `r_eps` gives `r_ε` at a point. Derivatives
/// are central differences in the flat coordinates, taken at nodes whose
/// stencil stays on the grid.
pub fn weighted_norm<W>(u: &ScalarField, spec: &WeightSpec, k: usize, r_eps: W, exec: Exec) -> Result<f64>
where
    W: Fn(&[f64; 4]) -> f64 + Sync,
{
    let d = &u.domain;
    let weights: Vec<f64> = exec.map(d.len(), |i| r_eps(&d.point(i)));
    weighted_norm_at(u, spec, k, &weights, exec)
}

/// [`weighted_norm`] with `r_ε` given per node.
pub fn weighted_norm_at(u: &ScalarField, spec: &WeightSpec, k: usize, r_eps: &[f64], exec: Exec) -> Result<f64> {
    if k > 2 {
        return Err(Error::InvalidParameter(format!("derivative order {k} exceeds 2")));
    }
    let d = &u.domain;
    if r_eps.len() != d.len() {
        return Err(Error::InvalidParameter("one weight per node expected".into()));
    }
    let mut total = 0.0;
    for order in 0..=k {
        total += exec.max(d.len(), |i| match derivative(u, i, order) {
            Some(t) => spec.weight(order as f64, r_eps[i]) * euclid(&t),
            None => 0.0,
        });
    }
    Ok(total)
}

/// [`weighted_norm`] plus the seminorm `[w_{k+α} ∇^k u]_α`, sampled on
/// nearest-neighbour pairs with the smaller of the two weights.
pub fn weighted_holder_norm<W>(u: &ScalarField, spec: &WeightSpec, k: usize, r_eps: W, exec: Exec) -> Result<f64>
where
    W: Fn(&[f64; 4]) -> f64 + Sync,
{
    let d = &u.domain;
    let weights: Vec<f64> = exec.map(d.len(), |i| r_eps(&d.point(i)));
    weighted_holder_norm_at(u, spec, k, &weights, exec)
}

/// [`weighted_holder_norm`] with `r_ε` given per node.
pub fn weighted_holder_norm_at(u: &ScalarField, spec: &WeightSpec, k: usize, weights: &[f64], exec: Exec) -> Result<f64> {
    let total = weighted_norm_at(u, spec, k, weights, exec)?;
    let d = &u.domain;
    let top: Vec<Option<Vec<f64>>> = exec.map(d.len(), |i| derivative(u, i, k));
    let holder = exec.max(d.len(), |i| {
        let Some(a) = &top[i] else { return 0.0 };
        let idx = d.index(i);
        let mut best: f64 = 0.0;
        for axis in (0..4).filter(|&x| d.dims[x] > 1) {
            let Some(j) = shift(d, idx, axis, 1) else { continue };
            let j = d.linear(j);
            let Some(b) = &top[j] else { continue };
            let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let w = spec.weight(k as f64 + spec.alpha, weights[i].min(weights[j]));
            best = best.max(w * euclid(&diff) / d.spacing[axis].powf(spec.alpha));
        }
        best
    });
    Ok(total + holder)
}

/// Weighted sup norm `sup|w_0 u|` only.
pub fn weighted_sup<W>(u: &ScalarField, spec: &WeightSpec, r_eps: W, exec: Exec) -> f64
where
    W: Fn(&[f64; 4]) -> f64 + Sync,
{
    let d = &u.domain;
    exec.max(d.len(), |i| spec.weight(0.0, r_eps(&d.point(i))) * u.values[i].abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighted::weight::EndSummand;

    fn spec() -> WeightSpec {
        WeightSpec::new(1.0, 1.0, 0.5, 0.01, EndSummand::Affine).unwrap()
    }

    #[test]
    fn central_differences_are_exact_on_quadratics() {
        let d = GridDomain::new([6, 5, 1, 1], [0.0; 4], [0.1, 0.2, 1.0, 1.0], [false; 4]).unwrap();
        let u = ScalarField::from_fn(d, |x| x[0] * x[0] + 3.0 * x[0] * x[1], Exec::default());
        let i = u.domain.linear([2, 2, 0, 0]);
        let h = derivative(&u, i, 2).unwrap();
        assert!((h[0] - 2.0).abs() < 1e-10 && (h[1] - 3.0).abs() < 1e-10 && h[3].abs() < 1e-10);
        assert!(derivative(&u, 0, 1).is_none());
    }

    #[test]
    fn homogeneous_of_degree_one() {
        let d = GridDomain::new([8, 4, 4, 4], [1.0, 0.0, 0.0, 0.0], [0.25, 0.25, 0.25, 0.25], [false, true, true, true])
            .unwrap();
        let u = ScalarField::from_fn(d, |x| (x[1] * 6.0).sin() / x[0], Exec::default());
        let r = |x: &[f64; 4]| x[0];
        let n1 = weighted_holder_norm(&u, &spec(), 2, r, Exec::default()).unwrap();
        let n2 = weighted_holder_norm(&u.map(|v| 2.0 * v), &spec(), 2, r, Exec::default()).unwrap();
        assert!((n2 - 2.0 * n1).abs() < 1e-12 * n1);
    }
}
