//! Splitting a field into its torus-fibre mean and the oscillating rest.

use crate::error::{Error, Result};
use crate::grid::ScalarField;

/// `u = Π₀u + Π_⊥u`, with `Π₀u` the mean along the periodic axes.
#[derive(Clone, Debug)]
pub struct DecomposedField {
    pub mean: ScalarField,
    pub oscillating: ScalarField,
}

/// Means over the periodic axes, indexed by the position in the non-periodic axes.
fn fibre_means(u: &ScalarField) -> Vec<f64> {
    let d = &u.domain;
    let base: Vec<usize> = (0..4).filter(|&a| !d.periodic[a]).collect();
    let base_len: usize = base.iter().map(|&a| d.dims[a]).product();
    let mut sums = vec![0.0; base_len];
    for (i, v) in u.values.iter().enumerate() {
        sums[base_slot(d, &base, i)] += v;
    }
    let n = d.fiber_len() as f64;
    sums.iter().map(|s| s / n).collect()
}

fn base_slot(d: &crate::grid::GridDomain, base: &[usize], i: usize) -> usize {
    let idx = d.index(i);
    base.iter().fold(0, |acc, &a| acc * d.dims[a] + idx[a])
}

pub fn torus_projection(u: &ScalarField) -> Result<DecomposedField> {
    let d = &u.domain;
    if !d.periodic.iter().any(|&p| p) {
        return Err(Error::InvalidParameter("domain has no torus fibre".into()));
    }
    let means = fibre_means(u);
    let base: Vec<usize> = (0..4).filter(|&a| !d.periodic[a]).collect();
    let mean: Vec<f64> = (0..d.len()).map(|i| means[base_slot(d, &base, i)]).collect();
    let oscillating: Vec<f64> = u.values.iter().zip(&mean).map(|(v, m)| v - m).collect();
    Ok(DecomposedField {
        mean: ScalarField::from_values(d.clone(), mean)?,
        oscillating: ScalarField::from_values(d.clone(), oscillating)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::grid::GridDomain;
    use std::f64::consts::PI;

    fn cylinder() -> GridDomain {
        GridDomain::new([6, 8, 8, 8], [-1.0, 0.0, 0.0, 0.0], [1.0 / 3.0, 0.125, 0.125, 0.125], [false, true, true, true])
            .unwrap()
    }

    #[test]
    fn fibre_constant_field_has_no_oscillation() {
        let u = ScalarField::from_fn(cylinder(), |x| x[0] * x[0], Exec::default());
        assert!(torus_projection(&u).unwrap().oscillating.sup_norm() < 1e-13);
    }

    #[test]
    fn cosine_has_zero_mean() {
        let u = ScalarField::from_fn(cylinder(), |x| (2.0 * PI * x[2]).cos(), Exec::default());
        assert!(torus_projection(&u).unwrap().mean.sup_norm() < 1e-15);
    }
}
