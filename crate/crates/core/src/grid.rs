//! Cell-centered product grids `[−L, L]^m × T^{4−m}` and fields on them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Product grid in four real coordinates. Axis 0 varies slowest.
///
/// Nodes sit at `lower[a] + (i + ½)·spacing[a]`. Periodic axes wrap with
/// period `dims[a]·spacing[a]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDomain {
    pub dims: [usize; 4],
    pub lower: [f64; 4],
    pub spacing: [f64; 4],
    pub periodic: [bool; 4],
    /// Names of symmetries the stored data is reduced by or invariant under.
    #[serde(default)]
    pub symmetry: Vec<String>,
}

impl GridDomain {
    pub fn new(dims: [usize; 4], lower: [f64; 4], spacing: [f64; 4], periodic: [bool; 4]) -> Result<Self> {
        if dims.iter().any(|&d| d == 0) || spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(Error::InvalidParameter("grid needs positive sizes and spacings".into()));
        }
        Ok(GridDomain { dims, lower, spacing, periodic, symmetry: Vec::new() })
    }

    /// Unit flat torus `T⁴` with `n` cells per side.
    pub fn torus(n: usize) -> Self {
        let h = 1.0 / n as f64;
        GridDomain {
            dims: [n; 4],
            lower: [0.0; 4],
            spacing: [h; 4],
            periodic: [true; 4],
            symmetry: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn period(&self, axis: usize) -> f64 {
        self.dims[axis] as f64 * self.spacing[axis]
    }

    pub fn index(&self, mut i: usize) -> [usize; 4] {
        let mut idx = [0; 4];
        for a in (0..4).rev() {
            idx[a] = i % self.dims[a];
            i /= self.dims[a];
        }
        idx
    }

    pub fn linear(&self, idx: [usize; 4]) -> usize {
        idx.iter().zip(self.dims.iter()).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.lower[axis] + (i as f64 + 0.5) * self.spacing[axis]
    }

    pub fn point(&self, i: usize) -> [f64; 4] {
        let idx = self.index(i);
        [self.coord(0, idx[0]), self.coord(1, idx[1]), self.coord(2, idx[2]), self.coord(3, idx[3])]
    }

    /// Volume of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Number of nodes in one slice of the non-periodic axes (the torus fiber).
    pub fn fiber_len(&self) -> usize {
        (0..4).filter(|&a| self.periodic[a]).map(|a| self.dims[a]).product()
    }
}

type ClosedForm = Arc<dyn Fn(&[f64; 4]) -> f64 + Send + Sync>;

/// Values on a [`GridDomain`] with an optional closed-form evaluator.
#[derive(Clone)]
pub struct ScalarField {
    pub domain: GridDomain,
    pub values: Vec<f64>,
    closed_form: Option<ClosedForm>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("domain", &self.domain)
            .field("len", &self.values.len())
            .field("closed_form", &self.closed_form.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn from_values(domain: GridDomain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidParameter(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                domain.len()
            )));
        }
        Ok(ScalarField { domain, values, closed_form: None })
    }

    pub fn zeros(domain: GridDomain) -> Self {
        let n = domain.len();
        ScalarField { domain, values: vec![0.0; n], closed_form: None }
    }

    /// Samples `f` at every node and keeps it as the closed form.
    pub fn from_fn<F>(domain: GridDomain, f: F, exec: Exec) -> Self
    where
        F: Fn(&[f64; 4]) -> f64 + Send + Sync + 'static,
    {
        let f: ClosedForm = Arc::new(f);
        let values = exec.map(domain.len(), |i| f(&domain.point(i)));
        ScalarField { domain, values, closed_form: Some(f) }
    }

    pub fn closed_form(&self) -> Option<&(dyn Fn(&[f64; 4]) -> f64 + Send + Sync)> {
        self.closed_form.as_deref()
    }

    /// Evaluates the closed form when present, the nearest node otherwise.
    pub fn eval(&self, x: &[f64; 4]) -> f64 {
        if let Some(f) = &self.closed_form {
            return f(x);
        }
        let d = &self.domain;
        let mut idx = [0usize; 4];
        for a in 0..4 {
            let u = ((x[a] - d.lower[a]) / d.spacing[a] - 0.5).round();
            let n = d.dims[a] as i64;
            let i = u as i64;
            idx[a] = if d.periodic[a] { i.rem_euclid(n) as usize } else { i.clamp(0, n - 1) as usize };
        }
        self.values[d.linear(idx)]
    }

    /// Largest deviation between stored values and the closed form.
    pub fn closed_form_deviation(&self, exec: Exec) -> Option<f64> {
        let f = self.closed_form.as_ref()?;
        Some(exec.max(self.values.len(), |i| (self.values[i] - f(&self.domain.point(i))).abs()))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField {
            domain: self.domain.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            closed_form: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        let g = GridDomain::new([3, 4, 5, 6], [0.0; 4], [1.0; 4], [false; 4]).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.linear(g.index(i)), i);
        }
        assert_eq!(g.index(1), [0, 0, 0, 1]);
    }

    #[test]
    fn closed_form_is_consistent() {
        let g = GridDomain::torus(4);
        let f = ScalarField::from_fn(g, |x| (x[0] * 6.0).sin(), Exec::default());
        assert_eq!(f.closed_form_deviation(Exec::default()), Some(0.0));
        let stored = f.map(|v| v);
        assert!(stored.closed_form().is_none());
        let x = f.domain.point(37);
        assert_eq!(stored.eval(&x), f.values[37]);
    }
}
