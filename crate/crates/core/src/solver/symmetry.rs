//! The isometries `σ` and `τ` of `ℝ × T³` that descend to the resolution of
//! `(ℝ × T³)/±`, acting on the mirror-reduced grid and on the fixed points.
//!
//! `σ(t, x, y, z) = (t, x + ½, −y, −z + ½)` is holomorphic and acts freely on
//! the quotient; `τ(t, x, y, z) = (t, −x, −y + ½, z + ½)` is antiholomorphic.
//! Both preserve the Monge–Ampère equation, so a solution built from invariant
//! data is invariant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::assembly::x1_fixed_points;
use crate::grid::{GridDomain, ScalarField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum X1Isometry {
    Sigma,
    Tau,
}

/// Per transverse axis: `(reflect, shift by ½)`, applied as reflect then shift.
fn transverse(iso: X1Isometry) -> [(bool, bool); 3] {
    match iso {
        X1Isometry::Sigma => [(false, true), (true, false), (true, true)],
        X1Isometry::Tau => [(true, false), (true, true), (false, true)],
    }
}

impl X1Isometry {
    pub fn apply(&self, x: &[f64; 4]) -> [f64; 4] {
        let mut out = *x;
        for (a, (reflect, shift)) in transverse(*self).into_iter().enumerate() {
            let mut v = x[a + 1];
            if reflect {
                v = -v;
            }
            if shift {
                v += 0.5;
            }
            out[a + 1] = v.rem_euclid(1.0);
        }
        out
    }

    /// Image of each grid node; the transverse axes must be unit periodic
    /// with an even number of cells starting at zero.
    pub fn node_map(&self, d: &GridDomain) -> Result<Vec<usize>> {
        for a in 1..4 {
            if !d.periodic[a] || d.lower[a] != 0.0 || d.dims[a] % 2 != 0 || (d.period(a) - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!("axis {a} is not an even unit circle starting at 0")));
            }
        }
        let ops = transverse(*self);
        Ok((0..d.len())
            .map(|i| {
                let mut idx = d.index(i);
                for (a, (reflect, shift)) in ops.into_iter().enumerate() {
                    let n = d.dims[a + 1];
                    let mut j = idx[a + 1];
                    if reflect {
                        j = n - 1 - j;
                    }
                    if shift {
                        j = (j + n / 2) % n;
                    }
                    idx[a + 1] = j;
                }
                d.linear(idx)
            })
            .collect())
    }

    /// Permutation `π` of the fixed points with `iso(p_j) = p_{π(j)}`.
    pub fn fixed_point_permutation(&self) -> Vec<usize> {
        let pts = x1_fixed_points();
        let close = |p: &[f64; 4], q: &[f64; 4]| (1..4).all(|a| {
            let d = (p[a] - q[a]).rem_euclid(1.0);
            d < 1e-12 || d > 1.0 - 1e-12
        });
        pts.iter()
            .map(|p| {
                let img = self.apply(p);
                pts.iter().position(|q| close(&img, q)).expect("fixed points are permuted")
            })
            .collect()
    }

    /// Whether per-point scales `a_j` are constant on orbits.
    pub fn preserves_scales(&self, scales: &[f64]) -> bool {
        let perm = self.fixed_point_permutation();
        scales.len() == perm.len() && perm.iter().enumerate().all(|(j, &k)| scales[j] == scales[k])
    }
}

/// `sup |u∘iso − u|` over the grid.
pub fn invariance_defect(u: &ScalarField, iso: X1Isometry) -> Result<f64> {
    let map = iso.node_map(&u.domain)?;
    Ok(map.iter().enumerate().map(|(i, &j)| (u.values[j] - u.values[i]).abs()).fold(0.0, f64::max))
}
