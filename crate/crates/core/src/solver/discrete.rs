//! Second-order stencils on cell-centred grids, with ghost nodes resolved by
//! periodicity, a point reflection at `t = 0`, or odd (Dirichlet) reflection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::GridDomain;
use crate::kahler::{complex_from_real_hessian, HermitianForm};

/// Treatment of the faces of a non-periodic axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndCondition {
    /// `u = 0` on the face.
    Dirichlet,
    /// `u(−t, −x, −y, −z) = u(t, x, y, z)`: the face `t = 0` of a domain
    /// reduced by the point reflection. Only valid on the lower face of axis 0
    /// with all other axes periodic and starting at zero.
    Mirror,
}

/// Boundary treatment of axis 0 when it is not periodic. Other non-periodic
/// axes use Dirichlet faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ends {
    pub lower: EndCondition,
    pub upper: EndCondition,
}

impl Ends {
    pub const DIRICHLET: Ends = Ends { lower: EndCondition::Dirichlet, upper: EndCondition::Dirichlet };
    pub const MIRROR: Ends = Ends { lower: EndCondition::Mirror, upper: EndCondition::Dirichlet };
}

/// Number of stencil neighbours: 8 axis neighbours and 24 diagonal ones.
const NEIGHBOURS: usize = 32;

/// Neighbour table of a grid; each entry is `(node, sign)` with the ghost
/// value equal to `sign · u[node]`.
#[derive(Clone, Debug)]
pub struct Stencil {
    pub domain: GridDomain,
    pub ends: Ends,
    table: Vec<(u32, f64)>,
}

fn diagonal_slot(a: usize, b: usize) -> usize {
    // Pairs (a, b) with a < b in lexicographic order.
    [[0, 0, 1, 2], [0, 0, 3, 4], [0, 0, 0, 5], [0; 4]][a][b]
}

impl Stencil {
    pub fn new(domain: GridDomain, ends: Ends) -> Result<Self> {
        if domain.len() > u32::MAX as usize {
            return Err(Error::InvalidParameter("grid too large".into()));
        }
        if ends.upper == EndCondition::Mirror {
            return Err(Error::InvalidParameter("mirror condition only applies to the lower face".into()));
        }
        if !domain.periodic[0] && ends.lower == EndCondition::Mirror {
            let ok = domain.lower[0] == 0.0 && (1..4).all(|a| domain.periodic[a] && domain.lower[a] == 0.0);
            if !ok {
                return Err(Error::InvalidParameter(
                    "mirror face needs t starting at 0 and periodic transverse axes starting at 0".into(),
                ));
            }
        }
        let n = domain.len();
        let mut table = Vec::with_capacity(n * NEIGHBOURS);
        for i in 0..n {
            let idx = domain.index(i).map(|v| v as i64);
            for a in 0..4 {
                for s in [1, -1] {
                    let mut j = idx;
                    j[a] += s;
                    table.push(resolve(&domain, ends, j));
                }
            }
            for a in 0..4 {
                for b in (a + 1)..4 {
                    for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        let mut j = idx;
                        j[a] += sa;
                        j[b] += sb;
                        table.push(resolve(&domain, ends, j));
                    }
                }
            }
        }
        Ok(Stencil { domain, ends, table })
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis_neighbour(&self, i: usize, a: usize, plus: bool) -> (u32, f64) {
        self.table[i * NEIGHBOURS + 2 * a + usize::from(!plus)]
    }

    fn diagonal_neighbours(&self, i: usize, a: usize, b: usize) -> &[(u32, f64)] {
        let start = i * NEIGHBOURS + 8 + 4 * diagonal_slot(a, b);
        &self.table[start..start + 4]
    }

    /// Real Hessian of `u` at node `i` in `(t, x, y, z)`.
    pub fn real_hessian(&self, u: &[f64], i: usize) -> [[f64; 4]; 4] {
        let h = self.domain.spacing;
        let val = |(j, s): (u32, f64)| s * u[j as usize];
        let mut r = [[0.0; 4]; 4];
        for a in 0..4 {
            let p = val(self.axis_neighbour(i, a, true));
            let m = val(self.axis_neighbour(i, a, false));
            r[a][a] = (p - 2.0 * u[i] + m) / (h[a] * h[a]);
            for b in (a + 1)..4 {
                let d = self.diagonal_neighbours(i, a, b);
                let v = (val(d[0]) - val(d[1]) - val(d[2]) + val(d[3])) / (4.0 * h[a] * h[b]);
                r[a][b] = v;
                r[b][a] = v;
            }
        }
        r
    }

    /// Discrete `∂∂̄u` at node `i`.
    pub fn complex_hessian(&self, u: &[f64], i: usize) -> HermitianForm {
        complex_from_real_hessian(&self.real_hessian(u, i))
    }

    /// Sparse matrix of `u ↦ Σ_{ab} A_i^{ab} ∂_a∂_b u` for per-node symmetric `A_i`.
    pub fn assemble(&self, coeffs: &[[[f64; 4]; 4]], exec: Exec) -> SparseMatrix {
        let h = self.domain.spacing;
        let rows: Vec<Vec<(u32, f64)>> = exec.map(self.len(), |i| {
            let a_i = &coeffs[i];
            let mut row: Vec<(u32, f64)> = Vec::with_capacity(NEIGHBOURS + 1);
            let mut centre = 0.0;
            for a in 0..4 {
                let w = a_i[a][a] / (h[a] * h[a]);
                centre -= 2.0 * w;
                for plus in [true, false] {
                    let (j, s) = self.axis_neighbour(i, a, plus);
                    row.push((j, s * w));
                }
                for b in (a + 1)..4 {
                    // Both A^{ab} and A^{ba} multiply the same mixed difference.
                    let w = 2.0 * a_i[a][b] / (4.0 * h[a] * h[b]);
                    if w == 0.0 {
                        continue;
                    }
                    for (k, &(j, s)) in self.diagonal_neighbours(i, a, b).iter().enumerate() {
                        let sign = if k == 0 || k == 3 { 1.0 } else { -1.0 };
                        row.push((j, sign * s * w));
                    }
                }
            }
            row.push((i as u32, centre));
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(u32, f64)> = Vec::with_capacity(row.len());
            for (j, v) in row {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            merged
        });
        SparseMatrix::from_rows(rows)
    }
}

fn resolve(d: &GridDomain, ends: Ends, mut j: [i64; 4]) -> (u32, f64) {
    let mut sign = 1.0;
    for a in 1..4 {
        let n = d.dims[a] as i64;
        if d.periodic[a] {
            j[a] = j[a].rem_euclid(n);
        } else if j[a] < 0 {
            j[a] = -1 - j[a];
            sign = -sign;
        } else if j[a] >= n {
            j[a] = 2 * n - 1 - j[a];
            sign = -sign;
        }
    }
    let n0 = d.dims[0] as i64;
    if d.periodic[0] {
        j[0] = j[0].rem_euclid(n0);
    } else if j[0] < 0 {
        j[0] = -1 - j[0];
        match ends.lower {
            EndCondition::Dirichlet => sign = -sign,
            EndCondition::Mirror => {
                for a in 1..4 {
                    j[a] = d.dims[a] as i64 - 1 - j[a];
                }
            }
        }
    } else if j[0] >= n0 {
        j[0] = 2 * n0 - 1 - j[0];
        sign = -sign;
    }
    let idx = [j[0] as usize, j[1] as usize, j[2] as usize, j[3] as usize];
    (d.linear(idx) as u32, sign)
}

/// Real coefficients `A` with `tr(K ∂∂̄u) = Σ A^{ab} ∂_a∂_b u` in `(x₁, y₁, x₂, y₂)`.
pub fn real_coefficients(k: &HermitianForm) -> [[f64; 4]; 4] {
    let mut a = [[0.0; 4]; 4];
    for j in 0..2 {
        for l in 0..2 {
            // tr(K B) = Σ K_{lj} B_{jl}, B_{jl} = ¼[u_{xj xl} + u_{yj yl} + i(u_{xj yl} − u_{yj xl})].
            let c = k.m[l][j];
            let (xj, yj, xl, yl) = (2 * j, 2 * j + 1, 2 * l, 2 * l + 1);
            a[xj][xl] += 0.25 * c.re;
            a[yj][yl] += 0.25 * c.re;
            a[xj][yl] -= 0.25 * c.im;
            a[yj][xl] += 0.25 * c.im;
        }
    }
    for p in 0..4 {
        for q in (p + 1)..4 {
            let s = 0.5 * (a[p][q] + a[q][p]);
            a[p][q] = s;
            a[q][p] = s;
        }
    }
    a
}

/// Compressed sparse rows.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl SparseMatrix {
    pub fn from_rows(rows: Vec<Vec<(u32, f64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut diag = vec![0.0; rows.len()];
        row_ptr.push(0);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row {
                if j as usize == i {
                    diag[i] += v;
                }
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        SparseMatrix { row_ptr, cols, vals, diag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.cols[s..e].iter().zip(&self.vals[s..e]).map(|(&j, v)| v * x[j as usize]).sum()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64], exec: Exec) {
        exec.fill(y, |i| self.row_dot(i, x));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_coefficients_give_half_laplacian() {
        let a = real_coefficients(&HermitianForm::flat().inverse().unwrap());
        for p in 0..4 {
            for q in 0..4 {
                assert_eq!(a[p][q], if p == q { 0.5 } else { 0.0 });
            }
        }
    }

    #[test]
    fn coefficients_reproduce_trace_product() {
        let k = HermitianForm::from_parts(1.3, 0.7, num_complex::Complex64::new(0.2, -0.35));
        let r = [[0.3, 0.1, -0.2, 0.5], [0.1, -1.0, 0.4, 0.2], [-0.2, 0.4, 0.8, -0.6], [0.5, 0.2, -0.6, 0.1]];
        let a = real_coefficients(&k);
        let lhs: f64 = (0..4).flat_map(|p| (0..4).map(move |q| (p, q))).map(|(p, q)| a[p][q] * r[p][q]).sum();
        let rhs = k.trace_product(&complex_from_real_hessian(&r));
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn hessian_is_exact_on_quadratics_with_mirror_ghosts() {
        let d = GridDomain::new([4, 4, 4, 4], [0.0; 4], [0.25; 4], [false, true, true, true]).unwrap();
        let s = Stencil::new(d.clone(), Ends::MIRROR).unwrap();
        // Even under the point reflection, and smooth across x = 0 on the torus
        // only through its periodic extension; test at the mirror face in t.
        let u: Vec<f64> = (0..d.len()).map(|i| {
            let p = d.point(i);
            p[0] * p[0] + (2.0 * std::f64::consts::PI * p[1]).cos()
        }).collect();
        let i = d.linear([0, 1, 2, 3]);
        let r = s.real_hessian(&u, i);
        assert!((r[0][0] - 2.0).abs() < 1e-12);
        assert!(r[0][1].abs() < 1e-12);
    }

    #[test]
    fn assembled_matrix_matches_stencil() {
        let d = GridDomain::new([5, 4, 3, 4], [0.0; 4], [0.2, 0.25, 1.0 / 3.0, 0.25], [false, true, true, true]).unwrap();
        let s = Stencil::new(d.clone(), Ends::MIRROR).unwrap();
        let k = HermitianForm::from_parts(1.1, 0.9, num_complex::Complex64::new(0.3, 0.2));
        let a = real_coefficients(&k);
        let m = s.assemble(&vec![a; d.len()], Exec::default());
        let u: Vec<f64> = (0..d.len()).map(|i| ((i * 7919) % 97) as f64 / 97.0).collect();
        for i in [0, 17, d.len() - 1] {
            let direct = k.trace_product(&s.complex_hessian(&u, i));
            assert!((m.row_dot(i, &u) - direct).abs() < 1e-10);
        }
    }
}
