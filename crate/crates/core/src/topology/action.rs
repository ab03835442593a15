//! Crystallographic actions on `ℝ^m × T^{4−m}` and their fixed points.
//!
//! Coordinates are lattice coordinates: the torus factor is `ℝ^{4−m}/ℤ^{4−m}`
//! and linear parts are integer matrices. The metric is carried as a
//! rational Gram matrix; the complex structure is `ζ₁ = x₀ + i x₁`,
//! `ζ₂ = x₂ + i x₃`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{consistent, frac, integer_solvable, nullspace, q, qi, solve, transpose, Exact, Q};
use crate::error::{Error, Result};
use crate::models::flat::determinant;
use crate::models::FlatModel;

pub type IMat = [[i64; 4]; 4];
pub type Point = [Q; 4];

/// `x ↦ M x + t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineMap {
    pub linear: IMat,
    pub shift: [Exact; 4],
}

pub const IDENTITY: IMat = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

pub fn diag(d: [i64; 4]) -> IMat {
    let mut m = [[0; 4]; 4];
    for i in 0..4 {
        m[i][i] = d[i];
    }
    m
}

/// Block-diagonal matrix from two 2×2 blocks.
pub fn blocks(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> IMat {
    [[a[0][0], a[0][1], 0, 0], [a[1][0], a[1][1], 0, 0], [0, 0, b[0][0], b[0][1]], [0, 0, b[1][0], b[1][1]]]
}

fn matmul(a: &IMat, b: &IMat) -> IMat {
    let mut c = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

impl AffineMap {
    pub fn new(linear: IMat, shift: [Q; 4]) -> Self {
        AffineMap { linear, shift: shift.map(Exact) }
    }

    pub fn linear_only(linear: IMat) -> Self {
        Self::new(linear, [Q::zero(); 4])
    }

    pub fn apply(&self, x: &Point) -> Point {
        let mut out = [Q::zero(); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|k| x[k] * self.linear[i][k]).sum::<Q>() + self.shift[i].0;
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let t = self.apply(&other.shift.map(|e| e.0));
        AffineMap::new(matmul(&self.linear, &other.linear), t)
    }

    pub fn is_identity(&self) -> bool {
        self.linear == IDENTITY && self.shift.iter().all(|s| s.0.is_zero())
    }
}

/// A finite group of affine isometries of `ℝ^m × T^{4−m}`, modulo the lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbifoldAction {
    pub name: String,
    pub ambient: FlatModel,
    /// Metric in the action's coordinates.
    pub gram: [[Exact; 4]; 4],
    pub generators: Vec<AffineMap>,
    pub order: usize,
    /// Whether the generators must be holomorphic.
    pub kahler: bool,
}

/// The cyclic group of a point in `ℝ^m × T^{4−m}` under the action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "order")]
pub enum Isotropy {
    /// `ℤ_n`, an `A_{n−1}` point.
    Cyclic(usize),
    NonCyclic(usize),
}

impl Isotropy {
    pub fn order(&self) -> usize {
        match *self {
            Isotropy::Cyclic(n) | Isotropy::NonCyclic(n) => n,
        }
    }

    /// `"Z2"`, `"Z3"`, ...
    pub fn label(&self) -> String {
        match *self {
            Isotropy::Cyclic(n) => format!("Z{n}"),
            Isotropy::NonCyclic(n) => format!("G{n}"),
        }
    }

    /// Exceptional curves of the minimal resolution of a cyclic `SU(2)` point.
    pub fn exceptional_curves(&self) -> Option<usize> {
        match *self {
            Isotropy::Cyclic(n) => Some(n - 1),
            Isotropy::NonCyclic(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularPointRecord {
    /// Orbit representative, reduced modulo the lattice.
    pub location: [Exact; 4],
    pub orbit_size: usize,
    pub isotropy: Isotropy,
    /// Linear parts of the stabilizer, which act on the tangent space.
    pub stabilizer: Vec<IMat>,
    /// Whether every stabilizer element lies in `SU(2)`.
    pub special_unitary: bool,
}

const MAX_ORDER: usize = 512;

impl OrbifoldAction {
    pub fn m(&self) -> usize {
        self.ambient.m as usize
    }

    /// Reduces periodic coordinates into `[0, 1)`.
    pub fn reduce(&self, x: &Point) -> Point {
        let mut y = *x;
        for v in y.iter_mut().skip(self.m()) {
            *v = frac(*v);
        }
        y
    }

    fn normalize(&self, g: AffineMap) -> AffineMap {
        let t = self.reduce(&g.shift.map(|e| e.0));
        AffineMap::new(g.linear, t)
    }

    fn gram_q(&self) -> [[Q; 4]; 4] {
        self.gram.map(|r| r.map(|e| e.0))
    }

    /// Checks that generators preserve the splitting, the lattice and the
    /// metric, and are holomorphic when flagged Kähler.
    pub fn validate(&self) -> Result<()> {
        let m = self.m();
        let g = self.gram_q();
        for (n, a) in self.generators.iter().enumerate() {
            for i in 0..4 {
                for j in 0..4 {
                    if (i < m) != (j < m) && a.linear[i][j] != 0 {
                        return Err(Error::InvalidParameter(format!("{}: generator {n} mixes ℝ^m and torus", self.name)));
                    }
                }
            }
            for i in 0..4 {
                for j in 0..4 {
                    let v: Q = (0..4).flat_map(|k| (0..4).map(move |l| (k, l))).map(|(k, l)| g[k][l] * a.linear[k][i] * a.linear[l][j]).sum();
                    if v != g[i][j] {
                        return Err(Error::InvalidParameter(format!("{}: generator {n} is not an isometry", self.name)));
                    }
                }
            }
            if self.kahler && !holomorphic(&a.linear) {
                return Err(Error::InvalidParameter(format!("{}: generator {n} is not holomorphic", self.name)));
            }
        }
        Ok(())
    }

    /// All group elements modulo the lattice, identity first.
    pub fn elements(&self) -> Result<Vec<AffineMap>> {
        self.validate()?;
        let id = AffineMap::linear_only(IDENTITY);
        let mut out = vec![id];
        let mut seen: BTreeSet<AffineMap> = out.iter().copied().collect();
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for g in &self.generators {
                let n = self.normalize(g.compose(&e));
                if seen.insert(n) {
                    if out.len() == MAX_ORDER {
                        return Err(Error::InvalidParameter(format!("{}: group exceeds order {MAX_ORDER}", self.name)));
                    }
                    out.push(n);
                    frontier.push(n);
                }
            }
        }
        if out.len() != self.order {
            return Err(Error::InvalidParameter(format!("{}: group has order {}, declared {}", self.name, out.len(), self.order)));
        }
        Ok(out)
    }

    pub fn fixes(&self, g: &AffineMap, x: &Point) -> bool {
        self.reduce(&g.apply(x)) == self.reduce(x)
    }

    /// Fixed points of one element, reduced modulo the lattice.
    pub fn element_fixed_points(&self, g: &AffineMap) -> Result<Vec<Point>> {
        let m = self.m();
        let t = g.shift.map(|e| e.0);
        let block = |range: std::ops::Range<usize>| -> Vec<Vec<Q>> {
            range.clone().map(|i| range.clone().map(|j| qi(g.linear[i][j] - (i == j) as i64)).collect()).collect()
        };
        // Euclidean block: (M − I) x = −t; `None` marks a positive-dimensional solution set.
        let a_r = block(0..m);
        let b_r: Vec<Q> = (0..m).map(|i| -t[i]).collect();
        let euclid = match solve(&a_r, &b_r) {
            Some(x) => Some(x),
            None if m == 0 => Some(vec![]),
            None if consistent(&a_r, &b_r) => None,
            None => return Ok(vec![]),
        };
        // Torus block: (M − I) x = n − t for some integer n.
        let k = 4 - m;
        let a_t = block(m..4);
        let t_t: Vec<Q> = (m..4).map(|i| t[i]).collect();
        let det = if k == 0 { Q::one() } else { determinant(&a_t) };
        if det.is_zero() {
            let left = nullspace(&transpose(&a_t));
            let target: Vec<Q> = left.iter().map(|v| v.iter().zip(&t_t).map(|(a, b)| a * b).sum()).collect();
            if integer_solvable(&left, &target) {
                return Err(Error::NonDiscreteFixedSet);
            }
            return Ok(vec![]);
        }
        let Some(euclid) = euclid else { return Err(Error::NonDiscreteFixedSet) };
        let range = det.abs().to_integer();
        let mut torus = BTreeSet::new();
        let mut n = vec![0i64; k];
        loop {
            let rhs: Vec<Q> = (0..k).map(|i| qi(n[i]) - t_t[i]).collect();
            let x = solve(&a_t, &rhs).expect("invertible block");
            torus.insert(x.into_iter().map(frac).collect::<Vec<_>>());
            // Next n in [0, range)^k.
            let mut i = 0;
            while i < k {
                n[i] += 1;
                if n[i] < range {
                    break;
                }
                n[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        Ok(torus
            .into_iter()
            .map(|tx| {
                let mut p = [Q::zero(); 4];
                p[..m].copy_from_slice(&euclid);
                p[m..].copy_from_slice(&tx);
                p
            })
            .collect())
    }

    /// Singular points of the quotient: fixed points of nontrivial elements,
    /// merged into orbits.
    pub fn enumerate_fixed_points(&self) -> Result<Vec<SingularPointRecord>> {
        let elements = self.elements()?;
        let mut points = BTreeSet::new();
        for g in elements.iter().skip(1) {
            points.extend(self.element_fixed_points(g)?);
        }
        self.records(&elements, points)
    }

    fn records(&self, elements: &[AffineMap], points: BTreeSet<Point>) -> Result<Vec<SingularPointRecord>> {
        let mut orbits: BTreeMap<Point, usize> = BTreeMap::new();
        for p in &points {
            let orbit: BTreeSet<Point> = elements.iter().map(|g| self.reduce(&g.apply(p))).collect();
            let rep = *orbit.iter().next().expect("nonempty orbit");
            orbits.insert(rep, orbit.len());
        }
        Ok(orbits
            .into_iter()
            .map(|(p, orbit_size)| {
                let stab: Vec<&AffineMap> = elements.iter().filter(|g| self.fixes(g, &p)).collect();
                let n = stab.len();
                let cyclic = stab.iter().any(|g| self.element_order(g) == n);
                SingularPointRecord {
                    location: p.map(Exact),
                    orbit_size,
                    isotropy: if cyclic { Isotropy::Cyclic(n) } else { Isotropy::NonCyclic(n) },
                    stabilizer: stab.iter().map(|g| g.linear).collect(),
                    special_unitary: stab.iter().all(|g| special_unitary(&g.linear)),
                }
            })
            .collect())
    }

    pub fn element_order(&self, g: &AffineMap) -> usize {
        let mut p = *g;
        let mut n = 1;
        while !p.is_identity() && n <= MAX_ORDER {
            p = self.normalize(g.compose(&p));
            n += 1;
        }
        n
    }

    /// Fixed points found by exhaustive search over the grid `(1/N)ℤ⁴`, with
    /// Euclidean coordinates in `[−1, 1]`. The fixed condition is checked on
    /// each block of coordinates coupled by the linear parts and the product
    /// of the block solutions is taken.
    pub fn brute_force_fixed_points(&self, refinement: i64) -> Result<Vec<SingularPointRecord>> {
        let elements = self.elements()?;
        let m = self.m();
        let comps = coupled_components(&elements);
        let mut points = BTreeSet::new();
        for g in elements.iter().skip(1) {
            let mut per_block: Vec<Vec<Vec<Q>>> = Vec::new();
            for comp in &comps {
                per_block.push(grid_solutions(g, comp, m, refinement));
            }
            if per_block.iter().any(|b| b.is_empty()) {
                continue;
            }
            if per_block.iter().any(|b| b.len() as i64 >= refinement) {
                return Err(Error::NonDiscreteFixedSet);
            }
            let mut partial: Vec<Point> = vec![[Q::zero(); 4]];
            for (comp, sols) in comps.iter().zip(&per_block) {
                let mut next = Vec::new();
                for p in &partial {
                    for s in sols {
                        let mut x = *p;
                        for (&c, v) in comp.iter().zip(s) {
                            x[c] = *v;
                        }
                        next.push(x);
                    }
                }
                partial = next;
            }
            points.extend(partial);
        }
        self.records(&elements, points)
    }
}

/// Coordinates linked through off-diagonal entries of some linear part.
fn coupled_components(elements: &[AffineMap]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..4).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for g in elements {
        for i in 0..4 {
            for j in 0..4 {
                if i != j && g.linear[i][j] != 0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..4 {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

fn grid_solutions(g: &AffineMap, comp: &[usize], m: usize, n: i64) -> Vec<Vec<Q>> {
    let ranges: Vec<(i64, i64)> = comp.iter().map(|&c| if c < m { (-n, n) } else { (0, n - 1) }).collect();
    let mut out = Vec::new();
    let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let fixed = comp.iter().enumerate().all(|(a, &i)| {
            let y: Q = comp.iter().enumerate().map(|(b, &j)| qi(g.linear[i][j] * idx[b])).sum::<Q>() + g.shift[i].0 * n;
            let d = y - qi(idx[a]);
            if i < m {
                d.is_zero()
            } else {
                d.is_integer() && d.to_integer() % n == 0
            }
        });
        if fixed {
            out.push(idx.iter().map(|&v| q(v, n)).collect());
        }
        let mut a = 0;
        while a < idx.len() {
            idx[a] += 1;
            if idx[a] <= ranges[a].1 {
                break;
            }
            idx[a] = ranges[a].0;
            a += 1;
        }
        if a == idx.len() {
            break;
        }
    }
    out
}

/// `(cos θ, sign sin θ)` of a 2×2 integer rotation block, or `None` if the
/// block is not orientation preserving of finite order.
fn rotation(b: [[i64; 2]; 2]) -> Option<(Q, i64)> {
    if b[0][0] * b[1][1] - b[0][1] * b[1][0] != 1 {
        return None;
    }
    Some((q(b[0][0] + b[1][1], 2), b[1][0].signum()))
}

fn plane_blocks(m: &IMat) -> Option<([[i64; 2]; 2], [[i64; 2]; 2])> {
    for i in 0..4 {
        for j in 0..4 {
            if (i < 2) != (j < 2) && m[i][j] != 0 {
                return None;
            }
        }
    }
    Some(([[m[0][0], m[0][1]], [m[1][0], m[1][1]]], [[m[2][2], m[2][3]], [m[3][2], m[3][3]]]))
}

/// Whether the linear part commutes with the complex structure: it preserves
/// both complex lines and rotates each.
pub fn holomorphic(m: &IMat) -> bool {
    plane_blocks(m).is_some_and(|(a, b)| rotation(a).is_some() && rotation(b).is_some())
}

/// Whether the linear part lies in `SU(2)`: the two rotation angles are opposite.
pub fn special_unitary(m: &IMat) -> bool {
    let Some((a, b)) = plane_blocks(m) else { return false };
    match (rotation(a), rotation(b)) {
        (Some((ca, sa)), Some((cb, sb))) => ca == cb && sa == -sb,
        _ => false,
    }
}

/// Euclidean Gram matrix.
pub fn euclidean_gram() -> [[Exact; 4]; 4] {
    let mut g = [[Exact(Q::zero()); 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = Exact(Q::one());
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_classify() {
        let r4 = [[0, -1], [1, 0]];
        let r4i = [[0, 1], [-1, 0]];
        assert!(special_unitary(&blocks(r4, r4i)));
        assert!(!special_unitary(&blocks(r4, r4)));
        assert!(holomorphic(&blocks(r4, r4)));
        assert!(!holomorphic(&diag([1, -1, 1, 1])));
        assert!(special_unitary(&diag([-1; 4])));
    }

    #[test]
    fn composition_is_associative_modulo_lattice() {
        let a = AffineMap::new(diag([1, 1, -1, -1]), [qi(0), q(1, 2), qi(0), q(1, 2)]);
        let b = AffineMap::new(diag([1, -1, -1, 1]), [qi(0), qi(0), q(1, 2), q(1, 2)]);
        let x = [q(1, 3), q(1, 5), q(2, 7), q(3, 11)];
        assert_eq!(a.compose(&b).apply(&x), a.apply(&b.apply(&x)));
    }
}
