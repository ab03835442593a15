//! Rational numbers for reports and small exact linear algebra.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// A rational that serializes as `"n/d"` (or `"n"`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Q);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Q> for Exact {
    fn from(v: Q) -> Self {
        Exact(v)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Q::from_str(&s).map(Exact).map_err(|_| serde::de::Error::custom(format!("not a rational: {s}")))
    }
}

/// Representative in `[0, 1)`.
pub fn frac(v: Q) -> Q {
    v - v.floor()
}

/// Row-reduces in place and returns the pivot columns.
fn rref(a: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        a[r].iter_mut().for_each(|v| *v *= inv);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..cols {
                    let v = a[r][j];
                    a[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(a: &[Vec<Q>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

/// Unique solution of `A x = b` for square invertible `A`.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(row, &v)| row.iter().copied().chain([v]).collect()).collect();
    let piv = rref(&mut m);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.iter().map(|row| row[n]).collect())
}

/// Whether `A x = b` has a rational solution.
pub fn consistent(a: &[Vec<Q>], b: &[Q]) -> bool {
    let aug: Vec<Vec<Q>> = a.iter().zip(b).map(|(row, &v)| row.iter().copied().chain([v]).collect()).collect();
    rank(a) == rank(&aug)
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.to_vec();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -m[r][f];
            }
            v
        })
        .collect()
}

pub fn transpose(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// Whether `V n = c` has an integer solution `n`, for rational `V` and `c`.
pub fn integer_solvable(v: &[Vec<Q>], c: &[Q]) -> bool {
    // Clear denominators row by row.
    let mut m: Vec<Vec<i128>> = Vec::new();
    let mut rhs: Vec<i128> = Vec::new();
    for (row, &ci) in v.iter().zip(c) {
        let l = row.iter().chain([&ci]).fold(1i64, |acc, x| acc.lcm(x.denom()));
        m.push(row.iter().map(|x| (x * l).to_integer() as i128).collect());
        rhs.push((ci * l).to_integer() as i128);
    }
    let cols = m.first().map_or(0, |r| r.len());
    // Unimodular column operations to lower echelon form.
    let mut p = 0;
    let mut pivot_of_row = vec![None; m.len()];
    for i in 0..m.len() {
        if p == cols {
            break;
        }
        loop {
            let nz: Vec<usize> = (p..cols).filter(|&j| m[i][j] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    for row in m.iter_mut() {
                        row.swap(p, j);
                    }
                }
                break;
            }
            let jmin = *nz.iter().min_by_key(|&&j| m[i][j].abs()).unwrap();
            for &j in &nz {
                if j != jmin {
                    let f = m[i][j] / m[i][jmin];
                    for row in m.iter_mut() {
                        row[j] -= f * row[jmin];
                    }
                }
            }
        }
        if m[i][p] != 0 {
            pivot_of_row[i] = Some(p);
            p += 1;
        }
    }
    let mut y = vec![0i128; cols];
    for i in 0..m.len() {
        let known: i128 = (0..cols).filter(|&j| Some(j) != pivot_of_row[i]).map(|j| m[i][j] * y[j]).sum();
        let r = rhs[i] - known;
        match pivot_of_row[i] {
            Some(j) => {
                if r % m[i][j] != 0 {
                    return false;
                }
                y[j] = r / m[i][j];
            }
            None if r != 0 => return false,
            None => {}
        }
    }
    true
}
