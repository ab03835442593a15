use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flat background `ℝ^m × T^{4−m}` with a rational lattice for the torus factor.
///
/// Real coordinates are ordered so that the first `m` are the Euclidean
/// factor; the complex structure is `ζ₁ = x₀ + i x₁`, `ζ₂ = x₂ + i x₃`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatModel {
    pub m: u8,
    /// Rows are basis vectors of the lattice of the torus factor, expressed in
    /// the last `4 − m` coordinates.
    pub lattice: Vec<Vec<Rational64>>,
}

impl FlatModel {
    pub fn new(m: u8, lattice: Vec<Vec<Rational64>>) -> Result<Self> {
        if !(1..=4).contains(&m) {
            return Err(Error::InvalidParameter(format!("dimension at infinity m = {m} not in 1..=4")));
        }
        let rank = 4 - m as usize;
        if lattice.len() != rank || lattice.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidParameter(format!(
                "lattice must be a {rank}x{rank} basis for m = {m}"
            )));
        }
        if rank > 0 && determinant(&lattice).is_zero() {
            return Err(Error::InvalidParameter("lattice basis is degenerate".into()));
        }
        Ok(FlatModel { m, lattice })
    }

    /// `ℝ^m × T^{4−m}` with the unit square lattice.
    pub fn unit(m: u8) -> Result<Self> {
        let rank = 4usize.saturating_sub(m as usize);
        let lattice = (0..rank)
            .map(|i| (0..rank).map(|j| Rational64::from_integer((i == j) as i64)).collect())
            .collect();
        Self::new(m, lattice)
    }

    pub fn torus_rank(&self) -> usize {
        4 - self.m as usize
    }

    /// Covolume of the torus lattice.
    pub fn covolume(&self) -> Rational64 {
        if self.lattice.is_empty() {
            Rational64::from_integer(1)
        } else {
            let d = determinant(&self.lattice);
            if d < Rational64::zero() {
                -d
            } else {
                d
            }
        }
    }
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn determinant(rows: &[Vec<Rational64>]) -> Rational64 {
    let n = rows.len();
    let mut a: Vec<Vec<Rational64>> = rows.to_vec();
    let mut det = Rational64::from_integer(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational64::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in (col + 1)..n {
            let factor = a[r][col] / p;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn unit_models() {
        for m in 1..=4 {
            let f = FlatModel::unit(m).unwrap();
            assert_eq!(f.torus_rank() + m as usize, 4);
            assert_eq!(f.covolume(), q(1, 1));
        }
    }

    #[test]
    fn degenerate_lattice_rejected() {
        let l = vec![vec![q(1, 1), q(1, 2)], vec![q(2, 1), q(1, 1)]];
        assert!(FlatModel::new(2, l).is_err());
        let l = vec![vec![q(1, 1), q(1, 2)], vec![q(0, 1), q(3, 2)]];
        assert_eq!(FlatModel::new(2, l).unwrap().covolume(), q(3, 2));
        assert!(FlatModel::new(5, vec![]).is_err());
    }
}
