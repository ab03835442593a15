//! Critical weights of the Laplacian on `ℝ^m × T^{4−m}` ends.

use num_rational::Rational64;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

/// The critical set for one end dimension `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalSet {
    pub m: u8,
}

pub fn critical_exponents(m: u8) -> Result<CriticalSet> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidParameter(format!("end dimension m = {m} must lie in 1..=4")));
    }
    Ok(CriticalSet { m })
}

impl CriticalSet {
    /// Multiplicity of `δ` as a critical weight; 0 when `δ` is not critical.
    pub fn multiplicity(&self, delta: Rational64) -> u32 {
        let half = Rational64::new(1, 2);
        let is_int = |x: Rational64| x.is_integer();
        match self.m {
            4 => u32::from(is_int(delta) && delta != Rational64::one()),
            3 => u32::from(is_int(delta - Rational64::new(3, 2))),
            2 if delta == Rational64::one() => 2,
            2 => u32::from(is_int(delta)),
            _ => u32::from(delta == half || delta == Rational64::new(3, 2)),
        }
    }

    pub fn is_critical(&self, delta: Rational64) -> bool {
        self.multiplicity(delta) > 0
    }

    /// Critical weights in `[lo, hi]`.
    pub fn in_range(&self, lo: i64, hi: i64) -> Vec<Rational64> {
        let mut out = Vec::new();
        for twice in 2 * lo..=2 * hi {
            let d = Rational64::new(twice, 2);
            if self.is_critical(d) {
                out.push(d);
            }
        }
        out
    }

    /// Threshold `m/2`: below it the weighted Laplacian is injective.
    pub fn injectivity_threshold(&self) -> Rational64 {
        Rational64::new(self.m as i64, 2)
    }

    /// Weight paired with `δ` by the `L²` duality; every critical set is
    /// invariant under this reflection.
    pub fn dual(&self, delta: Rational64) -> Rational64 {
        Rational64::from_integer(2) - delta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn listed_sets() {
        let one = critical_exponents(1).unwrap();
        assert_eq!(one.in_range(-5, 5), vec![q(1, 2), q(3, 2)]);
        assert_eq!(critical_exponents(2).unwrap().multiplicity(q(1, 1)), 2);
        assert!(!critical_exponents(3).unwrap().is_critical(q(7, 10)));
        assert!(critical_exponents(3).unwrap().is_critical(q(-1, 2)));
        assert!(!critical_exponents(4).unwrap().is_critical(q(1, 1)));
        assert!(critical_exponents(4).unwrap().is_critical(q(2, 1)));
        assert!(critical_exponents(5).is_err());
        for m in 1..=4 {
            let c = critical_exponents(m).unwrap();
            for d in c.in_range(-6, 6) {
                assert_eq!(c.multiplicity(c.dual(d)), c.multiplicity(d));
            }
        }
    }
}
