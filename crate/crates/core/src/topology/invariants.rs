//! Euler characteristic, signature and adiabatic η-invariant of the ALF
//! families, with the orientation and mass constraints.

use serde::{Deserialize, Serialize};

use super::exact::{q, qi, Exact, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlfFamily {
    /// `A_k`: `k + 1` Taub-NUT centres, boundary `S³/ℤ_{k+1}`.
    Cyclic,
    /// `D_k`: boundary `S³/D_k` with `D_k` of order `4(k − 2)`.
    Dihedral,
}

impl AlfFamily {
    pub fn letter(&self) -> char {
        match self {
            AlfFamily::Cyclic => 'A',
            AlfFamily::Dihedral => 'D',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MassSign {
    Positive,
    Zero,
    Negative,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyReport {
    pub family: AlfFamily,
    pub k: i64,
    pub chi: i64,
    pub tau: i64,
    /// `(2 − k)/3`; absent for `A₋₁ = ℝ³ × S¹`.
    pub eta_ad: Option<Exact>,
    /// `3η_ad`, the other normalization of the boundary η-quantity.
    pub three_eta_ad: Option<Exact>,
    pub boundary: String,
    /// `+1` for the orientation induced by the complex structure.
    pub orientation: i8,
    pub mass: MassSign,
    /// Number of exceptional divisors, `b₂ = χ − 1`.
    pub divisors: i64,
    /// Reason the entry is excluded from `χ = 3(1 − η_ad)`.
    pub special: Option<String>,
}

pub fn eta_ad(k: i64) -> Q {
    q(2 - k, 3)
}

/// Sign of the mass at infinity.
pub fn mass_sign(family: AlfFamily, k: i64) -> MassSign {
    match (family, k) {
        (AlfFamily::Cyclic, -1) => MassSign::Zero,
        (AlfFamily::Cyclic, k) if k >= 0 => MassSign::Positive,
        (AlfFamily::Dihedral, 0 | 1) => MassSign::Negative,
        (AlfFamily::Dihedral, 2) => MassSign::Zero,
        (AlfFamily::Dihedral, k) if k >= 3 => MassSign::Positive,
        _ => MassSign::Unknown,
    }
}

fn boundary(family: AlfFamily, k: i64) -> String {
    match (family, k) {
        (AlfFamily::Cyclic, -1) => "S2xS1".into(),
        (AlfFamily::Cyclic, k) => format!("S3/Z{}", k + 1),
        (AlfFamily::Dihedral, 2) => "(S2xS1)/Z2".into(),
        (AlfFamily::Dihedral, k @ (0 | 1)) => format!("-S3/D{}", 4 - k),
        (AlfFamily::Dihedral, k) => format!("S3/D{k}"),
    }
}

/// `η_ad = (2 − k)/3`, `χ = k + 1 = 3(1 − η_ad)`, `τ = −(χ − 1)`.
pub fn euler_eta_table(family: AlfFamily, k: i64) -> Result<TopologyReport> {
    let min = match family {
        AlfFamily::Cyclic => -1,
        AlfFamily::Dihedral => 0,
    };
    if k < min {
        return Err(Error::InvalidParameter(format!("{}_{k} is not in the family", family.letter())));
    }
    let chi = k + 1;
    let (tau, eta, special) = if family == AlfFamily::Cyclic && k == -1 {
        (0, None, Some("flat R3xS1: excluded from chi = 3(1 - eta_ad)".to_string()))
    } else {
        (-(chi - 1), Some(eta_ad(k)), None)
    };
    Ok(TopologyReport {
        family,
        k,
        chi,
        tau,
        eta_ad: eta.map(Exact),
        three_eta_ad: eta.map(|e| Exact(e * 3)),
        boundary: boundary(family, k),
        orientation: 1,
        mass: mass_sign(family, k),
        divisors: (chi - 1).max(0),
        special,
    })
}

/// Whether the identities `χ = 3(1 − η_ad)`, `τ = −(χ − 1)`,
/// `2χ + 3τ = 3 − χ` and `η_ad ≤ 2/3` hold exactly.
pub fn identities_hold(r: &TopologyReport) -> bool {
    let Some(Exact(eta)) = r.eta_ad else { return r.special.is_some() };
    qi(r.chi) == (qi(1) - eta) * 3 && r.tau == -(r.chi - 1) && 2 * r.chi + 3 * r.tau == 3 - r.chi && eta <= q(2, 3)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fillability {
    pub k: i64,
    pub eta_positive: Exact,
    pub eta_negative: Exact,
    pub positive: bool,
    pub negative: bool,
    /// `k'` whose positive boundary is this boundary with reversed orientation.
    pub reversed_by: Option<i64>,
}

/// Applies `η_ad ≤ 2/3` to both orientations of `S³/D_k`.
pub fn orientation_fillability(k: i64) -> Result<Fillability> {
    if k < 0 {
        return Err(Error::InvalidParameter(format!("D_{k}: k must be non-negative")));
    }
    let bound = q(2, 3);
    let (pos, neg) = (eta_ad(k), -eta_ad(k));
    // η_ad(k') = −η_ad(k) gives k' = 4 − k.
    let partner = 4 - k;
    Ok(Fillability {
        k,
        eta_positive: Exact(pos),
        eta_negative: Exact(neg),
        positive: pos <= bound,
        negative: neg <= bound,
        reversed_by: (partner >= 0 && neg <= bound).then_some(partner),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atiyah_hitchin_row() {
        let r = euler_eta_table(AlfFamily::Dihedral, 0).unwrap();
        assert_eq!((r.chi, r.tau), (1, 0));
        assert_eq!(r.eta_ad, Some(Exact(q(2, 3))));
        assert_eq!(r.mass, MassSign::Negative);
        assert!(identities_hold(&r));
    }

    #[test]
    fn flat_cylinder_is_special() {
        let r = euler_eta_table(AlfFamily::Cyclic, -1).unwrap();
        assert!(r.special.is_some() && r.eta_ad.is_none());
        assert!(euler_eta_table(AlfFamily::Cyclic, -2).is_err());
        assert!(euler_eta_table(AlfFamily::Dihedral, -1).is_err());
    }
}
