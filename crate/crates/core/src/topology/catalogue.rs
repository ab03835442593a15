//! Named quotients, their singularity inventories and divisor records.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::action::{blocks, diag, euclidean_gram, AffineMap, Isotropy, OrbifoldAction, SingularPointRecord};
use super::exact::{q, qi, Exact, Q};
use crate::error::{Error, Result};
use crate::models::FlatModel;

/// Names accepted by [`catalogue_action`] and [`quotient_singularity_inventory`].
pub const CATALOGUE: [&str; 10] =
    ["x1", "x2", "x22", "hitchin", "alg-2", "alg-3", "alg-4", "alg-6", "tn-zk", "tn-dk"];

/// `σ(t, x, y, z) = (t, x + ½, −y, −z + ½)`.
pub fn sigma() -> AffineMap {
    AffineMap::new(diag([1, 1, -1, -1]), [qi(0), q(1, 2), qi(0), q(1, 2)])
}

/// `τ(t, x, y, z) = (t, −x, −y + ½, z + ½)`.
pub fn tau() -> AffineMap {
    AffineMap::new(diag([1, -1, -1, 1]), [qi(0), qi(0), q(1, 2), q(1, 2)])
}

pub fn minus_one() -> AffineMap {
    AffineMap::linear_only(diag([-1; 4]))
}

/// Rotation by `2π/k` in hexagonal (`k = 3, 6`) or square (`k = 2, 4`)
/// lattice coordinates.
fn planar_rotation(k: u32) -> Result<[[i64; 2]; 2]> {
    Ok(match k {
        2 => [[-1, 0], [0, -1]],
        3 => [[-1, -1], [1, 0]],
        4 => [[0, -1], [1, 0]],
        6 => [[0, -1], [1, 1]],
        _ => return Err(Error::UnknownModel(format!("alg-{k}"))),
    })
}

fn inverse2(r: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    // Determinant one.
    [[r[1][1], -r[0][1]], [-r[1][0], r[0][0]]]
}

fn hex_gram() -> [[Exact; 4]; 4] {
    let mut g = euclidean_gram();
    for (a, b) in [(0, 1), (2, 3)] {
        g[a][b] = Exact(q(1, 2));
        g[b][a] = Exact(q(1, 2));
    }
    g
}

fn action(name: &str, m: u8, gram: [[Exact; 4]; 4], generators: Vec<AffineMap>, order: usize, kahler: bool) -> Result<OrbifoldAction> {
    Ok(OrbifoldAction { name: name.into(), ambient: FlatModel::unit(m)?, gram, generators, order, kahler })
}

/// The crystallographic action behind a catalogue entry.
pub fn catalogue_action(name: &str) -> Result<OrbifoldAction> {
    match name {
        "x1" => action(name, 1, euclidean_gram(), vec![minus_one()], 2, true),
        "x2" => action(name, 1, euclidean_gram(), vec![minus_one(), sigma()], 4, true),
        "x22" => action(name, 1, euclidean_gram(), vec![minus_one(), sigma(), tau()], 8, false),
        "hitchin" => action(name, 3, euclidean_gram(), vec![minus_one()], 2, true),
        _ => {
            let k: u32 = name
                .strip_prefix("alg-")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::UnknownModel(name.into()))?;
            let r = planar_rotation(k)?;
            let gram = if k == 3 || k == 6 { hex_gram() } else { euclidean_gram() };
            action(name, 2, gram, vec![AffineMap::linear_only(blocks(r, inverse2(r)))], k as usize, true)
        }
    }
}

/// Count of singular points by isotropy label, e.g. `{"Z2": 8}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inventory {
    pub name: String,
    /// `"enumerated"` for flat quotients, `"local-model"` for Taub-NUT quotients.
    pub source: String,
    pub points: BTreeMap<String, usize>,
    pub total: usize,
    /// Exceptional curves of the minimal resolution of every point.
    pub curves: usize,
    /// Topological Euler characteristic of the singular quotient.
    pub orbifold_euler: i64,
}

fn isotropy_curves(iso: &Isotropy) -> Result<usize> {
    iso.exceptional_curves().ok_or_else(|| Error::Unsupported(format!("non-cyclic isotropy {}", iso.label())))
}

/// `χ(M/G) = (1/|G|) Σ_g χ(M^g)`, with isolated fixed points only.
fn orbifold_euler(a: &OrbifoldAction) -> Result<i64> {
    let elements = a.elements()?;
    let mut total: i64 = if a.m() == 4 { 1 } else { 0 };
    for g in elements.iter().skip(1) {
        total += a.element_fixed_points(g)?.len() as i64;
    }
    Ok(total / elements.len() as i64)
}

/// Inventory of a flat quotient from its enumerated fixed points.
pub fn inventory_of(a: &OrbifoldAction, records: &[SingularPointRecord]) -> Result<Inventory> {
    let mut points = BTreeMap::new();
    let mut curves = 0;
    for r in records {
        *points.entry(r.isotropy.label()).or_insert(0) += 1;
        curves += isotropy_curves(&r.isotropy)?;
    }
    Ok(Inventory {
        name: a.name.clone(),
        source: "enumerated".into(),
        points,
        total: records.len(),
        curves,
        orbifold_euler: orbifold_euler(a)?,
    })
}

/// Singularity inventory of a catalogue entry. `k` parametrizes `tn-zk` and
/// `tn-dk`, whose single point at the origin is the local model itself.
pub fn quotient_singularity_inventory(name: &str, k: Option<u32>) -> Result<Inventory> {
    match name {
        "tn-zk" | "tn-dk" => {
            let k = k.ok_or_else(|| Error::InvalidParameter(format!("{name} needs k")))?;
            let (label, curves) = if name == "tn-zk" {
                if k < 2 {
                    return Err(Error::InvalidParameter(format!("tn-zk needs k ≥ 2, got {k}")));
                }
                (format!("Z{k}"), k as usize - 1)
            } else {
                if k < 3 {
                    return Err(Error::InvalidParameter(format!("tn-dk needs k ≥ 3, got {k}")));
                }
                (format!("D{k}"), k as usize)
            };
            Ok(Inventory {
                name: format!("{name}:{k}"),
                source: "local-model".into(),
                points: BTreeMap::from([(label, 1)]),
                total: 1,
                curves,
                orbifold_euler: 1,
            })
        }
        _ => {
            let a = catalogue_action(name)?;
            let records = a.enumerate_fixed_points()?;
            inventory_of(&a, &records)
        }
    }
}

/// One exceptional curve and its coefficient in `[ω₀] − ε Σ a_j PD[E_j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorEntry {
    pub point: usize,
    pub curve: usize,
    pub scale: Exact,
    /// `−ε a_j`.
    pub coefficient: Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorLedger {
    pub name: String,
    pub epsilon: Exact,
    pub entries: Vec<DivisorEntry>,
    /// `χ(X) − p + Σ_j (n_j + 1)` for `p` points with `n_j` curves each.
    pub euler: i64,
}

/// Exact class record of the resolution, one scale `a_j` per singular point.
pub fn divisor_class_ledger(inv: &Inventory, curves_per_point: &[usize], epsilon: Q, scales: &[Q]) -> Result<DivisorLedger> {
    if scales.len() != inv.total || curves_per_point.len() != inv.total {
        return Err(Error::InvalidParameter(format!("{} needs {} scales, got {}", inv.name, inv.total, scales.len())));
    }
    if epsilon <= Q::zero() || scales.iter().any(|a| *a <= Q::zero()) {
        return Err(Error::InvalidParameter("ε and the scales must be positive".into()));
    }
    let mut entries = Vec::new();
    for (j, (&n, &a)) in curves_per_point.iter().zip(scales).enumerate() {
        for c in 0..n {
            entries.push(DivisorEntry { point: j, curve: c, scale: Exact(a), coefficient: Exact(-epsilon * a) });
        }
    }
    let euler = inv.orbifold_euler - inv.total as i64 + curves_per_point.iter().map(|&n| n as i64 + 1).sum::<i64>();
    Ok(DivisorLedger { name: inv.name.clone(), epsilon: Exact(epsilon), entries, euler })
}

/// Curves per point in the order of [`OrbifoldAction::enumerate_fixed_points`].
pub fn curves_per_point(records: &[SingularPointRecord]) -> Result<Vec<usize>> {
    records.iter().map(|r| isotropy_curves(&r.isotropy)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_and_tau_commute_modulo_lattice() {
        let a = catalogue_action("x22").unwrap();
        let st = sigma().compose(&tau());
        let ts = tau().compose(&sigma());
        let x = [q(1, 3), q(1, 5), q(2, 7), q(3, 11)];
        assert_eq!(a.reduce(&st.apply(&x)), a.reduce(&ts.apply(&x)));
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(catalogue_action("alg-5"), Err(Error::UnknownModel(_))));
        assert!(matches!(quotient_singularity_inventory("x9", None), Err(Error::UnknownModel(_))));
    }
}
