//! The six oriented compact flat 3-manifolds and the geometry their
//! holonomy allows on `ℝ × M³`.

use serde::{Deserialize, Serialize};

use super::action::{euclidean_gram, AffineMap, OrbifoldAction, IDENTITY};
use super::exact::{nullspace, q, qi, Exact, Q};
use crate::error::Result;
use crate::models::FlatModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryClass {
    /// Holonomy in `SU(2)`: hyperkähler.
    SpecialUnitary,
    /// Holonomy in `U(2)` but not `SU(2)`.
    KahlerOnly,
    /// Holonomy outside every `U(2)`.
    LocallyKahlerOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flat3Entry {
    pub name: String,
    pub monodromy: String,
    pub holonomy_order: usize,
    /// Dimension of the subspace of `ℝ³` fixed by the holonomy.
    pub fixed_directions: usize,
    pub class: GeometryClass,
    pub free: bool,
}

/// Holonomy class on `ℝ × M³`. An orthogonal complex structure `J` commuting
/// with the holonomy maps `∂_t` to a holonomy-fixed unit vector of `ℝ³`, so
/// `U(2)` needs a common fixed direction; `SU(2)` then forces the rotation of
/// the complementary plane to be trivial.
pub fn holonomy_class(linear_parts: &[[[i64; 3]; 3]]) -> (usize, GeometryClass) {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for m in linear_parts {
        for i in 0..3 {
            rows.push((0..3).map(|j| qi(m[i][j] - (i == j) as i64)).collect());
        }
    }
    let fixed = if rows.is_empty() { 3 } else { nullspace(&rows).len() };
    let class = match fixed {
        3 => GeometryClass::SpecialUnitary,
        0 => GeometryClass::LocallyKahlerOnly,
        _ => GeometryClass::KahlerOnly,
    };
    (fixed, class)
}

fn lift(m: [[i64; 3]; 3], t: [Q; 3]) -> AffineMap {
    let mut l = IDENTITY;
    for i in 0..3 {
        for j in 0..3 {
            l[i + 1][j + 1] = m[i][j];
        }
    }
    AffineMap::new(l, [qi(0), t[0], t[1], t[2]])
}

fn entry(name: &str, monodromy: &str, order: usize, hex: bool, gens: Vec<([[i64; 3]; 3], [Q; 3])>) -> Result<Flat3Entry> {
    let mut gram = euclidean_gram();
    if hex {
        gram[2][3] = Exact(q(1, 2));
        gram[3][2] = Exact(q(1, 2));
    }
    let a = OrbifoldAction {
        name: name.into(),
        ambient: FlatModel::unit(1)?,
        gram,
        generators: gens.iter().map(|(m, t)| lift(*m, *t)).collect(),
        order,
        kahler: false,
    };
    let elements = a.elements()?;
    let mut holonomy: Vec<[[i64; 3]; 3]> = Vec::new();
    for g in &elements {
        let m = [1, 2, 3].map(|i| [1, 2, 3].map(|j| g.linear[i][j]));
        if !holonomy.contains(&m) {
            holonomy.push(m);
        }
    }
    let (fixed, class) = holonomy_class(&holonomy);
    let mut free = true;
    for g in elements.iter().skip(1) {
        // On ℝ × M³ every element fixes t, so freeness is an empty fixed set in T³.
        match a.element_fixed_points(g) {
            Ok(p) if p.is_empty() => {}
            _ => free = false,
        }
    }
    Ok(Flat3Entry { name: name.into(), monodromy: monodromy.into(), holonomy_order: holonomy.len(), fixed_directions: fixed, class, free })
}

const ID3: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// `T³, F₂, F₃, F₄, F₆, F₂,₂` as quotients of `T³`, coordinates `(x, y, z)`
/// with the screw axis along `x`.
pub fn flat3_catalogue() -> Result<Vec<Flat3Entry>> {
    let half = q(1, 2);
    let zero = qi(0);
    Ok(vec![
        entry("T3", "1", 1, false, vec![(ID3, [zero; 3])])?,
        entry("F2", "Z2", 2, false, vec![([[1, 0, 0], [0, -1, 0], [0, 0, -1]], [half, zero, half])])?,
        entry("F3", "Z3", 3, true, vec![([[1, 0, 0], [0, -1, -1], [0, 1, 0]], [q(1, 3), zero, zero])])?,
        entry("F4", "Z4", 4, false, vec![([[1, 0, 0], [0, 0, -1], [0, 1, 0]], [q(1, 4), zero, zero])])?,
        entry("F6", "Z6", 6, true, vec![([[1, 0, 0], [0, 0, -1], [0, 1, 1]], [q(1, 6), zero, zero])])?,
        entry(
            "F22",
            "Z2xZ2",
            4,
            false,
            vec![
                ([[1, 0, 0], [0, -1, 0], [0, 0, -1]], [half, zero, half]),
                ([[-1, 0, 0], [0, -1, 0], [0, 0, 1]], [zero, half, half]),
            ],
        )?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_holonomy_is_special_unitary() {
        assert_eq!(holonomy_class(&[ID3]).1, GeometryClass::SpecialUnitary);
        assert_eq!(holonomy_class(&[]).1, GeometryClass::SpecialUnitary);
    }
}
