use std::collections::BTreeMap;
use std::time::Instant;

use kummer_core::error::Error;
use kummer_core::topology::action::{blocks, diag, euclidean_gram, AffineMap};
use kummer_core::topology::exact::{q, qi};
use kummer_core::topology::*;
use kummer_core::models::FlatModel;
use proptest::prelude::*;

const REFINEMENT: i64 = 192;

fn counts(inv: &Inventory) -> BTreeMap<String, usize> {
    inv.points.clone()
}

#[test]
fn flat_inventories_match_the_catalogue() {
    let expect: [(&str, &[(&str, usize)]); 8] = [
        ("x1", &[("Z2", 8)]),
        ("x2", &[("Z2", 4)]),
        ("x22", &[("Z2", 2)]),
        ("hitchin", &[("Z2", 2)]),
        ("alg-2", &[("Z2", 4)]),
        ("alg-3", &[("Z3", 3)]),
        ("alg-4", &[("Z2", 1), ("Z4", 2)]),
        ("alg-6", &[("Z2", 1), ("Z3", 1), ("Z6", 1)]),
    ];
    for (name, pts) in expect {
        let inv = quotient_singularity_inventory(name, None).unwrap();
        let want: BTreeMap<String, usize> = pts.iter().map(|(l, n)| (l.to_string(), *n)).collect();
        assert_eq!(counts(&inv), want, "{name}");
    }
}

#[test]
fn enumeration_agrees_with_brute_force() {
    let start = Instant::now();
    for name in CATALOGUE.iter().filter(|n| !n.starts_with("tn-")) {
        let a = catalogue_action(name).unwrap();
        let exact = a.enumerate_fixed_points().unwrap();
        let brute = a.brute_force_fixed_points(REFINEMENT).unwrap();
        assert_eq!(exact, brute, "{name}");
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "{:?}", start.elapsed());
}

#[test]
fn kahler_quotients_have_special_unitary_isotropy() {
    for name in ["x1", "x2", "hitchin", "alg-2", "alg-3", "alg-4", "alg-6"] {
        let a = catalogue_action(name).unwrap();
        assert!(a.enumerate_fixed_points().unwrap().iter().all(|r| r.special_unitary), "{name}");
    }
}

#[test]
fn rotation_on_both_factors_in_the_same_sense_is_not_special_unitary() {
    let r = [[0, -1], [1, 0]];
    let a = OrbifoldAction {
        name: "z4-same-sense".into(),
        ambient: FlatModel::unit(2).unwrap(),
        gram: euclidean_gram(),
        generators: vec![AffineMap::linear_only(blocks(r, r))],
        order: 4,
        kahler: true,
    };
    let recs = a.enumerate_fixed_points().unwrap();
    for r in &recs {
        assert_eq!(r.special_unitary, r.isotropy == Isotropy::Cyclic(2), "{:?}", r.isotropy);
    }
}

#[test]
fn reflection_has_a_positive_dimensional_fixed_set() {
    let a = OrbifoldAction {
        name: "reflection".into(),
        ambient: FlatModel::unit(1).unwrap(),
        gram: euclidean_gram(),
        generators: vec![AffineMap::linear_only(diag([1, 1, -1, -1]))],
        order: 2,
        kahler: true,
    };
    assert_eq!(a.enumerate_fixed_points().unwrap_err(), Error::NonDiscreteFixedSet);
    assert_eq!(a.brute_force_fixed_points(REFINEMENT).unwrap_err(), Error::NonDiscreteFixedSet);
}

#[test]
fn wrong_declared_order_is_rejected() {
    let mut a = catalogue_action("x1").unwrap();
    a.order = 4;
    assert!(a.elements().is_err());
}

#[test]
fn sigma_is_free_and_tau_pairs_the_x2_points() {
    let x1 = catalogue_action("x1").unwrap();
    assert!(x1.element_fixed_points(&sigma()).unwrap().is_empty());
    let x2 = catalogue_action("x2").unwrap();
    let recs = x2.enumerate_fixed_points().unwrap();
    let elements = x2.elements().unwrap();
    let orbit_of = |p: &[kummer_core::topology::exact::Q; 4]| -> usize {
        recs.iter()
            .position(|r| elements.iter().any(|g| x2.reduce(&g.apply(p)) == r.location.map(|e| e.0)))
            .unwrap()
    };
    let images: Vec<usize> = recs.iter().map(|r| orbit_of(&tau().apply(&r.location.map(|e| e.0)))).collect();
    assert!(images.iter().enumerate().all(|(i, &j)| i != j && images[j] == i), "{images:?}");
}

#[test]
fn catalogue_euler_characteristics_match_the_families() {
    let cases = [
        ("hitchin", None, AlfFamily::Dihedral, 2),
        ("tn-zk", Some(4), AlfFamily::Cyclic, 3),
        ("tn-dk", Some(5), AlfFamily::Dihedral, 5),
    ];
    for (name, k, family, index) in cases {
        let inv = quotient_singularity_inventory(name, k).unwrap();
        let per_point = if name.starts_with("tn-") {
            vec![inv.curves]
        } else {
            curves_per_point(&catalogue_action(name).unwrap().enumerate_fixed_points().unwrap()).unwrap()
        };
        let scales = vec![qi(1); inv.total];
        let ledger = divisor_class_ledger(&inv, &per_point, q(1, 20), &scales).unwrap();
        let table = euler_eta_table(family, index).unwrap();
        assert_eq!(ledger.euler, table.chi, "{name}");
        assert_eq!(ledger.entries.len() as i64, table.divisors, "{name}");
    }
}

#[test]
fn x1_ledger_has_eight_curves_and_local_coefficients() {
    let a = catalogue_action("x1").unwrap();
    let recs = a.enumerate_fixed_points().unwrap();
    let inv = inventory_of(&a, &recs).unwrap();
    let per_point = curves_per_point(&recs).unwrap();
    let scales: Vec<_> = (1..=8).map(qi).collect();
    let base = divisor_class_ledger(&inv, &per_point, q(1, 20), &scales).unwrap();
    assert_eq!(base.entries.len(), 8);
    let mut bumped = scales.clone();
    bumped[3] = q(7, 2);
    let other = divisor_class_ledger(&inv, &per_point, q(1, 20), &bumped).unwrap();
    let changed: Vec<usize> = base.entries.iter().zip(&other.entries).filter(|(a, b)| a != b).map(|(a, _)| a.point).collect();
    assert_eq!(changed, vec![3]);
    assert_eq!(other.entries[3].coefficient, Exact(-q(1, 20) * q(7, 2)));
}

#[test]
fn dihedral_rows() {
    let d2 = euler_eta_table(AlfFamily::Dihedral, 2).unwrap();
    assert_eq!((d2.chi, d2.tau, d2.eta_ad), (3, -2, Some(Exact(qi(0)))));
    assert_eq!(d2.mass, MassSign::Zero);
    assert_eq!(mass_sign(AlfFamily::Cyclic, 3), MassSign::Positive);
    assert_eq!(mass_sign(AlfFamily::Dihedral, 0), MassSign::Negative);
}

#[test]
fn fillability_pairs() {
    for (k, partner) in [(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)] {
        let f = orientation_fillability(k).unwrap();
        assert!(f.positive && f.negative, "{k}");
        assert_eq!(f.reversed_by, Some(partner));
    }
    for k in 5..40 {
        let f = orientation_fillability(k).unwrap();
        assert!(f.positive && !f.negative && f.reversed_by.is_none(), "{k}");
    }
}

#[test]
fn six_flat_manifolds_with_computed_classes() {
    let cat = flat3_catalogue().unwrap();
    let classes: Vec<(&str, GeometryClass)> = cat.iter().map(|e| (e.name.as_str(), e.class)).collect();
    assert_eq!(
        classes,
        vec![
            ("T3", GeometryClass::SpecialUnitary),
            ("F2", GeometryClass::KahlerOnly),
            ("F3", GeometryClass::KahlerOnly),
            ("F4", GeometryClass::KahlerOnly),
            ("F6", GeometryClass::KahlerOnly),
            ("F22", GeometryClass::LocallyKahlerOnly),
        ]
    );
    assert!(cat.iter().all(|e| e.free));
    assert_eq!(cat.iter().map(|e| e.holonomy_order).collect::<Vec<_>>(), vec![1, 2, 3, 4, 6, 4]);
}

proptest! {
    #[test]
    fn family_identities_are_exact(k in 0i64..200, dihedral in any::<bool>()) {
        let family = if dihedral { AlfFamily::Dihedral } else { AlfFamily::Cyclic };
        let r = euler_eta_table(family, k).unwrap();
        prop_assert!(identities_hold(&r));
        prop_assert_eq!(r.divisors, k);
        let f = orientation_fillability(k).unwrap();
        prop_assert_eq!(f.negative, k <= 4);
    }
}
