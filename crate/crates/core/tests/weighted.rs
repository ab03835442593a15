use kummer_core::exec::Exec;
use kummer_core::grid::{GridDomain, ScalarField};
use kummer_core::weighted::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(a: f64) -> WeightSpec {
    WeightSpec::new(a, 1.0, 0.5, 0.01, EndSummand::Affine).unwrap()
}

fn end_grid(n: usize) -> GridDomain {
    GridDomain::new([n, 4, 4, 4], [1.0, 0.0, 0.0, 0.0], [8.0 / n as f64, 0.25, 0.25, 0.25], [false, true, true, true])
        .unwrap()
}

#[test]
fn weight_regimes_on_random_points() {
    let w = WeightFunction::new(0.01).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10_000 {
        let r = rng.gen_range(1.0..100.0);
        assert_eq!(w.eval(r, rng.gen_range(0.0..r)), r);
        let rho = rng.gen_range(0.02..NECK_ZONE);
        assert_eq!(w.eval(rng.gen_range(0.0..rho), rho), rho);
        let rho = rng.gen_range(0.0..0.01);
        assert_eq!(w.eval(rng.gen_range(0.0..0.5), rho), 0.01);
        let (p, q) = (rng.gen_range(0.01..0.02), rng.gen_range(0.01..0.02));
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        assert!(w.eval(0.0, lo) <= w.eval(0.0, hi));
        let rho = rng.gen_range(NECK_ZONE..3.0);
        let v = w.eval(rng.gen_range(0.0..rho.min(1.0)), rho);
        assert!((NECK_ZONE..=1.0).contains(&v));
    }
}

#[test]
fn decay_at_the_weight_has_unit_norm() {
    let u = ScalarField::from_fn(end_grid(32), |x| x[0].powf(-1.5), Exec::default());
    let n = weighted_norm(&u, &spec(1.5), 0, |x: &[f64; 4]| x[0], Exec::default()).unwrap();
    assert!((n - 1.0).abs() < 1e-12, "{n}");
}

#[test]
fn norm_is_monotone_under_restriction() {
    let f = |x: &[f64; 4]| x[0].powf(-1.0) * (1.0 + 0.3 * (6.0 * x[1]).sin());
    let big = ScalarField::from_fn(end_grid(32), f, Exec::default());
    let small_domain = GridDomain::new([16, 4, 4, 4], [1.0, 0.0, 0.0, 0.0], [0.25; 4], [false, true, true, true]).unwrap();
    let small = ScalarField::from_fn(small_domain, f, Exec::default());
    let r = |x: &[f64; 4]| x[0];
    for k in 0..=2 {
        let a = weighted_holder_norm(&small, &spec(1.0), k, r, Exec::default()).unwrap();
        let b = weighted_holder_norm(&big, &spec(1.0), k, r, Exec::default()).unwrap();
        assert!(a <= b + 1e-12, "k={k}: {a} > {b}");
    }
}

#[test]
fn norm_report_round_trips_and_rejects_unknown_keys() {
    let rep = NormReport { norm: "C0".into(), spec: spec(1.0), domain: end_grid(4), value: 0.5 };
    let s = serde_json::to_string(&rep).unwrap();
    assert_eq!(serde_json::from_str::<NormReport>(&s).unwrap(), rep);
    let bad = s.replacen("{", "{\"extra\":1,", 1);
    assert!(serde_json::from_str::<NormReport>(&bad).is_err());
}

#[test]
fn green_operator_is_second_order() {
    let exact = |r: f64| -1.0 / (6.0 * r * r) + 0.5 - r / 3.0;
    let err = |h: f64| {
        let f = RadialSamples::from_fn(1.0, 20.0, h, |r| r.powi(-4)).unwrap();
        let g = green_m1(&f, false).unwrap();
        (0..g.len()).map(|i| (g.values[i] - exact(f.radius(i))).abs()).fold(0.0, f64::max)
    };
    let ratio = err(0.02) / err(0.01);
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
}

#[test]
fn green_operator_is_linear() {
    let f = RadialSamples::from_fn(1.0, 40.0, 0.05, |r| r.powi(-3)).unwrap();
    let g = RadialSamples::from_fn(1.0, 40.0, 0.05, |r| r.powi(-4) * r.cos()).unwrap();
    let sum = RadialSamples { values: f.values.iter().zip(&g.values).map(|(a, b)| 2.0 * a - b).collect(), ..f.clone() };
    let (gf, gg, gs) = (green_m1(&f, false).unwrap(), green_m1(&g, false).unwrap(), green_m1(&sum, false).unwrap());
    for i in 0..gs.len() {
        assert!((gs.values[i] - 2.0 * gf.values[i] + gg.values[i]).abs() < 1e-12);
    }
}

#[test]
fn indicator_source_at_three() {
    let ind = |r: f64| if (1.0..=2.0).contains(&r) { 1.0 } else { 0.0 };
    assert!((green_m1_at(ind, 1.0, 3.0, 1e-12) + 1.5).abs() < 1e-9);
}

#[test]
fn weighted_green_ratio_is_finite_and_bounded() {
    let src = [GreenSource::PowerLaw, GreenSource::Oscillating, GreenSource::Compact];
    for a in [1.0, 1.5] {
        let rep = verify_weighted_green_bound(a, 1.0, &src, &[32.0, 64.0, 128.0], 0.02).unwrap();
        assert!(rep.drift < 0.1, "a={a}: {}", rep.drift);
        // The limit of the power-law ratio is 1/(a(a+1)).
        assert!(rep.rows.iter().all(|r| r.ratio <= 1.0 / (a * (a + 1.0)) + 1e-9));
    }
    let compact = verify_weighted_green_bound(1.0, 1.0, &[GreenSource::Compact], &[16.0], 0.02).unwrap();
    assert!(compact.rows[0].ratio.is_finite());
}

#[test]
fn moser_ratio_stable_for_affine_harmonic() {
    let g = MoserGrid { m: 1, base: 256, fibre: 3 };
    let u = |x: &[f64; 4]| 1.0 + 0.5 * x[0];
    let a = moser_ratio(&u, 8.0, g, Exec::default()).unwrap();
    let b = moser_ratio(&u, 16.0, g, Exec::default()).unwrap();
    assert!(a.laplacian_term < 1e-6 * a.l2_term);
    assert!((a.ratio / b.ratio - 1.0).abs() < 0.1);
}

#[test]
fn critical_sets_from_the_list() {
    use num_rational::Rational64;
    assert_eq!(
        critical_exponents(1).unwrap().in_range(-10, 10),
        vec![Rational64::new(1, 2), Rational64::new(3, 2)]
    );
    assert_eq!(critical_exponents(2).unwrap().multiplicity(Rational64::from_integer(1)), 2);
}

proptest! {
    #[test]
    fn projection_algebra(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = end_grid(6);
        let vals: Vec<f64> = (0..d.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = ScalarField::from_values(d, vals).unwrap();
        let p = torus_projection(&u).unwrap();
        for i in 0..u.values.len() {
            prop_assert!((u.values[i] - p.mean.values[i] - p.oscillating.values[i]).abs() <= 1e-12);
        }
        let pp = torus_projection(&p.mean).unwrap();
        prop_assert!(pp.oscillating.sup_norm() < 1e-12);
        prop_assert!(torus_projection(&p.oscillating).unwrap().mean.sup_norm() < 1e-12);
        prop_assert!(p.mean.sup_norm() <= u.sup_norm() + 1e-15);
    }

    #[test]
    fn norm_scales_linearly(c in -5.0f64..5.0) {
        let u = ScalarField::from_fn(end_grid(8), |x| (3.0 * x[2]).cos() / x[0], Exec::default());
        let r = |x: &[f64; 4]| x[0];
        let n1 = weighted_norm(&u, &spec(1.0), 1, r, Exec::default()).unwrap();
        let nc = weighted_norm(&u.map(|v| c * v), &spec(1.0), 1, r, Exec::default()).unwrap();
        prop_assert!((nc - c.abs() * n1).abs() <= 1e-12 * (1.0 + n1));
    }
}
