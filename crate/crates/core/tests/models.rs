use kummer_core::fit::fit_decay_rate;
use kummer_core::kahler::{complex_hessian, ma_density_ratio, ComplexPoint, HermitianForm, Potential};
use kummer_core::models::action::{apply, tau, zeta};
use kummer_core::models::taub_nut::{form_in_chart, hopf_differential, wedge};
use kummer_core::models::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_w(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> [f64; 4] {
    loop {
        let w: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            let r = rng.gen_range(lo..hi);
            return w.map(|v| v * r / n);
        }
    }
}

#[test]
fn eguchi_hanson_is_ricci_flat() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let flat = HermitianForm::flat();
    for _ in 0..1000 {
        let p = ComplexPoint::from_real(random_w(&mut rng, 0.5, 8.0));
        let h = complex_hessian(&EguchiHanson, &p, 1e-3).unwrap();
        assert!((ma_density_ratio(&h, &flat).unwrap() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn eguchi_hanson_value_and_parity() {
    let p = ComplexPoint::from_real([1.0, 0.0, 0.0, 0.0]);
    let expected = 0.5 * (2f64.sqrt() - (1.0 + 2f64.sqrt()).ln());
    assert!((eh_potential(&p).unwrap() - expected).abs() < 1e-15);
    let q = ComplexPoint::from_real([0.3, -0.2, 0.7, 0.1]);
    assert_eq!(eh_potential(&q).unwrap(), eh_potential(&q.scale(-1.0)).unwrap());
}

#[test]
fn eguchi_hanson_decay_rates() {
    let dir = [0.6, 0.0, 0.0, 0.8];
    let mut pot = Vec::new();
    let mut form = Vec::new();
    for i in 0..8 {
        let r = 8.0 * 2f64.powf(i as f64 * 3.0 / 7.0);
        let p = ComplexPoint::from_real(dir.map(|v| v * r));
        pot.push((r, (eh_potential(&p).unwrap() - 0.5 * r * r).abs()));
        let h = complex_hessian(&EguchiHanson, &p, 1e-3).unwrap();
        form.push((r, h.sub(&HermitianForm::flat()).frobenius()));
    }
    let a = fit_decay_rate(&pot).unwrap();
    let b = fit_decay_rate(&form).unwrap();
    assert!((a.slope + 2.0).abs() < 0.05, "{a:?}");
    assert!((b.slope + 4.0).abs() < 0.1, "{b:?}");
}

#[test]
fn cyclic_ale_is_ricci_flat_and_asymptotically_flat() {
    let gh = GibbonsHawking::ale_axial(&[-1.0, 0.0, 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let p = ComplexPoint::from_real(random_w(&mut rng, 0.3, 6.0));
        if !gh.contains(&p, 1e-2) {
            continue;
        }
        let h = complex_hessian(&gh, &p, 1e-3).unwrap();
        assert!((ma_density_ratio(&h, &HermitianForm::flat()).unwrap() - 1.0).abs() < 1e-8);
        assert!(h.is_positive());
    }
    let dir = [0.5, 0.1, -0.7, 0.5];
    let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let samples: Vec<(f64, f64)> = (0..8)
        .map(|i| {
            let r = 8.0 * 2f64.powf(i as f64 * 3.0 / 7.0);
            let p = ComplexPoint::from_real(dir.map(|v| v * r / n));
            (r, (gh.value(&p).unwrap() - 0.5 * r * r).abs())
        })
        .collect();
    let fit = fit_decay_rate(&samples).unwrap();
    assert!((fit.slope + 2.0).abs() < 0.1, "{fit:?}");
}

#[test]
fn symmetric_centers_give_swap_invariant_potential() {
    let data = GibbonsHawkingData { centers: vec![[0.0, 0.0, -0.7], [0.0, 0.0, 0.7]], kind: GhKind::Ale };
    let p = ComplexPoint::new(num_complex::Complex64::new(0.4, 0.9), num_complex::Complex64::new(-1.2, 0.3));
    let q = ComplexPoint::new(p.z[1], p.z[0]);
    let (a, b) = (gh_ale_potential(&data, &p).unwrap(), gh_ale_potential(&data, &q).unwrap());
    assert!((a - b).abs() < 1e-12 * a.abs());
    let bad = GibbonsHawkingData { centers: vec![[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]], kind: GhKind::Ale };
    assert!(matches!(gh_ale_potential(&data, &p).and(gh_ale_potential(&bad, &p)), Err(kummer_core::Error::CenterCollision(..))));
}

#[test]
fn taub_nut_volume_ratio_is_one_half() {
    let tn = TaubNut::new(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let f = tn.eval(&random_w(&mut rng, 0.05, 4.0)).unwrap();
        assert!((TaubNut::volume_ratio(&f) - 0.5).abs() < 1e-8);
    }
}

fn d_of_one_form(f: impl Fn(&[f64; 4]) -> [f64; 4], w: &[f64; 4], h: f64) -> [[f64; 4]; 4] {
    let mut d = [[0.0; 4]; 4];
    for a in 0..4 {
        let mut wp = *w;
        let mut wm = *w;
        wp[a] += h;
        wm[a] -= h;
        let (fp, fm) = (f(&wp), f(&wm));
        for b in 0..4 {
            // (dθ)_{ab} = ∂_a θ_b − ∂_b θ_a; accumulate ∂_a θ_b here.
            d[a][b] += (fp[b] - fm[b]) / (2.0 * h);
            d[b][a] -= (fp[b] - fm[b]) / (2.0 * h);
        }
    }
    d
}

#[test]
fn connection_curvature_is_hodge_dual_of_dv() {
    let m = 0.7;
    let tn = TaubNut::new(m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let w = random_w(&mut rng, 0.3, 2.0);
        let dtheta = d_of_one_form(|v| tn.connection(v).unwrap(), &w, 1e-5);
        let x = hopf_map(&w);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let grad = x.map(|xa| -2.0 * m * xa / (r * r * r));
        let dx = hopf_differential(&w);
        let (w23, w31, w12) = (wedge(&dx[1], &dx[2]), wedge(&dx[2], &dx[0]), wedge(&dx[0], &dx[1]));
        for a in 0..4 {
            for b in 0..4 {
                let star = grad[0] * w23[a][b] + grad[1] * w31[a][b] + grad[2] * w12[a][b];
                assert!((dtheta[a][b] - star).abs() < 1e-7, "{a}{b}: {} vs {star}", dtheta[a][b]);
            }
        }
    }
}

#[test]
fn kahler_and_holomorphic_forms_are_closed() {
    let tn = TaubNut::new(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-4;
    for _ in 0..20 {
        let w = random_w(&mut rng, 0.3, 2.0);
        let deriv = |a: usize| {
            let (mut wp, mut wm) = (w, w);
            wp[a] += h;
            wm[a] -= h;
            let (p, q) = (tn.eval(&wp).unwrap(), tn.eval(&wm).unwrap());
            let d = |x: &[[f64; 4]; 4], y: &[[f64; 4]; 4]| {
                let mut o = [[0.0; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        o[i][j] = (x[i][j] - y[i][j]) / (2.0 * h);
                    }
                }
                o
            };
            [d(&p.omega, &q.omega), d(&p.big_omega_re, &q.big_omega_re), d(&p.big_omega_im, &q.big_omega_im)]
        };
        let ders: Vec<_> = (0..4).map(deriv).collect();
        for form in 0..3 {
            for a in 0..4 {
                for b in a + 1..4 {
                    for c in b + 1..4 {
                        let v = ders[a][form][b][c] + ders[b][form][c][a] + ders[c][form][a][b];
                        assert!(v.abs() < 1e-6, "form {form} component {a}{b}{c}: {v}");
                    }
                }
            }
        }
    }
}

#[test]
fn dihedral_action_preserves_taub_nut() {
    let tn = TaubNut::new(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let points: Vec<[f64; 4]> = (0..1000).map(|_| random_w(&mut rng, 0.1, 3.0)).collect();
    for k in [3, 4, 6] {
        let action = IsometryAction::binary_dihedral(k).unwrap();
        for rep in apply_action(&action, &tn, &points).unwrap() {
            let worst = rep.harmonic.max(rep.connection).max(rep.kahler_form).max(rep.holomorphic_form).max(rep.metric);
            assert!(worst < 1e-9, "k = {k}: {rep:?}");
        }
    }
    // ζ_k fixes the Hopf image; τ reverses it.
    let w = [0.3, -0.4, 0.5, 0.1];
    let (x, xz, xt) = (hopf_map(&w), hopf_map(&apply(&zeta(5), &w)), hopf_map(&apply(&tau(), &w)));
    for a in 0..3 {
        assert!((x[a] - xz[a]).abs() < 1e-15 && (x[a] + xt[a]).abs() < 1e-15);
    }
}

#[test]
fn taub_nut_curvature_decays_cubically() {
    let m = 0.25;
    let tn = TaubNut::new(m).unwrap();
    let metric = |w: &[f64; 4]| Ok(tn.eval(w)?.metric);
    let dir = [0.4, 0.3, -0.5, 0.7];
    let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut samples = Vec::new();
    for i in 0..7 {
        let r = 4.0 * 2f64.powf(i as f64 * 0.5);
        let w = dir.map(|v| v * r.sqrt() / n);
        let norm = riemann_norm(&metric, &w, 0.005 * r.sqrt()).unwrap();
        let exact = 4.0 * 6f64.sqrt() * m / (r + 2.0 * m).powi(3);
        assert!((norm / exact - 1.0).abs() < 1e-4, "r = {r}: {norm} vs {exact}");
        samples.push((r, norm));
    }
    let fit = fit_decay_rate(&samples).unwrap();
    assert!(fit.slope <= -2.8, "{fit:?}");
}

#[test]
fn taub_nut_potential_matches_kahler_form() {
    let tn = TaubNut::new(0.5).unwrap();
    let pot = tn.potential().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let w = random_w(&mut rng, 0.05, 1.5);
        let s = tn.chart(&w);
        let mut jac = [[0.0; 4]; 4];
        let h = 1e-6;
        for b in 0..4 {
            let (mut wp, mut wm) = (w, w);
            wp[b] += h;
            wm[b] -= h;
            let (sp, sm) = (tn.chart(&wp), tn.chart(&wm));
            for j in 0..2 {
                let d = (sp[j] - sm[j]) / (2.0 * h);
                jac[2 * j][b] = d.re;
                jac[2 * j + 1][b] = d.im;
            }
        }
        let expected = form_in_chart(&tn.eval(&w).unwrap().omega, &jac).unwrap();
        let p = ComplexPoint::new(s[0], s[1]);
        let got = complex_hessian(&pot, &p, 1e-4).unwrap();
        assert!(got.sub(&expected).frobenius() < 1e-7 * (1.0 + expected.frobenius()));
    }
}

#[test]
fn dihedral_group_rejects_small_index_and_config_unknown_model() {
    assert!(IsometryAction::binary_dihedral(2).is_err());
    assert!(matches!(ModelConfig::preset("unknown-model"), Err(kummer_core::Error::UnknownModel(_))));
}

proptest! {
    #[test]
    fn hopf_preserves_norm(w in proptest::array::uniform4(-10.0f64..10.0)) {
        let x = hopf_map(&w);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let n2: f64 = w.iter().map(|v| v * v).sum();
        prop_assert!((r - n2).abs() <= 4.0 * f64::EPSILON * n2.max(1e-300));
    }

    #[test]
    fn eguchi_hanson_is_even(w in proptest::array::uniform4(-5.0f64..5.0)) {
        let p = ComplexPoint::from_real(w);
        prop_assume!(p.norm() > 1e-3);
        prop_assert_eq!(eh_potential(&p).unwrap(), eh_potential(&p.scale(-1.0)).unwrap());
    }
}
