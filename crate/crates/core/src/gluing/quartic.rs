//! Quartic jets of the Taub-NUT potential at the nut.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kahler::{complex_hessian, ComplexPoint, HermitianForm, Potential, PotentialJet};
use crate::models::taub_nut::{form_in_chart, TaubNut, TaubNutPotential};

/// Exponents `(α₁, α₂, β₁, β₂)` of `z₁^α₁ z₂^α₂ z̄₁^β₁ z̄₂^β₂`.
pub type Monomial = [u32; 4];

/// All 35 monomials of total degree 4, in a fixed order.
pub fn quartic_monomials() -> Vec<Monomial> {
    let mut out = Vec::with_capacity(35);
    for a1 in 0..=4u32 {
        for a2 in 0..=4 - a1 {
            for b1 in 0..=4 - a1 - a2 {
                out.push([a1, a2, b1, 4 - a1 - a2 - b1]);
            }
        }
    }
    out
}

fn conjugate(m: &Monomial) -> Monomial {
    [m[2], m[3], m[0], m[1]]
}

fn cpow(z: Complex64, n: u32) -> Complex64 {
    z.powu(n)
}

fn monomial_value(m: &Monomial, z: &[Complex64; 2]) -> Complex64 {
    cpow(z[0], m[0]) * cpow(z[1], m[1]) * cpow(z[0].conj(), m[2]) * cpow(z[1].conj(), m[3])
}

/// `∂^{d} z^n / ∂z^d` as a coefficient times the lowered power.
fn lower(n: u32, d: u32) -> Option<(f64, u32)> {
    if d > n {
        return None;
    }
    let c = (0..d).fold(1.0, |acc, i| acc * (n - i) as f64);
    Some((c, n - d))
}

/// A real polynomial `Σ c_m m(z)` of degree 4 with `c_{m̄} = conj(c_m)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuarticJet {
    pub monomials: Vec<Monomial>,
    pub coeffs: Vec<Complex64>,
}

impl QuarticJet {
    pub fn zero() -> Self {
        let monomials = quartic_monomials();
        let coeffs = vec![Complex64::new(0.0, 0.0); monomials.len()];
        QuarticJet { monomials, coeffs }
    }

    /// Builds a jet from `(monomial, coefficient)` pairs; conjugate terms must be listed too.
    pub fn from_terms(terms: &[(Monomial, Complex64)]) -> Self {
        let mut j = Self::zero();
        for (m, c) in terms {
            let i = j.monomials.iter().position(|x| x == m).expect("degree-4 monomial");
            j.coeffs[i] += *c;
        }
        j
    }

    /// `−(|z₁|⁴ − 4|z₁z₂|² + |z₂|⁴)/(64m²)`, the quartic term of Taub-NUT of mass `m`.
    pub fn taub_nut(mass: f64) -> Self {
        let c = -1.0 / (64.0 * mass * mass);
        Self::from_terms(&[
            ([2, 0, 2, 0], Complex64::new(c, 0.0)),
            ([1, 1, 1, 1], Complex64::new(-4.0 * c, 0.0)),
            ([0, 2, 0, 2], Complex64::new(c, 0.0)),
        ])
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, z: &[Complex64; 2]) -> f64 {
        self.monomials.iter().zip(&self.coeffs).map(|(m, c)| (c * monomial_value(m, z)).re).sum()
    }

    /// Value, `∂P/∂z_j` and `∂²P/∂z_j∂z̄_k`.
    pub fn jet(&self, z: &[Complex64; 2]) -> PotentialJet {
        let zero = Complex64::new(0.0, 0.0);
        let mut grad = [zero; 2];
        let mut hess = [[zero; 2]; 2];
        let mut value = 0.0;
        for (m, c) in self.monomials.iter().zip(&self.coeffs) {
            if *c == zero {
                continue;
            }
            value += (c * monomial_value(m, z)).re;
            for j in 0..2 {
                if let Some((cj, _)) = lower(m[j], 1) {
                    let mut e = *m;
                    e[j] -= 1;
                    grad[j] += c * cj * monomial_value(&e, z);
                    for k in 0..2 {
                        if let Some((ck, _)) = lower(e[2 + k], 1) {
                            let mut f = e;
                            f[2 + k] -= 1;
                            hess[j][k] += c * cj * ck * monomial_value(&f, z);
                        }
                    }
                }
            }
        }
        PotentialJet { value, grad, hess: HermitianForm::new(hess).symmetrized() }
    }

    /// Coefficient norm of the flat Laplacian `4Σ∂_j∂̄_j P`, a quadratic polynomial.
    pub fn laplacian_norm(&self) -> f64 {
        let mut out: Vec<([u32; 4], Complex64)> = Vec::new();
        for (m, c) in self.monomials.iter().zip(&self.coeffs) {
            for j in 0..2 {
                if m[j] > 0 && m[2 + j] > 0 {
                    let mut e = *m;
                    e[j] -= 1;
                    e[2 + j] -= 1;
                    let v = c * 4.0 * (m[j] * m[2 + j]) as f64;
                    match out.iter_mut().find(|(k, _)| *k == e) {
                        Some(slot) => slot.1 += v,
                        None => out.push((e, v)),
                    }
                }
            }
        }
        out.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Component of bidegree `(a, b)` in `(z, z̄)`.
    pub fn bidegree_part(&self, a: u32, b: u32) -> Self {
        let mut out = self.clone();
        for (m, c) in out.monomials.iter().zip(out.coeffs.iter_mut()) {
            if m[0] + m[1] != a || m[2] + m[3] != b {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Largest `|P(Az) − P(z)|` over the maps and sample points, relative to `max |P|`.
    pub fn invariance_deviation(&self, maps: &[[[Complex64; 2]; 2]], points: &[[Complex64; 2]]) -> f64 {
        let mut dev: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for z in points {
            let v = self.eval(z);
            scale = scale.max(v.abs());
            for a in maps {
                let w = [a[0][0] * z[0] + a[0][1] * z[1], a[1][0] * z[0] + a[1][1] * z[1]];
                dev = dev.max((self.eval(&w) - v).abs());
            }
        }
        if scale == 0.0 {
            dev
        } else {
            dev / scale
        }
    }

    fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x * a + y * b).collect();
        QuarticJet { monomials: self.monomials.clone(), coeffs }
    }
}

/// Generators `τ(s₁, s₂) = (s₂, −s₁)` and `ζ_k = diag(e^{iπ/(k−2)}, e^{−iπ/(k−2)})` in the
/// holomorphic chart of Taub-NUT.
pub fn dihedral_chart_generators(k: u32) -> Vec<[[Complex64; 2]; 2]> {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let a = std::f64::consts::PI / (k as f64 - 2.0);
    let e = Complex64::from_polar(1.0, a);
    vec![[[o, one], [-one, o]], [[e, o], [o, e.conj()]]]
}

/// Taub-NUT potential on a ball around the nut, or the flat potential for `m = 0`.
#[derive(Clone, Debug)]
pub struct TnPotentialField {
    pub mass: f64,
    pub radius: f64,
    potential: Option<TaubNutPotential>,
}

impl TnPotentialField {
    pub fn taub_nut(&self) -> Option<&TaubNutPotential> {
        self.potential.as_ref()
    }
}

impl Potential for TnPotentialField {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        match &self.potential {
            Some(t) => t.value(p),
            None => Ok(0.5 * p.norm_sqr()),
        }
    }

    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        match &self.potential {
            Some(t) => t.jet(p),
            None => Some(Ok(PotentialJet::radial(&p.z, crate::jet::Jet::new(0.5 * p.norm_sqr(), 0.5, 0.0)))),
        }
    }

    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        match &self.potential {
            Some(t) => t.contains(p, radius),
            None => true,
        }
    }
}

/// Potential `φ_TN` with `i∂∂̄φ_TN = ω_TN` on the ball of `radius` about the nut,
/// normalized by `φ_TN(0) = 0` and invariance under the torus rotating `s₁, s₂`,
/// which removes every pluriharmonic ambiguity of degree at most two.
pub fn recover_tn_potential(mass: f64, radius: f64) -> Result<TnPotentialField> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("ball radius {radius} must be positive")));
    }
    if mass < 0.0 || !mass.is_finite() {
        return Err(Error::InvalidParameter(format!("mass {mass} must be nonnegative")));
    }
    let potential = if mass == 0.0 { None } else { Some(TaubNut::new(mass)?.potential()?) };
    Ok(TnPotentialField { mass, radius, potential })
}

/// Largest `|i∂∂̄φ_TN − ω_TN|` over `points` given in `w`-coordinates, with
/// `ω_TN` from the Gibbons–Hawking formulas transported to the chart.
pub fn tn_form_residual(field: &TnPotentialField, points: &[[f64; 4]], step: f64) -> Result<f64> {
    let Some(pot) = field.taub_nut() else {
        return Ok(0.0);
    };
    let tn = TaubNut::new(pot.mass())?;
    let mut worst: f64 = 0.0;
    for w in points {
        let expected = form_in_chart(&tn.eval(w)?.omega, &tn.chart_jacobian(w))?;
        let s = tn.chart(w);
        let got = complex_hessian(pot, &ComplexPoint::new(s[0], s[1]), step)?;
        worst = worst.max(got.sub(&expected).frobenius());
    }
    Ok(worst)
}

/// Sample points on the sphere of radius `r`, away from the coordinate axes.
pub fn shell_points(r: f64, count: usize, seed: u64) -> Vec<[Complex64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(n > 0.1 && n <= 1.0) {
            continue;
        }
        let z = [Complex64::new(v[0], v[1]) * (r / n), Complex64::new(v[2], v[3]) * (r / n)];
        if z[0].norm() > 0.1 * r && z[1].norm() > 0.1 * r {
            out.push(z);
        }
    }
    out
}

/// Least-squares quartic through `φ − |s|²/2` on the sphere of radius `r`.
pub fn fit_quartic_on_shell<P: Potential + ?Sized>(phi: &P, r: f64, count: usize, seed: u64) -> Result<QuarticJet> {
    let monomials = quartic_monomials();
    // Real unknowns: one per self-conjugate monomial, two per conjugate pair.
    let mut unknowns: Vec<(usize, Option<usize>)> = Vec::new();
    for (i, m) in monomials.iter().enumerate() {
        let c = conjugate(m);
        let ci = monomials.iter().position(|x| *x == c).expect("closed under conjugation");
        if ci == i {
            unknowns.push((i, None));
        } else if i < ci {
            unknowns.push((i, Some(ci)));
        }
    }
    let cols = unknowns.iter().map(|u| if u.1.is_some() { 2 } else { 1 }).sum::<usize>();
    let points = shell_points(r, count, seed);
    let mut a = DMatrix::zeros(points.len(), cols);
    let mut rhs = DVector::zeros(points.len());
    for (row, z) in points.iter().enumerate() {
        let p = ComplexPoint::new(z[0], z[1]);
        rhs[row] = (phi.value(&p)? - 0.5 * p.norm_sqr()) / r.powi(4);
        let mut col = 0;
        for (i, pair) in &unknowns {
            let m = monomial_value(&monomials[*i], z) / r.powi(4);
            if pair.is_some() {
                a[(row, col)] = 2.0 * m.re;
                a[(row, col + 1)] = -2.0 * m.im;
                col += 2;
            } else {
                a[(row, col)] = m.re;
                col += 1;
            }
        }
    }
    let svd = a.svd(true, true);
    let x = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::FitIllConditioned(format!("quartic least squares: {e}")))?;
    let mut jet = QuarticJet::zero();
    let mut col = 0;
    for (i, pair) in &unknowns {
        match pair {
            Some(ci) => {
                jet.coeffs[*i] = Complex64::new(x[col], x[col + 1]);
                jet.coeffs[*ci] = Complex64::new(x[col], -x[col + 1]);
                col += 2;
            }
            None => {
                jet.coeffs[*i] = Complex64::new(x[col], 0.0);
                col += 1;
            }
        }
    }
    Ok(jet)
}

/// Quartic jet `θ₄` of `φ_TN` from fits on the shells `r₁ > r₂ > r₂/2`.
///
/// A single-shell fit differs from `θ₄` by `O(r²)` through the sextic term, so
/// consecutive shells are Richardson-extrapolated. The estimates from
/// `(r₁, r₂)` and `(r₂, r₂/2)` must agree within `tolerance` (relative); the
/// second one is returned.
pub fn extract_quartic_jet<P: Potential + ?Sized>(phi: &P, radii: [f64; 2], tolerance: f64) -> Result<QuarticJet> {
    let [r1, r2] = radii;
    if !(r1 > r2 && r2 > 0.0) {
        return Err(Error::InvalidParameter(format!("fit radii {radii:?} must be decreasing and positive")));
    }
    let r3 = 0.5 * r2;
    let c1 = fit_quartic_on_shell(phi, r1, 200, 11)?;
    let c2 = fit_quartic_on_shell(phi, r2, 200, 12)?;
    let c3 = fit_quartic_on_shell(phi, r3, 200, 13)?;
    if c1.norm().max(c2.norm()).max(c3.norm()) < 1e-13 {
        return Ok(QuarticJet::zero());
    }
    let extrapolate = |outer: &QuarticJet, ro: f64, inner: &QuarticJet, ri: f64| {
        let (a, b) = (ro * ro, ri * ri);
        inner.combine(a / (a - b), outer, -b / (a - b))
    };
    let e1 = extrapolate(&c1, r1, &c2, r2);
    let e2 = extrapolate(&c2, r2, &c3, r3);
    let diff = e1.combine(1.0, &e2, -1.0).norm() / e2.norm().max(e1.norm());
    if diff > tolerance {
        return Err(Error::FitIllConditioned(format!(
            "quartic estimates from radii ({r1}, {r2}) and ({r2}, {r3}) differ by {diff:.3e} (tolerance {tolerance:.1e})"
        )));
    }
    Ok(e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirty_five_monomials() {
        let m = quartic_monomials();
        assert_eq!(m.len(), 35);
        assert!(m.iter().all(|e| e.iter().sum::<u32>() == 4));
    }

    #[test]
    fn taub_nut_quartic_is_harmonic_and_invariant() {
        let q = QuarticJet::taub_nut(0.5);
        assert!(q.laplacian_norm() < 1e-15);
        let pts = shell_points(1.0, 50, 3);
        assert!(q.invariance_deviation(&dihedral_chart_generators(5), &pts) < 1e-14);
        assert_eq!(q.bidegree_part(2, 2), q);
        assert!(q.bidegree_part(3, 1).is_zero());
    }

    #[test]
    fn jet_matches_differences() {
        let q = QuarticJet::from_terms(&[
            ([3, 0, 0, 1], Complex64::new(0.3, -0.2)),
            ([0, 1, 3, 0], Complex64::new(0.3, 0.2)),
            ([1, 1, 1, 1], Complex64::new(0.7, 0.0)),
        ]);
        let z = [Complex64::new(0.4, -0.1), Complex64::new(0.2, 0.5)];
        let j = q.jet(&z);
        let fd = crate::kahler::complex_hessian_fd(
            &crate::kahler::FnPotential(|p: &ComplexPoint| q.eval(&p.z)),
            &ComplexPoint::new(z[0], z[1]),
            1e-3,
        )
        .unwrap();
        assert!(j.hess.sub(&fd).frobenius() < 1e-9);
    }
}
