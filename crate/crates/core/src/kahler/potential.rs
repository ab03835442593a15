use std::sync::Arc;

use num_complex::Complex64;

use super::forms::{ComplexPoint, HermitianForm};
use crate::error::{Error, Result};
use crate::jet::Jet;

/// Value, holomorphic gradient `∂φ/∂z_j` and complex Hessian of a real function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialJet {
    pub value: f64,
    pub grad: [Complex64; 2],
    pub hess: HermitianForm,
}

impl PotentialJet {
    pub fn zero() -> Self {
        PotentialJet {
            value: 0.0,
            grad: [Complex64::new(0.0, 0.0); 2],
            hess: HermitianForm::zero(),
        }
    }

    /// Jet of a function `g(|z|²)` given the jet of `g` in `s = |z|²`.
    pub fn radial(z: &[Complex64; 2], g: Jet) -> Self {
        let (g1, g2) = (g.d1, g.d2);
        let grad = [z[0].conj() * g1, z[1].conj() * g1];
        let h12 = z[0].conj() * z[1] * g2;
        PotentialJet {
            value: g.v,
            grad,
            hess: HermitianForm::from_parts(
                g1 + g2 * z[0].norm_sqr(),
                g1 + g2 * z[1].norm_sqr(),
                h12,
            ),
        }
    }

    pub fn add(&self, o: &PotentialJet) -> Self {
        PotentialJet {
            value: self.value + o.value,
            grad: [self.grad[0] + o.grad[0], self.grad[1] + o.grad[1]],
            hess: self.hess.add(&o.hess),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        PotentialJet {
            value: self.value * c,
            grad: [self.grad[0] * c, self.grad[1] * c],
            hess: self.hess.scale(c),
        }
    }

    pub fn sub(&self, o: &PotentialJet) -> Self {
        self.add(&o.scale(-1.0))
    }

    /// Product rule for real functions:
    /// `∂∂̄(uv) = u∂∂̄v + v∂∂̄u + ∂u∂̄v + ∂v∂̄u`.
    pub fn mul(&self, o: &PotentialJet) -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (j, row) in m.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v = self.hess.m[j][k] * o.value
                    + o.hess.m[j][k] * self.value
                    + self.grad[j] * o.grad[k].conj()
                    + o.grad[j] * self.grad[k].conj();
            }
        }
        PotentialJet {
            value: self.value * o.value,
            grad: [
                self.grad[0] * o.value + o.grad[0] * self.value,
                self.grad[1] * o.value + o.grad[1] * self.value,
            ],
            hess: HermitianForm::new(m).symmetrized(),
        }
    }

    /// Jet of `u(z/λ)·λ²` from the jet of `u` at `z/λ` (the ε-dilation of potentials).
    pub fn dilated(&self, lambda: f64) -> Self {
        PotentialJet {
            value: self.value * lambda * lambda,
            grad: [self.grad[0] * lambda, self.grad[1] * lambda],
            hess: self.hess,
        }
    }
}

/// A real function on a chart, typically a Kähler potential.
pub trait Potential: Send + Sync {
    fn value(&self, p: &ComplexPoint) -> Result<f64>;

    /// Exact second-order data, when the potential supplies it.
    fn jet(&self, _p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        None
    }

    /// Whether the closed ball of `radius` around `p` lies in the domain.
    fn contains(&self, _p: &ComplexPoint, _radius: f64) -> bool {
        true
    }
}

impl<P: Potential + ?Sized> Potential for &P {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        (**self).value(p)
    }
    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        (**self).jet(p)
    }
    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        (**self).contains(p, radius)
    }
}

impl<P: Potential + ?Sized> Potential for Arc<P> {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        (**self).value(p)
    }
    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        (**self).jet(p)
    }
    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        (**self).contains(p, radius)
    }
}

/// `|z|²/2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlatPotential;

impl Potential for FlatPotential {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        Ok(0.5 * p.norm_sqr())
    }
    fn jet(&self, p: &ComplexPoint) -> Option<Result<PotentialJet>> {
        Some(Ok(PotentialJet::radial(&p.z, Jet::new(0.5 * p.norm_sqr(), 0.5, 0.0))))
    }
}

/// Potential given by a closure in real coordinates, without exact jets.
#[derive(Clone)]
pub struct FnPotential<F>(pub F);

impl<F> Potential for FnPotential<F>
where
    F: Fn(&ComplexPoint) -> f64 + Send + Sync,
{
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        Ok((self.0)(p))
    }
}

/// Forces the finite-difference path for a potential that has jets.
pub struct WithoutJet<P>(pub P);

impl<P: Potential> Potential for WithoutJet<P> {
    fn value(&self, p: &ComplexPoint) -> Result<f64> {
        self.0.value(p)
    }
    fn contains(&self, p: &ComplexPoint, radius: f64) -> bool {
        self.0.contains(p, radius)
    }
}

const D1: [f64; 5] = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
const D2: [f64; 5] = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];

/// Real Hessian in `(x₁, y₁, x₂, y₂)` by fourth-order central differences.
pub fn real_hessian_fd<P: Potential + ?Sized>(phi: &P, p: &ComplexPoint, h: f64) -> Result<[[f64; 4]; 4]> {
    if h <= 0.0 {
        return Err(Error::InvalidParameter(format!("step {h} must be positive")));
    }
    if !phi.contains(p, 2.0 * h * 2f64.sqrt()) {
        return Err(Error::StencilOutOfDomain { point: p.to_real(), radius: 2.0 * h });
    }
    let eval = |dx: [f64; 4]| phi.value(&p.shifted(dx));
    let mut out = [[0.0; 4]; 4];
    let f0 = eval([0.0; 4])?;
    for a in 0..4 {
        let mut acc = 0.0;
        for (m, c) in D2.iter().enumerate() {
            if m == 2 {
                acc += c * f0;
                continue;
            }
            let mut dx = [0.0; 4];
            dx[a] = (m as f64 - 2.0) * h;
            acc += c * eval(dx)?;
        }
        out[a][a] = acc / (h * h);
        for b in (a + 1)..4 {
            let mut acc = 0.0;
            for (m, cm) in D1.iter().enumerate() {
                if *cm == 0.0 {
                    continue;
                }
                for (n, cn) in D1.iter().enumerate() {
                    if *cn == 0.0 {
                        continue;
                    }
                    let mut dx = [0.0; 4];
                    dx[a] = (m as f64 - 2.0) * h;
                    dx[b] = (n as f64 - 2.0) * h;
                    acc += cm * cn * eval(dx)?;
                }
            }
            out[a][b] = acc / (h * h);
            out[b][a] = out[a][b];
        }
    }
    Ok(out)
}

/// Complex Hessian `∂²u/∂z_j∂z̄_k` from a real Hessian in `(x₁, y₁, x₂, y₂)`.
pub fn complex_from_real_hessian(r: &[[f64; 4]; 4]) -> HermitianForm {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (j, row) in m.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            *v = Complex64::new(
                0.25 * (r[xj][xk] + r[yj][yk]),
                0.25 * (r[xj][yk] - r[yj][xk]),
            );
        }
    }
    HermitianForm::new(m).symmetrized()
}

/// Complex Hessian by fourth-order differences, ignoring exact jets.
pub fn complex_hessian_fd<P: Potential + ?Sized>(phi: &P, p: &ComplexPoint, h: f64) -> Result<HermitianForm> {
    Ok(complex_from_real_hessian(&real_hessian_fd(phi, p, h)?))
}

/// Complex Hessian `∂²φ/∂z_j∂z̄_k`: exact jets when the potential has them,
/// fourth-order central differences with step `h` otherwise.
pub fn complex_hessian<P: Potential + ?Sized>(phi: &P, p: &ComplexPoint, h: f64) -> Result<HermitianForm> {
    if let Some(j) = phi.jet(p) {
        return Ok(j?.hess);
    }
    complex_hessian_fd(phi, p, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: [f64; 4]) -> ComplexPoint {
        ComplexPoint::from_real(x)
    }

    #[test]
    fn flat_potential_has_half_identity() {
        let h = complex_hessian_fd(&WithoutJet(FlatPotential), &pt([0.3, -1.0, 0.2, 0.7]), 0.1).unwrap();
        assert!(h.sub(&HermitianForm::flat()).frobenius() < 1e-12);
    }

    #[test]
    fn pluriharmonic_is_killed() {
        let phi = FnPotential(|p: &ComplexPoint| (p.z[0] * p.z[0] + p.z[0] * p.z[1] * 3.0).re);
        let h = complex_hessian_fd(&phi, &pt([0.5, 0.2, -0.4, 1.1]), 0.05).unwrap();
        assert!(h.frobenius() < 1e-10);
    }

    #[test]
    fn product_rule_matches_differences() {
        let a = PotentialJet::radial(&[Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)], Jet::var(0.39).exp());
        let b = PotentialJet::radial(&[Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)], Jet::var(0.39).sqrt());
        let prod = a.mul(&b);
        let direct = PotentialJet::radial(
            &[Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)],
            Jet::var(0.39).exp() * Jet::var(0.39).sqrt(),
        );
        assert!(prod.hess.sub(&direct.hess).frobenius() < 1e-14);
        assert!((prod.grad[1] - direct.grad[1]).norm() < 1e-14);
    }

    #[test]
    fn stencil_outside_domain_is_reported() {
        struct Ball;
        impl Potential for Ball {
            fn value(&self, p: &ComplexPoint) -> Result<f64> {
                Ok(p.norm_sqr())
            }
            fn contains(&self, p: &ComplexPoint, r: f64) -> bool {
                p.norm() + r < 1.0
            }
        }
        assert!(matches!(
            complex_hessian(&Ball, &pt([0.95, 0.0, 0.0, 0.0]), 0.1),
            Err(Error::StencilOutOfDomain { .. })
        ));
    }
}
