//! The explicit inverse `G_{R₀}f(r) = ∫_{R₀}^r (ρ − r) f(ρ) dρ` of `−d²/dr²` on
//! fibre-constant functions of a one-dimensional end, and its weighted bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::loglog_slope;

/// Samples `values[i] = f(r0 + i·h)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialSamples {
    pub r0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl RadialSamples {
    pub fn from_fn(r0: f64, r1: f64, h: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(h > 0.0 && r1 > r0) {
            return Err(Error::InvalidParameter(format!("bad radial grid [{r0}, {r1}] with step {h}")));
        }
        let n = ((r1 - r0) / h).round() as usize;
        Ok(RadialSamples { r0, h, values: (0..=n).map(|i| f(r0 + i as f64 * h)).collect() })
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r0 + i as f64 * self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Cumulative trapezoid integrals `∫_{R₀}^{r_i} f` and `∫_{R₀}^{r_i} ρ f`.
fn moments(f: &RadialSamples) -> (Vec<f64>, Vec<f64>) {
    let (mut i0, mut i1) = (vec![0.0; f.len()], vec![0.0; f.len()]);
    for i in 1..f.len() {
        let (a, b) = (f.values[i - 1], f.values[i]);
        let (ra, rb) = (f.radius(i - 1), f.radius(i));
        i0[i] = i0[i - 1] + 0.5 * f.h * (a + b);
        i1[i] = i1[i - 1] + 0.5 * f.h * (ra * a + rb * b);
    }
    (i0, i1)
}

/// `G_{R₀}f` on the sample grid. Unless `compact_support` is set, the tail of
/// `|f|` must decay faster than `r⁻²`.
pub fn green_m1(f: &RadialSamples, compact_support: bool) -> Result<RadialSamples> {
    if f.len() < 3 {
        return Err(Error::InvalidParameter("Green operator needs at least three samples".into()));
    }
    if !compact_support {
        check_tail(f)?;
    }
    let (i0, i1) = moments(f);
    let values = (0..f.len()).map(|i| i1[i] - f.radius(i) * i0[i]).collect();
    Ok(RadialSamples { r0: f.r0, h: f.h, values })
}

/// Fits the decay of the envelope `sup_{ρ ≥ r}|f(ρ)|` over the last quarter.
fn check_tail(f: &RadialSamples) -> Result<()> {
    let start = 3 * f.len() / 4;
    let mut env = 0.0f64;
    let mut tail = Vec::new();
    for i in (start..f.len()).rev() {
        env = env.max(f.values[i].abs());
        if env > 0.0 {
            tail.push((f.radius(i), env));
        }
    }
    if tail.len() < 2 {
        return Ok(());
    }
    match loglog_slope(&tail) {
        Ok(fit) if fit.slope < -2.0 => Ok(()),
        _ => Err(Error::NonIntegrable),
    }
}

/// `G_{R₀}f(r)` by adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn green_m1_at(f: impl Fn(f64) -> f64, r0: f64, r: f64, tol: f64) -> f64 {
    let g = |rho: f64| (rho - r) * f(rho);
    adaptive_simpson(&g, r0, r, tol, 50)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Test sources for the weighted bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreenSource {
    /// `r^{−a−2}`.
    PowerLaw,
    /// `r^{−a−2} sin r`.
    Oscillating,
    /// A bump supported in `[R₀ + 1, R₀ + 3]`.
    Compact,
}

impl GreenSource {
    pub fn eval(&self, a: f64, r0: f64, r: f64) -> f64 {
        match self {
            GreenSource::PowerLaw => r.powf(-a - 2.0),
            GreenSource::Oscillating => r.powf(-a - 2.0) * r.sin(),
            GreenSource::Compact => {
                let x = r - r0 - 2.0;
                if x.abs() < 1.0 {
                    (1.0 - x * x).powi(2)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Ratios on one truncated domain `[R₀, R]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenBoundRow {
    pub truncation: f64,
    /// `max_f ‖r^a Ĝf‖_∞ / ‖r^{a+2} f‖_∞`, with `Ĝf = G_{R₀}f − λr − η` the
    /// part of `G_{R₀}f` left after removing its affine end expansion.
    pub ratio: f64,
    /// `max_f ‖r^{a+2} G_{R₀}f‖_∞ / ‖r^a f‖_∞`, without removing the end expansion.
    pub raw_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenBoundReport {
    pub a: f64,
    pub r0: f64,
    pub step: f64,
    pub sources: Vec<GreenSource>,
    pub rows: Vec<GreenBoundRow>,
    /// Largest relative change of `ratio` between consecutive truncations.
    pub drift: f64,
}

/// Measures the weighted bound of the Green operator over the sources on the
/// domains `[R₀, R]` for each truncation `R`.
pub fn verify_weighted_green_bound(
    a: f64,
    r0: f64,
    sources: &[GreenSource],
    truncations: &[f64],
    step: f64,
) -> Result<GreenBoundReport> {
    if !(a > 0.0 && r0 > 0.0) || sources.is_empty() || truncations.is_empty() {
        return Err(Error::InvalidParameter("weighted Green bound needs a > 0, R₀ > 0 and test sources".into()));
    }
    let mut rows = Vec::new();
    for &big_r in truncations {
        let (mut ratio, mut raw_ratio): (f64, f64) = (0.0, 0.0);
        for s in sources {
            let f = RadialSamples::from_fn(r0, big_r, step, |r| s.eval(a, r0, r))?;
            let (i0, i1) = moments(&f);
            let n = f.len() - 1;
            let (lambda, eta) = (-i0[n], i1[n]);
            let (mut num, mut den, mut raw_num, mut raw_den): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
            for i in 0..f.len() {
                let r = f.radius(i);
                let g = i1[i] - r * i0[i];
                num = num.max(r.powf(a) * (g - lambda * r - eta).abs());
                den = den.max(r.powf(a + 2.0) * f.values[i].abs());
                raw_num = raw_num.max(r.powf(a + 2.0) * g.abs());
                raw_den = raw_den.max(r.powf(a) * f.values[i].abs());
            }
            ratio = ratio.max(num / den);
            raw_ratio = raw_ratio.max(raw_num / raw_den);
        }
        rows.push(GreenBoundRow { truncation: big_r, ratio, raw_ratio });
    }
    let drift = rows
        .windows(2)
        .map(|w| (w[1].ratio - w[0].ratio).abs() / w[0].ratio)
        .fold(0.0, f64::max);
    Ok(GreenBoundReport { a, r0, step, sources: sources.to_vec(), rows, drift })
}
