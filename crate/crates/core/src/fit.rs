//! Least-squares fits on log-log data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fitted power law `value ≈ C·radius^slope`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (0 for two samples or exact data).
    pub slope_stderr: f64,
    pub samples: usize,
}

/// Ordinary least squares `y ≈ a + b·x`; returns `(a, b, stderr(b))`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len();
    if n != y.len() || n < 2 {
        return Err(Error::DegenerateSamples(format!("need at least two paired samples, got {n}")));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateSamples("abscissae coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let stderr = if n > 2 {
        let rss: f64 = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
        (rss / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok((a, b, stderr))
}

fn log_log(samples: &[(f64, f64)]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut x = Vec::with_capacity(samples.len());
    let mut y = Vec::with_capacity(samples.len());
    for &(r, v) in samples {
        if !(r > 0.0 && v > 0.0 && r.is_finite() && v.is_finite()) {
            return Err(Error::DegenerateSamples(format!("non-positive sample ({r}, {v})")));
        }
        x.push(r.ln());
        y.push(v.ln());
    }
    Ok((x, y))
}

/// Power-law decay rate from at least four `(radius, value)` samples.
pub fn fit_decay_rate(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.len() < 4 {
        return Err(Error::DegenerateSamples(format!("need at least 4 samples, got {}", samples.len())));
    }
    loglog_slope(samples)
}

/// Log-log slope from two or more samples; used for short parameter sweeps.
pub fn loglog_slope(samples: &[(f64, f64)]) -> Result<DecayFit> {
    let (x, y) = log_log(samples)?;
    let (a, b, se) = linear_fit(&x, &y)?;
    Ok(DecayFit { slope: b, intercept: a, slope_stderr: se, samples: samples.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<_> = [1.0, 2.0, 4.0, 8.0, 16.0].iter().map(|&r: &f64| (r, r.powi(-2))).collect();
        let f = fit_decay_rate(&s).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-13);
        assert!(f.slope_stderr < 1e-12);
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(fit_decay_rate(&[(1.0, 1.0), (2.0, 0.5)]), Err(Error::DegenerateSamples(_))));
        assert!(loglog_slope(&[(1.0, 1.0), (2.0, 0.5)]).is_ok());
        assert!(matches!(loglog_slope(&[(1.0, 1.0), (2.0, -0.5)]), Err(Error::DegenerateSamples(_))));
    }
}
