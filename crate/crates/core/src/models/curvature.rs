//! Pointwise norm of the Riemann tensor of a metric given in coordinates.

use nalgebra::Matrix4;

use crate::error::{Error, Result};

type Metric<'a> = dyn Fn(&[f64; 4]) -> Result<[[f64; 4]; 4]> + 'a;

const D1: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -2.0 / 3.0), (1.0, 2.0 / 3.0), (2.0, -1.0 / 12.0)];

fn shifted(x: &[f64; 4], a: usize, d: f64) -> [f64; 4] {
    let mut y = *x;
    y[a] += d;
    y
}

/// `∂_c g_{ab}` by fourth-order differences.
fn metric_derivatives(g: &Metric, x: &[f64; 4], h: f64) -> Result<[[[f64; 4]; 4]; 4]> {
    let mut dg = [[[0.0; 4]; 4]; 4];
    for (c, dgc) in dg.iter_mut().enumerate() {
        for &(k, w) in &D1 {
            let gk = g(&shifted(x, c, k * h))?;
            for a in 0..4 {
                for b in 0..4 {
                    dgc[a][b] += w * gk[a][b] / h;
                }
            }
        }
    }
    Ok(dg)
}

fn inverse(g: &[[f64; 4]; 4]) -> Result<Matrix4<f64>> {
    Matrix4::from_fn(|a, b| g[a][b])
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("degenerate metric".into()))
}

/// Christoffel symbols `Γ^a_{bc}`.
fn christoffel(g: &Metric, x: &[f64; 4], h: f64) -> Result<[[[f64; 4]; 4]; 4]> {
    let ginv = inverse(&g(x)?)?;
    let dg = metric_derivatives(g, x, h)?;
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for (a, ga) in gamma.iter_mut().enumerate() {
        for b in 0..4 {
            for c in 0..4 {
                let mut s = 0.0;
                for d in 0..4 {
                    s += ginv[(a, d)] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                }
                ga[b][c] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

/// `|Rm| = (R_{abcd}R^{abcd})^{1/2}` using nested fourth-order differences with step `h`.
pub fn riemann_norm(g: &Metric, x: &[f64; 4], h: f64) -> Result<f64> {
    let gamma = christoffel(g, x, h)?;
    let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
    for (e, dge) in dgamma.iter_mut().enumerate() {
        for &(k, w) in &D1 {
            let gk = christoffel(g, &shifted(x, e, k * h), h)?;
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        dge[a][b][c] += w * gk[a][b][c] / h;
                    }
                }
            }
        }
    }
    // R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}.
    let mut riem = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut v = dgamma[c][a][d][b] - dgamma[d][a][c][b];
                    for e in 0..4 {
                        v += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
                    }
                    riem[a][b][c][d] = v;
                }
            }
        }
    }
    let gx = g(x)?;
    let ginv = inverse(&gx)?;
    // Lower the first index, then contract with the inverse metric on all slots.
    let mut low = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    low[a][b][c][d] = (0..4).map(|e| gx[a][e] * riem[e][b][c][d]).sum();
                }
            }
        }
    }
    let mut raised = low;
    for slot in 0..4 {
        let src = raised;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut v = 0.0;
                        for e in 0..4 {
                            let idx = match slot {
                                0 => src[e][b][c][d],
                                1 => src[a][e][c][d],
                                2 => src[a][b][e][d],
                                _ => src[a][b][c][e],
                            };
                            let i = [a, b, c, d][slot];
                            v += ginv[(i, e)] * idx;
                        }
                        raised[a][b][c][d] = v;
                    }
                }
            }
        }
    }
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    s += low[a][b][c][d] * raised[a][b][c][d];
                }
            }
        }
    }
    Ok(s.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_metric_has_no_curvature() {
        let g = |_: &[f64; 4]| -> Result<[[f64; 4]; 4]> {
            Ok([[1.0, 0.0, 0.0, 0.0], [0.0, 2.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.5], [0.0, 0.0, 0.5, 1.0]])
        };
        assert!(riemann_norm(&g, &[0.1, 0.2, 0.3, 0.4], 1e-2).unwrap() < 1e-10);
    }

    #[test]
    fn product_of_round_sphere_and_plane() {
        // S²(1) × ℝ² in coordinates (θ, φ, u, v): |Rm|² = 4/R⁴ = 4.
        let g = |x: &[f64; 4]| -> Result<[[f64; 4]; 4]> {
            let s = x[0].sin();
            Ok([[1.0, 0.0, 0.0, 0.0], [0.0, s * s, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]])
        };
        let n = riemann_norm(&g, &[1.1, 0.3, 0.0, 0.0], 1e-3).unwrap();
        assert!((n - 2.0).abs() < 1e-6, "{n}");
    }
}
