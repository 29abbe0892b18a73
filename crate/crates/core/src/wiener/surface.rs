use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Charts of the boundary pieces. Base points `z` list the coordinates
/// other than the chart's normal direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceChart {
    /// `y_coord = value`; when `disk` is set, the remaining spatial
    /// coordinates (all but index 0 and `coord`) satisfy `Σ z² < disk`.
    Flat { coord: usize, value: f64, disk: Option<f64> },
    /// Graph `t' = Σ x'²` over `Σ x'² < lambda`, base point `z = x'`.
    Paraboloid { lambda: f64 },
}

impl SurfaceChart {
    /// Point of the surface above the base point.
    pub fn lift(&self, z: &[f64]) -> Vec<f64> {
        match self {
            SurfaceChart::Flat { coord, value, .. } => {
                let mut y = z.to_vec();
                y.insert(*coord, *value);
                y
            }
            SurfaceChart::Paraboloid { .. } => {
                let mut y = vec![z.iter().map(|v| v * v).sum()];
                y.extend_from_slice(z);
                y
            }
        }
    }

    pub fn check_domain(&self, z: &[f64]) -> Result<()> {
        let r2 = |s: &[f64]| s.iter().map(|v| v * v).sum::<f64>();
        let ok = match self {
            SurfaceChart::Flat { coord, disk: Some(d), .. } => {
                // z omits `coord`; the disk constrains spatial coordinates only
                let spatial: Vec<f64> =
                    z.iter().enumerate().filter(|(i, _)| !(*coord != 0 && *i == 0)).map(|(_, v)| *v).collect();
                r2(&spatial) < *d
            }
            SurfaceChart::Flat { .. } => true,
            SurfaceChart::Paraboloid { lambda } => r2(z) < *lambda,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ChartDomain(format!("{z:?} outside {self:?}")))
        }
    }

    /// Unit normal in `H` (B-coordinates) pointing in the direction of
    /// increasing defining function: `A_k e_k` for a flat chart and
    /// `∇_H g / |∇_H g|_H` for `g = t' − Σ x'²`.
    pub fn h_normal(&self, z: &[f64], a: &[f64]) -> Vec<f64> {
        match self {
            SurfaceChart::Flat { coord, .. } => {
                let mut n = vec![0.0; z.len() + 1];
                n[*coord] = a[*coord];
                n
            }
            SurfaceChart::Paraboloid { .. } => {
                let mut g = vec![a[0] * a[0]];
                g.extend(z.iter().enumerate().map(|(i, zi)| -2.0 * a[i + 1] * a[i + 1] * zi));
                let norm = grad_norm_h(z, a);
                g.iter().map(|v| v / norm).collect()
            }
        }
    }
}

/// `|∇_H g|_H = (A_0² + 4 Σ A_i² z_i²)^{1/2}` for `g = t' − Σ x'²`.
fn grad_norm_h(z: &[f64], a: &[f64]) -> f64 {
    (a[0] * a[0] + 4.0 * z.iter().enumerate().map(|(i, v)| a[i + 1] * a[i + 1] * v * v).sum::<f64>()).sqrt()
}

/// Density of the normal surface measure `σ_t(x0, ·)` at the base point
/// `z`, relative to the Gaussian `p'_t` of the base coordinates centred at
/// the corresponding coordinates of `x0`.
///
/// Flat chart `y_k = c`: `|N h| = 1` and the density is
/// `(2πt)^{-1/2} exp(−(c − x0_k)² / (2t A_k²))`. Paraboloid with transversal
/// direction `h = A_0 e_0`: `1/|N h| = |∇_H g|_H / A_0` and the exponent
/// measures the `t'`-offset of the lifted point.
pub fn surface_density(chart: &SurfaceChart, a: &[f64], t: f64, x0: &[f64], z: &[f64]) -> Result<f64> {
    chart.check_domain(z)?;
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("t must be positive, got {t}")));
    }
    let pref = 1.0 / (2.0 * PI * t).sqrt();
    Ok(match chart {
        SurfaceChart::Flat { coord, value, .. } => {
            let ak = a[*coord];
            pref * (-(value - x0[*coord]).powi(2) / (2.0 * t * ak * ak)).exp()
        }
        SurfaceChart::Paraboloid { .. } => {
            let tp: f64 = z.iter().map(|v| v * v).sum();
            pref * grad_norm_h(z, a) / a[0] * (-(tp - x0[0]).powi(2) / (2.0 * t * a[0] * a[0])).exp()
        }
    })
}

/// Product Gaussian density `Π_i N(y_i; x0_i, t A_i²)`.
pub fn gaussian_density(y: &[f64], a: &[f64], t: f64, x0: &[f64]) -> f64 {
    y.iter()
        .zip(a)
        .zip(x0)
        .map(|((yi, ai), ci)| {
            let v = t * ai * ai;
            (-(yi - ci).powi(2) / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()
        })
        .product()
}
