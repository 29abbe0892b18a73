use serde::{Deserialize, Serialize};

use super::sampler::GaussianSampler;
use crate::error::Result;
use crate::series::enumerate_multiindices;

/// Batches used for the residual error bar.
pub const HERMITE_BATCHES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteReport {
    pub degree: u32,
    /// `(k, c_k)` with `c_k = E[f H_k]`, `H_k = Π_i He_{k_i}(y_i/σ_i)/√(k_i!)`.
    pub coefficients: Vec<(Vec<u32>, f64)>,
    pub mean_square: f64,
    /// `(E[f²] − Σ c_k²)^{1/2}`, clamped at 0.
    pub residual: f64,
    /// Batch-means standard error of `residual²`.
    pub residual_sq_stderr: f64,
    pub samples: usize,
}

/// Orthonormal probabilists' Hermite values `He_k(x)/√(k!)`, `k ≤ d`.
pub fn hermite_normalized(x: f64, d: usize) -> Vec<f64> {
    let mut he = vec![1.0; d + 1];
    if d >= 1 {
        he[1] = x;
    }
    for k in 1..d {
        he[k + 1] = x * he[k] - k as f64 * he[k - 1];
    }
    let mut fact = 1.0;
    for (k, v) in he.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        *v /= fact.sqrt();
    }
    he
}

/// Projects `f` onto the Hermite chaos of the sampler's Gaussian up to
/// total degree `degree`, all coefficients estimated from one stream of
/// `count` draws.
pub fn hermite_projection(
    f: impl Fn(&[f64]) -> f64 + Sync,
    degree: u32,
    sampler: &GaussianSampler,
    count: usize,
) -> Result<HermiteReport> {
    let d = sampler.dim();
    let basis = enumerate_multiindices(d, degree)?;
    let dense: Vec<Vec<u32>> = basis.iter().map(|k| k.to_dense(d)).collect();
    let batches = HERMITE_BATCHES;
    let per = (count / batches).max(1);
    let sigma: Vec<f64> = (0..d).map(|i| sampler.std_dev(i)).collect();
    // per batch: Σ f H_k and Σ f²
    let sums: Vec<(Vec<f64>, f64)> = (0..batches)
        .map(|b| {
            let s = sampler.substream(sampler.substream.wrapping_add(100 + b as u32));
            let parts = s.map_chunks(
                per,
                || (vec![0.0; dense.len()], 0.0),
                |y, acc| {
                    let fy = f(y);
                    let hv: Vec<Vec<f64>> = (0..d)
                        .map(|i| hermite_normalized((y[i] - s.center[i]) / sigma[i], degree as usize))
                        .collect();
                    for (j, k) in dense.iter().enumerate() {
                        let h: f64 = k.iter().enumerate().map(|(i, &e)| hv[i][e as usize]).product();
                        acc.0[j] += fy * h;
                    }
                    acc.1 += fy * fy;
                },
            );
            parts.into_iter().fold((vec![0.0; dense.len()], 0.0), |mut a, p| {
                a.0.iter_mut().zip(&p.0).for_each(|(x, y)| *x += y);
                a.1 += p.1;
                a
            })
        })
        .collect();
    let total = (per * batches) as f64;
    let mut c = vec![0.0; dense.len()];
    let mut f2 = 0.0;
    for (s, q) in &sums {
        c.iter_mut().zip(s).for_each(|(x, y)| *x += y);
        f2 += q;
    }
    c.iter_mut().for_each(|x| *x /= total);
    f2 /= total;
    let res_sq = f2 - c.iter().map(|x| x * x).sum::<f64>();
    let batch_res: Vec<f64> = sums
        .iter()
        .map(|(s, q)| q / per as f64 - s.iter().map(|x| (x / per as f64).powi(2)).sum::<f64>())
        .collect();
    let mean_b = batch_res.iter().sum::<f64>() / batches as f64;
    let var_b = batch_res.iter().map(|v| (v - mean_b).powi(2)).sum::<f64>() / (batches as f64 - 1.0);
    Ok(HermiteReport {
        degree,
        coefficients: dense.into_iter().zip(c).collect(),
        mean_square: f2,
        residual: res_sq.max(0.0).sqrt(),
        residual_sq_stderr: (var_b / batches as f64).sqrt(),
        samples: per * batches,
    })
}
