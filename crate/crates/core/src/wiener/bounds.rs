use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{VectorField, VectorFieldF};
use super::sampler::GaussianSampler;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FBoundsReport {
    /// Sampled sup of `|F|²_{B*} = (t'/A_0³)² + Σ (ã_i/A_i³)²` over the
    /// closure of `H_λ`.
    pub bstar_sup: f64,
    /// Sampled sup of `|F|²_H = (t'/A_0²)² + Σ (ã_i/A_i²)²`.
    pub h_sup: f64,
    /// MC estimate of `∫ ‖DF‖_1 dp_t` over the truncated space.
    pub trace_norm_integral: f64,
    pub trace_norm_stderr: f64,
    pub probes: usize,
    pub finite: bool,
}

/// Trace norm of `DF` in the orthonormal basis `A_i e_i` of `H`, where the
/// matrix is `M_ij = (A_j / A_i) ∂_j F_i`.
pub fn trace_norm(field: &VectorFieldF, y: &[f64]) -> f64 {
    let a = field.weights.a_vec(field.n());
    let j = field.jacobian(y);
    let d = a.len();
    let m = DMatrix::from_fn(d, d, |r, c| a[c] / a[r] * j[r][c]);
    m.singular_values().iter().sum()
}

/// Probes the closure of `H_λ` at its corners, its axis points and
/// `probe_count` uniform points; integrates the trace norm against `p_t`
/// with the same number of draws.
pub fn check_f_bounds(field: &VectorFieldF, lambda: f64, t: f64, probe_count: usize, seed: u64) -> Result<FBoundsReport> {
    let n = field.n();
    let r = lambda.sqrt();
    let mut probes: Vec<Vec<f64>> = vec![vec![0.0; n + 1], {
        let mut y = vec![0.0; n + 1];
        y[0] = lambda;
        y
    }];
    for i in 0..n {
        for s in [-r, r] {
            let mut y = vec![0.0; n + 1];
            y[0] = lambda;
            y[i + 1] = s;
            probes.push(y);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while probes.len() < probe_count + 2 + 2 * n {
        let mut y = vec![rng.random_range(0.0..lambda)];
        y.extend((0..n).map(|_| rng.random_range(-r..r)));
        if y[1..].iter().map(|v| v * v).sum::<f64>() <= y[0] {
            probes.push(y);
        }
    }
    let bstar_sup = probes.iter().map(|y| field.bstar_norm_sq(y)).fold(0.0, f64::max);
    let h_sup = probes.iter().map(|y| field.h_norm_sq(y)).fold(0.0, f64::max);
    let sampler = GaussianSampler::from_weights(&field.weights, n, t, seed)?;
    let tn = sampler.mc_expectation(|y| trace_norm(field, y), probe_count.max(1));
    Ok(FBoundsReport {
        bstar_sup,
        h_sup,
        trace_norm_integral: tn.mean,
        trace_norm_stderr: tn.stderr,
        probes: probes.len(),
        finite: bstar_sup.is_finite() && h_sup.is_finite() && tn.mean.is_finite() && tn.rejected == 0,
    })
}
