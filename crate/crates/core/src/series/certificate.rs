use serde::{Deserialize, Serialize};

use super::{MonomialSeries, PointOracle, WitnessCheck, DEFAULT_CHECK_INDEX};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite evidence that `Σ |c_α x^α|` stays bounded at a witness point.
/// Bounded monotone partial sums up to `max_degree_checked`; not a proof of
/// convergence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub p: f64,
    pub witness: PointOracle,
    /// Graded partial sums of `Σ |c_α x^α|`.
    pub partial_sums: Vec<f64>,
    pub bound: f64,
    pub max_degree_checked: u32,
    pub witness_check: WitnessCheck,
    /// All partial sums finite and `≤ bound`.
    pub sums_bounded: bool,
}

impl ConvergenceCertificate {
    /// Both the series sums and the `Σ 1/|x_i|^p` check passed.
    pub fn certified(&self) -> bool {
        self.sums_bounded && self.witness_check.ok
    }

    pub fn last_sum(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Builds a [`ConvergenceCertificate`]. A failed certificate is returned,
/// not raised; the only error is a witness whose declared `tail_p` differs
/// from `p`.
pub fn certify_convergence<C: Scalar>(
    f: &MonomialSeries<C>,
    p: f64,
    x: &PointOracle,
    cap: u32,
    bound: f64,
) -> Result<ConvergenceCertificate> {
    if x.tail_p.is_some_and(|tp| tp != p) {
        return Err(Error::Precondition(format!(
            "witness declares tail_p {:?} but p = {p}",
            x.tail_p
        )));
    }
    let partial_sums = f.abs_partial_sums(x, cap);
    let sums_bounded = partial_sums.iter().all(|s| s.is_finite() && *s <= bound);
    Ok(ConvergenceCertificate {
        p,
        witness: x.clone(),
        partial_sums,
        bound,
        max_degree_checked: cap,
        witness_check: x.witness_check(p, DEFAULT_CHECK_INDEX),
        sums_bounded,
    })
}
