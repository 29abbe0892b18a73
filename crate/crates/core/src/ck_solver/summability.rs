use serde::{Deserialize, Serialize};

use super::problem::{CauchyProblem, Centering, ProblemSpace};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::series::{MonomialSeries, MultiIndex};

/// Closed-form sequence `k ↦ scale · k^exponent · ratio^k` (`k ≥ 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceRule {
    Zero,
    Constant { value: f64 },
    Power { scale: f64, exponent: f64 },
    Geometric { scale: f64, ratio: f64 },
}

#[derive(Clone, Copy, Debug)]
struct Term {
    scale: f64,
    exponent: f64,
    ratio: f64,
}

impl SequenceRule {
    pub fn value(&self, k: usize) -> f64 {
        let t = self.term();
        t.scale * (k as f64).powf(t.exponent) * t.ratio.powi(k as i32)
    }

    fn term(&self) -> Term {
        match *self {
            SequenceRule::Zero => Term { scale: 0.0, exponent: 0.0, ratio: 1.0 },
            SequenceRule::Constant { value } => Term { scale: value, exponent: 0.0, ratio: 1.0 },
            SequenceRule::Power { scale, exponent } => Term { scale, exponent, ratio: 1.0 },
            SequenceRule::Geometric { scale, ratio } => Term { scale, exponent: 0.0, ratio },
        }
    }
}

impl Term {
    fn abs_product(&self, o: &Term) -> Term {
        Term {
            scale: (self.scale * o.scale).abs(),
            exponent: self.exponent + o.exponent,
            ratio: (self.ratio * o.ratio).abs(),
        }
    }

    fn at(&self, k: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        self.scale * k.powf(self.exponent) * self.ratio.powf(k)
    }

    /// Bounds on `Σ_{k>K} term(k)`, `None` when the tail diverges.
    fn tail(&self, big_k: usize) -> Option<(f64, f64)> {
        if self.scale == 0.0 {
            return Some((0.0, 0.0));
        }
        let k = big_k as f64;
        if self.ratio > 1.0 {
            return None;
        }
        if self.ratio == 1.0 {
            if self.exponent >= -1.0 {
                return None;
            }
            // decreasing: ∫_{K+1}^∞ ≤ tail ≤ ∫_K^∞
            let e1 = -self.exponent - 1.0;
            let lo = self.scale * (k + 1.0).powf(-e1) / e1;
            let hi = self.scale * k.powf(-e1) / e1;
            return Some((lo, hi));
        }
        // ratio < 1: consecutive ratios are at most q from K+1 on
        let first = self.at(k + 1.0);
        let q = ((k + 2.0) / (k + 1.0)).powf(self.exponent.max(0.0)) * self.ratio;
        if q >= 1.0 {
            return None;
        }
        Some((first, first / (1.0 - q)))
    }
}

/// Partial sum of `Σ_{k=2}^K (|a_k b_k| + 2|a_k c_k|)` with an enclosure of
/// the remaining tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummabilityReport {
    pub k_max: usize,
    pub partial: f64,
    pub tail_lower: f64,
    pub tail_upper: f64,
    pub converged: bool,
}

impl SummabilityReport {
    /// `partial` plus the midpoint of the tail enclosure.
    pub fn estimate(&self) -> f64 {
        self.partial + 0.5 * (self.tail_lower + self.tail_upper)
    }

    /// Half-width of the enclosure around [`Self::estimate`].
    pub fn uncertainty(&self) -> f64 {
        0.5 * (self.tail_upper - self.tail_lower)
    }
}

pub fn check_summability(a: &SequenceRule, b: &SequenceRule, c: &SequenceRule, k_max: usize) -> SummabilityReport {
    // summed from the small end for accuracy
    let mut partial = 0.0;
    for k in (2..=k_max).rev() {
        let ak = a.value(k);
        partial += (ak * b.value(k)).abs() + 2.0 * (ak * c.value(k)).abs();
    }
    let ab = a.term().abs_product(&b.term());
    let ac = a.term().abs_product(&c.term());
    let k_from = k_max.max(1);
    match (ab.tail(k_from), ac.tail(k_from)) {
        (Some((l1, u1)), Some((l2, u2))) => SummabilityReport {
            k_max,
            partial,
            tail_lower: l1 + 2.0 * l2,
            tail_upper: u1 + 2.0 * u2,
            converged: true,
        },
        _ => SummabilityReport {
            k_max,
            partial,
            tail_lower: f64::INFINITY,
            tail_upper: f64::INFINITY,
            converged: false,
        },
    }
}

/// `∂_t² u = 2t ∂_t u − Σ_{k=2}^n a_k (∂_{x_k}² u − 2 x_k ∂_{x_k} u)`, the
/// first spatial slot `x1` standing for the re-indexed time and left unused.
pub fn oscillator_problem<C: Scalar>(a_rule: impl Fn(usize) -> f64, n: usize) -> Result<CauchyProblem<C>> {
    if n < 2 {
        return Err(crate::Error::Precondition("oscillator needs n ≥ 2".into()));
    }
    let lay = ProblemSpace::new(2, n)?;
    let mut terms = vec![(
        MultiIndex::new(vec![(lay.t(), 1), (lay.w(&MultiIndex::zero(), 1).unwrap(), 1)])?,
        C::from_i64(2),
    )];
    for k in 2..=n {
        let ak = C::from_f64(a_rule(k))
            .ok_or_else(|| crate::Error::NonFinite(vec![a_rule(k)]))?;
        let xk = (k - 1) as u32;
        let second = lay.w(&MultiIndex::var_pow(xk, 2), 0).unwrap();
        let first = lay.w(&MultiIndex::var(xk), 0).unwrap();
        terms.push((MultiIndex::var(second), -ak.clone()));
        terms.push((MultiIndex::new(vec![(lay.x(k - 1), 1), (first, 1)])?, ak * C::from_i64(2)));
    }
    let f = MonomialSeries::from_terms(lay.space.clone(), terms, None);
    let phi = vec![MonomialSeries::zero(lay.x_space.clone()); 2];
    CauchyProblem::new(2, n, &f, &phi, Centering::Raw)
}
