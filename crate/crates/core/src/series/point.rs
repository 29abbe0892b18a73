//! Points of `R^∞` described by finitely many explicit coordinates plus a
//! closed-form tail.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Index up to which tail sums are checked numerically.
pub const DEFAULT_CHECK_INDEX: usize = 10_000;

/// Closed-form rule giving coordinate `i` (global, zero-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRule {
    Zero,
    Constant { value: f64 },
    /// `scale · ratio^i`
    Geometric { scale: f64, ratio: f64 },
    /// `scale · (i+1)^exponent`
    PowerLaw { scale: f64, exponent: f64 },
    /// `p_i^{-s}` with `p_0 = 2` the first prime.
    PrimePowers { s: f64 },
}

impl TailRule {
    pub fn value(&self, i: usize) -> f64 {
        match *self {
            TailRule::Zero => 0.0,
            TailRule::Constant { value } => value,
            TailRule::Geometric { scale, ratio } => scale * ratio.powi(i as i32),
            TailRule::PowerLaw { scale, exponent } => scale * ((i + 1) as f64).powf(exponent),
            TailRule::PrimePowers { s } => (nth_prime(i) as f64).powf(-s),
        }
    }

    /// Upper bound on `Σ_{i ≥ from} |x_i|^p`; `None` if the rule is not
    /// `p`-summable. `from` must be at least 1 for power laws.
    pub fn power_sum_bound(&self, from: usize, p: f64) -> Option<f64> {
        match *self {
            TailRule::Zero => Some(0.0),
            TailRule::Constant { value } => (value == 0.0).then_some(0.0),
            TailRule::Geometric { scale, ratio } => {
                if scale == 0.0 {
                    return Some(0.0);
                }
                let q = ratio.abs().powf(p);
                (q < 1.0).then(|| scale.abs().powf(p) * q.powi(from as i32) / (1.0 - q))
            }
            TailRule::PowerLaw { scale, exponent } => {
                if scale == 0.0 {
                    return Some(0.0);
                }
                // (i+1)^{ep} ≤ ∫_i^{i+1} x^{ep} dx for decreasing terms
                let ep = exponent * p;
                if ep >= -1.0 {
                    return None;
                }
                let start = from.max(1) as f64;
                let head = if from == 0 { 1.0 } else { 0.0 };
                Some(scale.abs().powf(p) * (head + start.powf(ep + 1.0) / (-ep - 1.0)))
            }
            TailRule::PrimePowers { s } => {
                // p_i ≥ i + 2
                let sp = s * p;
                (sp > 1.0).then(|| ((from + 1) as f64).powf(1.0 - sp) / (sp - 1.0))
            }
        }
    }

    /// Upper bound on `sup_{i ≥ from} |x_i|`.
    pub fn sup_bound(&self, from: usize) -> Option<f64> {
        match *self {
            TailRule::Zero => Some(0.0),
            TailRule::Constant { value } => Some(value.abs()),
            TailRule::Geometric { scale, ratio } => {
                (ratio.abs() <= 1.0).then(|| scale.abs() * ratio.abs().powi(from as i32))
            }
            TailRule::PowerLaw { scale, exponent } => {
                (exponent <= 0.0).then(|| scale.abs() * ((from + 1) as f64).powf(exponent))
            }
            TailRule::PrimePowers { s } => {
                (s >= 0.0).then(|| (nth_prime(from) as f64).powf(-s))
            }
        }
    }

    /// The rule `1/x_i`, when it is again closed-form and nonzero.
    pub fn reciprocal(&self) -> Option<TailRule> {
        match *self {
            TailRule::Constant { value } if value != 0.0 => {
                Some(TailRule::Constant { value: 1.0 / value })
            }
            TailRule::Geometric { scale, ratio } if scale != 0.0 && ratio != 0.0 => {
                Some(TailRule::Geometric { scale: 1.0 / scale, ratio: 1.0 / ratio })
            }
            TailRule::PowerLaw { scale, exponent } if scale != 0.0 => {
                Some(TailRule::PowerLaw { scale: 1.0 / scale, exponent: -exponent })
            }
            TailRule::PrimePowers { s } if s < 0.0 => Some(TailRule::PrimePowers { s: -s }),
            _ => None,
        }
    }

    fn is_nonvanishing(&self) -> bool {
        match *self {
            TailRule::Zero => false,
            TailRule::Constant { value } => value != 0.0,
            TailRule::Geometric { scale, ratio } => scale != 0.0 && ratio != 0.0,
            TailRule::PowerLaw { scale, .. } => scale != 0.0,
            TailRule::PrimePowers { .. } => true,
        }
    }
}

/// A point `x ∈ R^∞`: explicit coordinates `0..explicit.len()` followed by
/// a tail rule. `tail_p`, when set, is the exponent `p` for which
/// `Σ 1/|x_i|^p < ∞` is claimed (a witness point near infinity).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointOracle {
    #[serde(default)]
    pub explicit: Vec<f64>,
    pub tail: TailRule,
    #[serde(default)]
    pub tail_p: Option<f64>,
}

/// Numeric check of `Σ 1/|x_i|^p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub p: f64,
    pub checked_index: usize,
    /// `Σ_{i < checked_index} 1/|x_i|^p`
    pub partial_sum: f64,
    /// Analytic bound for the remaining tail.
    pub tail_bound: Option<f64>,
    /// `partial_sum + tail_bound`
    pub declared_bound: Option<f64>,
    pub ok: bool,
}

impl PointOracle {
    pub fn finite(coords: Vec<f64>) -> Self {
        PointOracle { explicit: coords, tail: TailRule::Zero, tail_p: None }
    }

    pub fn with_tail(explicit: Vec<f64>, tail: TailRule) -> Self {
        PointOracle { explicit, tail, tail_p: None }
    }

    pub fn witness(explicit: Vec<f64>, tail: TailRule, p: f64) -> Self {
        PointOracle { explicit, tail, tail_p: Some(p) }
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.explicit.get(i).copied().unwrap_or_else(|| self.tail.value(i))
    }

    pub fn is_finite_support(&self) -> bool {
        self.tail.power_sum_bound(0, 1.0) == Some(0.0)
    }

    /// Checks that every coordinate is nonzero and `Σ 1/|x_i|^p` has bounded
    /// partial sums up to `check_index` plus an analytic tail bound.
    pub fn witness_check(&self, p: f64, check_index: usize) -> WitnessCheck {
        let check_index = check_index.max(self.explicit.len());
        let mut partial = 0.0;
        let mut nonzero = true;
        for i in 0..check_index {
            let x = self.coord(i);
            if x == 0.0 {
                nonzero = false;
                break;
            }
            partial += x.abs().powf(-p);
        }
        let tail_bound = if nonzero && self.tail.is_nonvanishing() {
            self.tail.reciprocal().and_then(|r| r.power_sum_bound(check_index, p))
        } else {
            None
        };
        let declared_bound = tail_bound.map(|t| partial + t);
        WitnessCheck {
            p,
            checked_index: check_index,
            partial_sum: partial,
            tail_bound,
            declared_bound,
            ok: nonzero && declared_bound.is_some_and(f64::is_finite),
        }
    }
}

fn prime_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| primes_up_to(250_000))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Zero-based `i`-th prime (`nth_prime(0) = 2`).
pub fn nth_prime(i: usize) -> u64 {
    let table = prime_table();
    if let Some(&p) = table.get(i) {
        return p;
    }
    let n = (i + 1) as f64;
    let bound = (n * (n.ln() + n.ln().ln()) + 10.0) as u64;
    primes_up_to(bound)[i]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(nth_prime(0), 2);
        assert_eq!(nth_prime(24), 97);
        assert_eq!(primes_up_to(100).len(), 25);
    }

    #[test]
    fn geometric_witness() {
        let x = PointOracle::witness(vec![], TailRule::Geometric { scale: 1.0, ratio: 2.0 }, 1.0);
        let chk = x.witness_check(1.0, 60);
        assert!(chk.ok);
        assert!((chk.declared_bound.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_coordinate_is_not_a_witness() {
        let x = PointOracle::finite(vec![1.0, 2.0]);
        assert!(!x.witness_check(1.0, 10).ok);
    }

    #[test]
    fn power_law_bound_dominates_sum() {
        let rule = TailRule::PowerLaw { scale: 1.0, exponent: -2.0 };
        let bound = rule.power_sum_bound(10, 1.0).unwrap();
        let direct: f64 = (10..200_000).map(|i| rule.value(i)).sum();
        assert!(direct <= bound);
        assert!(bound - direct < 2e-2);
    }

    #[test]
    fn reciprocal_of_divergent_rule() {
        let x = PointOracle::witness(vec![], TailRule::Constant { value: 1.0 }, 1.0);
        assert!(!x.witness_check(1.0, 100).ok);
    }
}
