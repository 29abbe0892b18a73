//! The metrics `d_p` on `R^∞` and their balls.
//!
//! For `p ≥ 1` the metric is `min{1, (Σ|x_i-y_i|^p)^{1/p}}`, for `0 < p < 1`
//! it is `min{1, Σ|x_i-y_i|^p}`, and `d_∞ = min{1, sup|x_i-y_i|}`. Points
//! with infinite support are compared up to a tail index, after which the
//! closed-form tail rules supply an analytic bound; results are then
//! intervals and ball membership can be undecided.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::PointOracle;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    /// `f64::INFINITY` selects the sup metric.
    pub p: f64,
}

impl MetricSpec {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && !p.is_nan() {
            Ok(MetricSpec { p })
        } else {
            Err(Error::Precondition(format!("metric exponent must be positive, got {p}")))
        }
    }

    pub fn sup() -> Self {
        MetricSpec { p: f64::INFINITY }
    }

    pub fn is_sup(&self) -> bool {
        self.p.is_infinite()
    }

    /// The raw (unclamped) size of a finite vector: sup, `ℓ^p` norm, or
    /// `p`-sum for `p < 1`.
    pub fn size(&self, v: &[f64]) -> f64 {
        if self.is_sup() {
            v.iter().fold(0.0, |m, x| m.max(x.abs()))
        } else {
            let s: f64 = v.iter().map(|x| x.abs().powf(self.p)).sum();
            self.from_power_sum(s)
        }
    }

    fn from_power_sum(&self, s: f64) -> f64 {
        if self.p >= 1.0 {
            s.powf(1.0 / self.p)
        } else {
            s
        }
    }
}

/// Closed interval `[lower, upper]`; degenerate when the tails cancel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn exact(v: f64) -> Self {
        Interval { lower: v, upper: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Three-valued answer for ball membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    True,
    False,
    Unknown,
}

/// Raw size of `x - y` as an interval.
pub fn norm_of_difference(
    x: &PointOracle,
    y: &PointOracle,
    spec: MetricSpec,
    tail_index: usize,
) -> Result<Interval> {
    let tail_index = tail_index.max(x.explicit.len()).max(y.explicit.len());
    let head: Vec<f64> = (0..tail_index).map(|i| x.coord(i) - y.coord(i)).collect();
    let same_tail = x.tail == y.tail;

    if spec.is_sup() {
        let h = spec.size(&head);
        if same_tail {
            return Ok(Interval::exact(h));
        }
        let sx = x.tail.sup_bound(tail_index).ok_or_else(|| Error::Tail("first point".into()))?;
        let sy = y.tail.sup_bound(tail_index).ok_or_else(|| Error::Tail("second point".into()))?;
        return Ok(Interval { lower: h, upper: h.max(sx + sy) });
    }

    let p = spec.p;
    let head_sum: f64 = head.iter().map(|d| d.abs().powf(p)).sum();
    if same_tail {
        return Ok(Interval::exact(spec.from_power_sum(head_sum)));
    }
    let tx = x.tail.power_sum_bound(tail_index, p).ok_or_else(|| Error::Tail("first point".into()))?;
    let ty = y.tail.power_sum_bound(tail_index, p).ok_or_else(|| Error::Tail("second point".into()))?;
    let tail_sum = if p >= 1.0 {
        (tx.powf(1.0 / p) + ty.powf(1.0 / p)).powf(p)
    } else {
        tx + ty
    };
    Ok(Interval {
        lower: spec.from_power_sum(head_sum),
        upper: spec.from_power_sum(head_sum + tail_sum),
    })
}

/// `d_p(x, y)` clamped at 1, as an interval.
pub fn dist(x: &PointOracle, y: &PointOracle, spec: MetricSpec, tail_index: usize) -> Result<Interval> {
    let n = norm_of_difference(x, y, spec, tail_index)?;
    Ok(Interval { lower: n.lower.min(1.0), upper: n.upper.min(1.0) })
}

/// Whether `candidate ∈ center + B_r^p`, using the unclamped norm and a
/// strict inequality.
pub fn ball_contains(
    center: &PointOracle,
    candidate: &PointOracle,
    r: f64,
    spec: MetricSpec,
    tail_index: usize,
) -> Result<Tri> {
    if r <= 0.0 {
        return Err(Error::Precondition(format!("ball radius must be positive, got {r}")));
    }
    let n = norm_of_difference(center, candidate, spec, tail_index)?;
    Ok(if n.upper < r {
        Tri::True
    } else if n.lower >= r {
        Tri::False
    } else {
        Tri::Unknown
    })
}

/// Violation counts of the randomized topology property suite.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub trials: usize,
    pub seed: u64,
    pub norm_monotonicity_violations: usize,
    pub small_p_violations: usize,
    pub metric_axiom_violations: usize,
}

impl TopologyReport {
    pub fn pass(&self) -> bool {
        self.norm_monotonicity_violations == 0
            && self.small_p_violations == 0
            && self.metric_axiom_violations == 0
    }
}

fn random_sparse(rng: &mut ChaCha8Rng, scale: f64) -> Vec<f64> {
    let len = rng.random_range(1..12);
    (0..len)
        .map(|_| if rng.random_bool(0.4) { 0.0 } else { rng.random_range(-scale..scale) })
        .collect()
}

fn finite_dist(x: &[f64], y: &[f64], spec: MetricSpec) -> f64 {
    let n = x.len().max(y.len());
    let d: Vec<f64> = (0..n)
        .map(|i| x.get(i).copied().unwrap_or(0.0) - y.get(i).copied().unwrap_or(0.0))
        .collect();
    spec.size(&d).min(1.0)
}

/// Randomized checks of `‖x‖_q ≤ ‖x‖_p` (`1 ≤ p ≤ q ≤ ∞`), of
/// `Σ|x|^q ≤ Σ|x|^p` when `Σ|x|^p ≤ 1` (`0 < p < q < 1`), and of the
/// metric axioms for `d_p`.
pub fn run_property_suite(trials: usize, seed: u64) -> TopologyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TopologyReport { trials, seed, ..Default::default() };
    let rel = |a: f64| 1e-12 * (1.0 + a.abs());
    for _ in 0..trials {
        let x = random_sparse(&mut rng, 3.0);
        let p = rng.random_range(1.0..6.0);
        let q = if rng.random_bool(0.2) { f64::INFINITY } else { rng.random_range(p..8.0) };
        let np = MetricSpec { p }.size(&x);
        let nq = MetricSpec { p: q }.size(&x);
        if nq > np + rel(np) {
            report.norm_monotonicity_violations += 1;
        }

        let small = random_sparse(&mut rng, 0.3);
        let p = rng.random_range(0.05..0.95);
        let q = rng.random_range(p..1.0);
        let sp = MetricSpec { p }.size(&small);
        if sp <= 1.0 {
            let sq = MetricSpec { p: q }.size(&small);
            if sq > sp + rel(sp) {
                report.small_p_violations += 1;
            }
        }

        let spec = MetricSpec {
            p: match rng.random_range(0..3) {
                0 => rng.random_range(0.1..1.0),
                1 => rng.random_range(1.0..5.0),
                _ => f64::INFINITY,
            },
        };
        let (a, b, c) = (
            random_sparse(&mut rng, 1.0),
            random_sparse(&mut rng, 1.0),
            random_sparse(&mut rng, 1.0),
        );
        let dab = finite_dist(&a, &b, spec);
        let dba = finite_dist(&b, &a, spec);
        let dbc = finite_dist(&b, &c, spec);
        let dac = finite_dist(&a, &c, spec);
        let ok = dab == dba && finite_dist(&a, &a, spec) == 0.0 && dac <= dab + dbc + 1e-12;
        if !ok {
            report.metric_axiom_violations += 1;
        }
    }
    report
}
