use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::weights::WeightScheme;
use crate::error::{Error, Result};

/// Generator label written into reports.
pub const RNG_NAME: &str = "chacha8 (rand_chacha 0.9), stream = substream·2^32 + chunk";
/// Draws per independent stream; also the unit of parallel work.
pub const CHUNK: usize = 1 << 14;

/// Independent centred normals with variance `t · A_i²` per coordinate,
/// optionally shifted to a centre `x0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSampler {
    pub a: Vec<f64>,
    pub t: f64,
    pub center: Vec<f64>,
    pub seed: u64,
    pub substream: u32,
}

/// Mean with standard error; non-finite integrand values are dropped and
/// counted in `rejected`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub rejected: usize,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    rejected: usize,
}

impl Moments {
    fn push(&mut self, v: f64) {
        if !v.is_finite() {
            self.rejected += 1;
            return;
        }
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0.0 {
            return Moments { rejected: self.rejected + o.rejected, ..self };
        }
        if self.n == 0.0 {
            return Moments { rejected: self.rejected + o.rejected, ..o };
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
            rejected: self.rejected + o.rejected,
        }
    }

    fn estimate(&self) -> McEstimate {
        let var = if self.n > 1.0 { self.m2 / (self.n - 1.0) } else { 0.0 };
        McEstimate {
            mean: self.mean,
            stderr: (var / self.n.max(1.0)).sqrt(),
            samples: self.n as usize,
            rejected: self.rejected,
        }
    }
}

impl GaussianSampler {
    /// Diagonal Gaussian with per-coordinate scale `A_i`.
    pub fn diagonal(a: Vec<f64>, t: f64, seed: u64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Precondition(format!("variance parameter t must be positive, got {t}")));
        }
        if a.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Precondition("coordinate scales A_i must be positive".into()));
        }
        let center = vec![0.0; a.len()];
        Ok(GaussianSampler { a, t, center, seed, substream: 0 })
    }

    /// Coordinates `(t', x'_1..x'_n)` with scales `A_0..A_n`.
    pub fn from_weights(w: &WeightScheme, n: usize, t: f64, seed: u64) -> Result<Self> {
        Self::diagonal(w.a_vec(n), t, seed)
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        if center.len() != self.a.len() {
            return Err(Error::Precondition("centre dimension mismatch".into()));
        }
        self.center = center;
        Ok(self)
    }

    /// Same law, independent random stream.
    pub fn substream(&self, k: u32) -> Self {
        GaussianSampler { substream: k, ..self.clone() }
    }

    /// Same centre and scales with variance parameter `t`.
    pub fn with_t(&self, t: f64) -> Result<Self> {
        let mut s = Self::diagonal(self.a.clone(), t, self.seed)?;
        s.center = self.center.clone();
        s.substream = self.substream;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn std_dev(&self, i: usize) -> f64 {
        (self.t).sqrt() * self.a[i]
    }

    fn chunk_rng(&self, chunk: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((self.substream as u64) << 32) | chunk as u64);
        rng
    }

    fn fill(&self, rng: &mut ChaCha8Rng, y: &mut [f64]) {
        for (i, v) in y.iter_mut().enumerate() {
            let z: f64 = StandardNormal.sample(rng);
            *v = self.center[i] + self.std_dev(i) * z;
        }
    }

    /// `count` draws; identical for identical `(seed, substream, count)`.
    pub fn sample(&self, count: usize) -> Vec<Vec<f64>> {
        let chunks = count.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = self.chunk_rng(c);
                let len = CHUNK.min(count - c * CHUNK);
                (0..len)
                    .map(|_| {
                        let mut y = vec![0.0; self.dim()];
                        self.fill(&mut rng, &mut y);
                        y
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    fn reduce(&self, count: usize, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> Moments {
        let chunks = count.div_ceil(CHUNK);
        let parts: Vec<Moments> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = self.chunk_rng(c);
                let mut y = vec![0.0; self.dim()];
                let mut m = Moments::default();
                for _ in 0..CHUNK.min(count - c * CHUNK) {
                    self.fill(&mut rng, &mut y);
                    m.push(f(&y));
                }
                m
            })
            .collect();
        // fixed left-to-right order keeps the result independent of scheduling
        parts.into_iter().fold(Moments::default(), Moments::merge)
    }

    /// Folds each chunk of draws into its own accumulator; the results are
    /// returned in chunk order for a deterministic merge.
    pub(crate) fn map_chunks<T: Send>(
        &self,
        count: usize,
        init: impl Fn() -> T + Sync,
        step: impl Fn(&[f64], &mut T) + Sync,
    ) -> Vec<T> {
        (0..count.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut rng = self.chunk_rng(c);
                let mut y = vec![0.0; self.dim()];
                let mut acc = init();
                for _ in 0..CHUNK.min(count - c * CHUNK) {
                    self.fill(&mut rng, &mut y);
                    step(&y, &mut acc);
                }
                acc
            })
            .collect()
    }

    /// `E[f(Y)]` over `count` draws.
    pub fn mc_expectation(&self, f: impl Fn(&[f64]) -> f64 + Sync, count: usize) -> McEstimate {
        self.reduce(count, &f).estimate()
    }

    /// `count` draws split into `batches` contiguous groups, one estimate
    /// per group (batch means).
    pub fn batch_expectations(
        &self,
        f: impl Fn(&[f64]) -> f64 + Sync,
        count: usize,
        batches: usize,
    ) -> Vec<McEstimate> {
        let per = count / batches;
        (0..batches)
            .map(|b| self.substream(self.substream.wrapping_add(1 + b as u32)).mc_expectation(&f, per))
            .collect()
    }
}

/// Result of probing `∫ e^{ε‖y‖²} dp_t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FerniqueReport {
    pub eps: f64,
    pub estimate: f64,
    pub stderr: f64,
    /// `ε < 1/(2t max A_i²)` and the importance-sampling weights have
    /// finite variance.
    pub stable: bool,
    pub threshold: f64,
    /// `Π_i (1 − 2ε t A_i²)^{-1/2}` when finite.
    pub closed_form: Option<f64>,
    pub samples: usize,
}

/// Variance inflation of the importance-sampling proposal.
pub const FERNIQUE_INFLATION: f64 = 2.0;

impl GaussianSampler {
    /// Estimates `∫ e^{ε‖y‖²} p_t(dy)` (`‖·‖` the Euclidean norm of the
    /// truncated coordinates, centre ignored). Draws come from the same
    /// Gaussian with variance inflated by [`FERNIQUE_INFLATION`] and are
    /// reweighted by the density ratio.
    pub fn fernique_probe(&self, eps: f64, count: usize) -> FerniqueReport {
        let vmax = (0..self.dim()).map(|i| self.std_dev(i).powi(2)).fold(0.0, f64::max);
        let threshold = 1.0 / (2.0 * vmax);
        let k = FERNIQUE_INFLATION;
        let closed_form = (eps < threshold).then(|| {
            (0..self.dim()).map(|i| (1.0 - 2.0 * eps * self.std_dev(i).powi(2)).powf(-0.5)).product()
        });
        if eps == 0.0 {
            return FerniqueReport {
                eps,
                estimate: 1.0,
                stderr: 0.0,
                stable: true,
                threshold,
                closed_form,
                samples: count,
            };
        }
        let is_finite_var = 2.0 * eps * vmax < 1.0 - 1.0 / (2.0 * k);
        let mut proposal = self.with_t(self.t * k).unwrap();
        proposal.center = vec![0.0; self.dim()];
        let v: Vec<f64> = (0..self.dim()).map(|i| self.std_dev(i).powi(2)).collect();
        let log_norm = 0.5 * self.dim() as f64 * k.ln();
        let est = proposal.mc_expectation(
            |y| {
                let e: f64 = y.iter().zip(&v).map(|(yi, vi)| yi * yi * (eps - (1.0 - 1.0 / k) / (2.0 * vi))).sum();
                (log_norm + e).exp()
            },
            count,
        );
        FerniqueReport {
            eps,
            estimate: est.mean,
            stderr: est.stderr,
            stable: eps < threshold && is_finite_var,
            threshold,
            closed_form,
            samples: est.samples,
        }
    }
}

/// Sets used by the scaling law `p_{ts}(A) = p_t(s^{-1/2} A)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestSet {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Whole,
}

impl TestSet {
    pub fn contains(&self, y: &[f64]) -> bool {
        match self {
            TestSet::Box { lo, hi } => y.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| l < v && v < h),
            TestSet::Ball { center, radius } => {
                y.iter().zip(center).map(|(v, c)| (v - c).powi(2)).sum::<f64>() < radius * radius
            }
            TestSet::Whole => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub scale: f64,
    pub lhs: McEstimate,
    pub rhs: McEstimate,
    pub diff: f64,
    pub combined_stderr: f64,
    pub pass: bool,
}

impl GaussianSampler {
    /// `p_{t·scale}(A)` against `p_t(scale^{-1/2} A)`, estimated on two
    /// independent substreams (centre must be 0).
    pub fn scaling_check(&self, scale: f64, set: &TestSet, count: usize) -> Result<ScalingReport> {
        if !(scale > 0.0) {
            return Err(Error::Precondition(format!("scale must be positive, got {scale}")));
        }
        let lhs = self.with_t(self.t * scale)?.substream(1).mc_expectation(|y| set.contains(y) as u8 as f64, count);
        let r = scale.sqrt();
        let rhs = self.substream(2).mc_expectation(
            |y| {
                let scaled: Vec<f64> = y.iter().map(|v| v * r).collect();
                set.contains(&scaled) as u8 as f64
            },
            count,
        );
        let diff = lhs.mean - rhs.mean;
        let combined = (lhs.stderr.powi(2) + rhs.stderr.powi(2)).sqrt();
        Ok(ScalingReport {
            scale,
            lhs,
            rhs,
            diff,
            combined_stderr: combined,
            pass: diff.abs() <= 3.0 * combined,
        })
    }
}
