use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::MonomialSeries;

/// `t_i^{1/2} = t_scale · t_ratio^i` (`i ≥ 0`) and
/// `s_j^{1/2} = s_scale · s_ratio^{j-1}` (`j ≥ 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricPattern {
    pub t_scale: f64,
    pub t_ratio: f64,
    pub s_scale: f64,
    pub s_ratio: f64,
}

impl GeometricPattern {
    /// `t_i^{1/2} = 2^{-i}/4`, `s_j^{1/2} = 2^{-(j-1)}/4`.
    pub fn shipped() -> Self {
        GeometricPattern { t_scale: 0.25, t_ratio: 0.5, s_scale: 0.25, s_ratio: 0.5 }
    }

    /// `Σ_j s_j^{1/2} + Σ_i t_i^{1/2}` in closed form.
    pub fn total(&self) -> f64 {
        self.t_scale / (1.0 - self.t_ratio) + self.s_scale / (1.0 - self.s_ratio)
    }

    pub fn validate(&self) -> Result<()> {
        let ok_ratio = |r: f64| r > 0.0 && r < 1.0;
        let ok_scale = |c: f64| c > 0.0 && c < 1.0;
        if !(ok_ratio(self.t_ratio) && ok_ratio(self.s_ratio) && ok_scale(self.t_scale) && ok_scale(self.s_scale)) {
            return Err(Error::Precondition(format!("invalid geometric weight pattern {self:?}")));
        }
        if (self.total() - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "weights must satisfy Σs^(1/2) + Σt^(1/2) = 1, got {}",
                self.total()
            )));
        }
        Ok(())
    }
}

/// Weights `s_j, t_i`, the derived `A_i`, and the radii `ρ0 > ρ1` found for
/// a particular coefficient set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightScheme {
    pub pattern: GeometricPattern,
    pub rho0: f64,
    pub rho1: f64,
    /// `Σ_i [Σ_α |a_{i,α}| (ρ1/A^4)^α] ρ1/A_i^4` at `rho1`.
    pub rho1_bound: f64,
}

impl WeightScheme {
    /// A scheme carrying only the weights (no radius search).
    pub fn from_pattern(pattern: GeometricPattern) -> Result<Self> {
        pattern.validate()?;
        Ok(WeightScheme { pattern, rho0: f64::NAN, rho1: f64::NAN, rho1_bound: f64::NAN })
    }

    pub fn shipped() -> Self {
        Self::from_pattern(GeometricPattern::shipped()).unwrap()
    }

    pub fn t_sqrt(&self, i: usize) -> f64 {
        self.pattern.t_scale * self.pattern.t_ratio.powi(i as i32)
    }

    /// `s_j^{1/2}` for `j ≥ 1`.
    pub fn s_sqrt(&self, j: usize) -> f64 {
        assert!(j >= 1, "s_j starts at j = 1");
        self.pattern.s_scale * self.pattern.s_ratio.powi(j as i32 - 1)
    }

    /// `A_i²`: `t_0^{1/2}` for `i = 0`, `max{t_i^{1/2}, s_i^{1/2}}` after.
    pub fn a_sq(&self, i: usize) -> f64 {
        if i == 0 {
            self.t_sqrt(0)
        } else {
            self.t_sqrt(i).max(self.s_sqrt(i))
        }
    }

    pub fn a(&self, i: usize) -> f64 {
        self.a_sq(i).sqrt()
    }

    /// `[A_0, …, A_n]`.
    pub fn a_vec(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|i| self.a(i)).collect()
    }

    /// `Σ_{i≥0} A_i²`, summed until both geometric terms fall below 1e-20.
    pub fn sum_a_sq(&self) -> f64 {
        let mut s = self.a_sq(0);
        let mut i = 1;
        while self.t_sqrt(i).max(self.s_sqrt(i)) > 1e-20 && i < 1_000_000 {
            s += self.a_sq(i);
            i += 1;
        }
        s
    }

    /// `Σ_{i≤n} t_i^{1/2} + Σ_{1≤j≤n} s_j^{1/2}`.
    pub fn truncated_total(&self, n: usize) -> f64 {
        (0..=n).map(|i| self.t_sqrt(i)).sum::<f64>() + (1..=n).map(|j| self.s_sqrt(j)).sum::<f64>()
    }
}

/// Radius grid `ρ_k = 2^{-k/4}`, `k = 0..RHO_GRID_LEN`.
pub const RHO_GRID_LEN: usize = 241;

pub fn rho_grid() -> impl Iterator<Item = f64> {
    (0..RHO_GRID_LEN).map(|k| 2f64.powf(-(k as f64) / 4.0))
}

/// `Σ_{i=0}^n [Σ_α |c_{i,α}| Π_j (ρ/d_j)^{α_j}] ρ/e_i`, where `c_0 = b`,
/// `c_i = a_i`, `d_j` weights spatial variable `x_j` (`j ≥ 1`) and `e_i`
/// weights the outer index.
fn weighted_sum(
    a: &[MonomialSeries<f64>],
    b: &MonomialSeries<f64>,
    rho: f64,
    d: impl Fn(usize) -> f64,
    e: impl Fn(usize) -> f64,
) -> f64 {
    let inner = |c: &MonomialSeries<f64>| -> f64 {
        c.iter()
            .map(|(al, v)| {
                al.entries()
                    .iter()
                    .fold(v.abs(), |acc, &(var, ex)| acc * (rho / d(var as usize + 1)).powi(ex as i32))
            })
            .sum()
    };
    std::iter::once(b)
        .chain(a.iter())
        .enumerate()
        .map(|(i, c)| inner(c) * rho / e(i))
        .sum()
}

/// Scans the radius grid for the given coefficients (`a_i` over `x1..xn`,
/// `b` the zeroth-order term): `ρ0` is the largest grid point at which the
/// `(s, t)`-weighted sum is finite, `ρ1` the largest grid point below `ρ0`
/// with the `A^4`-weighted sum under 1/2.
pub fn build_weights(
    a: &[MonomialSeries<f64>],
    b: &MonomialSeries<f64>,
    pattern: GeometricPattern,
) -> Result<WeightScheme> {
    let base = WeightScheme::from_pattern(pattern)?;
    let s = |j: usize| base.s_sqrt(j).powi(2);
    let t = |i: usize| base.t_sqrt(i).powi(2);
    let a4 = |i: usize| base.a_sq(i).powi(2);
    let grid: Vec<f64> = rho_grid().collect();
    let k0 = grid
        .iter()
        .position(|&r| weighted_sum(a, b, r, s, t).is_finite())
        .ok_or(Error::NoWeightScheme { best_bound: f64::INFINITY, best_rho: f64::NAN })?;
    let mut best = (f64::INFINITY, f64::NAN);
    for &r in &grid[k0 + 1..] {
        let bound = weighted_sum(a, b, r, a4, a4);
        if bound < 0.5 {
            return Ok(WeightScheme { rho0: grid[k0], rho1: r, rho1_bound: bound, ..base });
        }
        if bound < best.0 {
            best = (bound, r);
        }
    }
    Err(Error::NoWeightScheme { best_bound: best.0, best_rho: best.1 })
}
