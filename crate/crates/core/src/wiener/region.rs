use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pieces of the paraboloid-capped region in coordinates `(t', x'_1..x'_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// `Σ x'² < t' < λ`
    H,
    /// `t' = λ`, `Σ x'² < λ`
    L,
    /// `t' < λ`, `Σ x'² = t'`
    K,
    /// `t' = λ`, `Σ x'² = λ`
    I,
    /// the whole slice `t' = λ`
    Slice,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub n: usize,
    pub lambda: f64,
    pub kind: RegionKind,
}

impl Region {
    pub fn new(n: usize, lambda: f64, kind: RegionKind) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Precondition(format!("λ must be positive, got {lambda}")));
        }
        Ok(Region { n, lambda, kind })
    }

    /// Membership of `y = (t', x')`; equalities are tested to `tol`.
    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        let (tp, r2) = (y[0], y[1..=self.n].iter().map(|v| v * v).sum::<f64>());
        let l = self.lambda;
        let eq = |a: f64, b: f64| (a - b).abs() <= tol;
        match self.kind {
            RegionKind::H => r2 < tp && tp < l,
            RegionKind::L => eq(tp, l) && r2 < l - tol,
            RegionKind::K => tp < l - tol && eq(r2, tp),
            RegionKind::I => eq(tp, l) && eq(r2, l),
            RegionKind::Slice => eq(tp, l),
        }
    }
}
