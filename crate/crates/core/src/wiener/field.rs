use serde::{Deserialize, Serialize};

use super::weights::WeightScheme;
use crate::error::{Error, Result};
use crate::series::{MonomialSeries, VariableSpace};

/// A vector field on the truncated coordinates, given by its components
/// along the coordinate axes of `B`.
///
/// With the Gaussian coordinates of variance `t A_i²`, the `H`-inner
/// product is `Σ u_i v_i / A_i²` and the orthonormal basis is `A_i e_i`, so
/// the trace of `DF` on `H` is `Σ_i ⟨A_i ∂_i F, A_i e_i⟩_H = Σ_i ∂_i F_i`.
pub trait VectorField: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, y: &[f64]) -> Vec<f64>;
    /// `∂_j F_i` as rows `i`.
    fn jacobian(&self, y: &[f64]) -> Vec<Vec<f64>>;
    fn divergence(&self, y: &[f64]) -> f64 {
        self.jacobian(y).iter().enumerate().map(|(i, row)| row[i]).sum()
    }
}

/// Polynomial components over a fixed variable space.
#[derive(Clone, Debug)]
pub struct PolyField {
    comps: Vec<MonomialSeries<f64>>,
    jac: Vec<Vec<MonomialSeries<f64>>>,
}

impl PolyField {
    /// All components must share one space whose length is the number of
    /// components.
    pub fn new(comps: Vec<MonomialSeries<f64>>) -> Result<Self> {
        let d = comps.len();
        if d == 0 {
            return Err(Error::Precondition("a vector field needs at least one component".into()));
        }
        let space = comps[0].space().clone();
        if space.len() != d {
            return Err(Error::Precondition(format!(
                "{d} components over a space of {} variables",
                space.len()
            )));
        }
        let comps = comps
            .into_iter()
            .map(|c| {
                if *c.space() != space {
                    return Err(Error::SpaceMismatch { left: space.names().to_vec(), right: c.space().names().to_vec() });
                }
                Ok(c.into_polynomial())
            })
            .collect::<Result<Vec<_>>>()?;
        let jac = comps.iter().map(|c| (0..d).map(|j| c.partial_deriv(j as u32)).collect()).collect();
        Ok(PolyField { comps, jac })
    }

    /// Constant field.
    pub fn constant(space: &VariableSpace, v: &[f64]) -> Result<Self> {
        Self::new(v.iter().map(|c| MonomialSeries::constant(space.clone(), *c)).collect())
    }

    pub fn components(&self) -> &[MonomialSeries<f64>] {
        &self.comps
    }
}

impl VectorField for PolyField {
    fn dim(&self) -> usize {
        self.comps.len()
    }
    fn eval(&self, y: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|c| c.eval(y)).collect()
    }
    fn jacobian(&self, y: &[f64]) -> Vec<Vec<f64>> {
        self.jac.iter().map(|row| row.iter().map(|c| c.eval(y)).collect()).collect()
    }
    fn divergence(&self, y: &[f64]) -> f64 {
        self.jac.iter().enumerate().map(|(i, row)| row[i].eval(y)).sum()
    }
}

/// `F(t', x') = (t'/A_0, −ã_1(x')/A_1, …, −ã_n(x')/A_n)` over
/// `(t, x1..xn)`, `t` standing for `t'`.
#[derive(Clone, Debug)]
pub struct VectorFieldF {
    pub weights: WeightScheme,
    pub a_tilde: Vec<MonomialSeries<f64>>,
    pub b_tilde: MonomialSeries<f64>,
    field: PolyField,
}

impl VectorFieldF {
    /// `a_tilde` and `b_tilde` live over `x1..xn` with `n = a_tilde.len()`.
    pub fn new(weights: WeightScheme, a_tilde: &[MonomialSeries<f64>], b_tilde: &MonomialSeries<f64>) -> Result<Self> {
        let n = a_tilde.len();
        let xs = VariableSpace::x(n);
        let tx = VariableSpace::tx(n);
        let a_tilde: Vec<_> = a_tilde.iter().map(|a| a.embed(&xs).map(|s| s.into_polynomial())).collect::<Result<_>>()?;
        let b_tilde = b_tilde.embed(&xs)?.into_polynomial();
        let mut comps = vec![MonomialSeries::variable(tx.clone(), 0).scale(&(1.0 / weights.a(0)))];
        for (i, a) in a_tilde.iter().enumerate() {
            comps.push(a.embed(&tx)?.scale(&(-1.0 / weights.a(i + 1))));
        }
        Ok(VectorFieldF { weights, a_tilde, b_tilde, field: PolyField::new(comps)? })
    }

    pub fn n(&self) -> usize {
        self.a_tilde.len()
    }

    pub fn as_poly(&self) -> &PolyField {
        &self.field
    }

    /// `|F|²_{B*} = Σ F_i² / A_i⁴`.
    pub fn bstar_norm_sq(&self, y: &[f64]) -> f64 {
        self.eval(y).iter().enumerate().map(|(i, f)| f * f / self.weights.a_sq(i).powi(2)).sum()
    }

    /// `|F|²_H = Σ F_i² / A_i²`.
    pub fn h_norm_sq(&self, y: &[f64]) -> f64 {
        self.eval(y).iter().enumerate().map(|(i, f)| f * f / self.weights.a_sq(i)).sum()
    }
}

impl VectorField for VectorFieldF {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn eval(&self, y: &[f64]) -> Vec<f64> {
        self.field.eval(y)
    }
    fn jacobian(&self, y: &[f64]) -> Vec<Vec<f64>> {
        self.field.jacobian(y)
    }
    fn divergence(&self, y: &[f64]) -> f64 {
        self.field.divergence(y)
    }
}

/// `⟨u, v⟩_H = Σ u_i v_i / A_i²`.
pub fn h_inner(u: &[f64], v: &[f64], a: &[f64]) -> f64 {
    u.iter().zip(v).zip(a).map(|((x, y), ai)| x * y / (ai * ai)).sum()
}

/// Serializable description of a field for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub dim: usize,
    pub terms: usize,
}

impl From<&PolyField> for FieldSummary {
    fn from(f: &PolyField) -> Self {
        FieldSummary { dim: f.dim(), terms: f.comps.iter().map(|c| c.len()).sum() }
    }
}
