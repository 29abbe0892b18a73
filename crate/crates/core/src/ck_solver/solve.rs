use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::problem::{CauchyProblem, Centering, InitialJet};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};
use crate::series::{MonomialSeries, MultiIndex, Substitution, VariableSpace};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Largest number of stored terms before the solve aborts.
    pub term_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { term_limit: 2_000_000 }
    }
}

/// Truncated solution over `(t, x1..xn)`: every coefficient of total degree
/// at most `degree` is that of the analytic solution, and the residual
/// vanishes through `residual_degree`.
#[derive(Clone, Debug)]
pub struct SolutionSeries<C: Scalar = f64> {
    pub series: MonomialSeries<C>,
    pub degree: u32,
    pub residual_degree: u32,
}

/// `Σ_k layers[k](x) t^k / k!` over `tx`.
pub(crate) fn assemble<C: Scalar>(layers: &[MonomialSeries<C>], tx: &VariableSpace, cap: u32) -> MonomialSeries<C> {
    let mut out = MonomialSeries::from_terms(tx.clone(), std::iter::empty(), Some(cap));
    for (k, layer) in layers.iter().enumerate() {
        let kf: C = factorial(k as u32);
        let tk = MultiIndex::var_pow(0, k as u32);
        for (a, c) in layer.iter() {
            out.add_term(a.remap(|v| v + 1).add(&tk), c.div(&kf));
        }
    }
    out
}

impl<C: Scalar> CauchyProblem<C> {
    /// `f(t, x, U, ∂^β∂^j U)` over `(t, x)`, truncated to `cap`.
    fn compose(&self, u: &MonomialSeries<C>, cap: u32, jet: Option<&InitialJet<C>>) -> Result<MonomialSeries<C>> {
        let lay = self.layout();
        let tx = &lay.tx_space;
        let mut used = vec![false; lay.space.len()];
        for (a, _) in self.f.iter() {
            for &(v, _) in a.entries() {
                used[v as usize] = true;
            }
        }
        let centred = |s: MonomialSeries<C>, c: Option<&C>| -> Result<MonomialSeries<C>> {
            match c {
                Some(c) => s.sub(&MonomialSeries::constant(tx.clone(), c.clone())),
                None => Ok(s),
            }
        };
        let mut asg = HashMap::new();
        if used[lay.u() as usize] {
            asg.insert(lay.u(), Substitution::Series(centred(u.clone(), jet.map(|j| &j.u0))?));
        }
        for (k, d) in lay.w_index.iter().enumerate() {
            let var = lay.x_vars as u32 + 2 + k as u32;
            if !used[var as usize] {
                continue;
            }
            let mut w = u.partial_multi(&d.beta.remap(|v| v + 1));
            for _ in 0..d.j {
                w = w.partial_deriv(0);
            }
            let w0 = jet.map(|j| j.get(&d.beta, d.j).unwrap());
            asg.insert(var, Substitution::Series(centred(w, w0)?));
        }
        self.f.substitute(&asg, tx, cap)
    }

    fn jet_for_compose(&self) -> Option<InitialJet<C>> {
        (self.centering == Centering::Jet).then(|| self.derived_initial_values())
    }

    pub fn solve(&self, degree: u32) -> Result<SolutionSeries<C>> {
        self.solve_with(degree, &SolveOptions::default())
    }

    /// Computes `u_{k+m} = k! [t^k] f(t, x, U, …)` for `k = 0..=N-m`, keeping
    /// the total `(t, x)` degree at most `N`.
    pub fn solve_with(&self, degree: u32, opts: &SolveOptions) -> Result<SolutionSeries<C>> {
        let m = self.m();
        if degree < m {
            return Err(Error::Precondition(format!("degree {degree} is below the time order {m}")));
        }
        let lay = self.layout();
        let jet = self.jet_for_compose();
        let mut layers: Vec<MonomialSeries<C>> =
            (0..m).map(|k| self.phi[k as usize].truncated(degree - k).into_polynomial()).collect();
        for k in 0..=(degree - m) {
            let u = assemble(&layers, &lay.tx_space, degree);
            if u.len() > opts.term_limit {
                return Err(Error::Budget { terms: u.len(), limit: opts.term_limit });
            }
            let rhs = self.compose(&u, degree - m, jet.as_ref())?;
            let slice = rhs.coefficient_of_power(0, k).embed(&lay.x_space)?;
            let next = slice.scale(&factorial(k)).truncated(degree - m - k).into_polynomial();
            layers.push(next);
        }
        let series = assemble(&layers, &lay.tx_space, degree);
        if series.len() > opts.term_limit {
            return Err(Error::Budget { terms: series.len(), limit: opts.term_limit });
        }
        Ok(SolutionSeries { series, degree, residual_degree: degree - m })
    }

    /// `∂_t^m s − f(t, x, s, …)` truncated to total degree `degree`, with
    /// `s` read as an exact polynomial.
    pub fn residual(&self, s: &SolutionSeries<C>, degree: u32) -> Result<MonomialSeries<C>> {
        let poly = s.series.clone().into_polynomial();
        let mut lhs = poly.clone();
        for _ in 0..self.m() {
            lhs = lhs.partial_deriv(0);
        }
        let rhs = self.compose(&poly, degree, self.jet_for_compose().as_ref())?;
        Ok(lhs.truncated(degree).sub(&rhs)?.truncated(degree))
    }
}

/// Ratios `T_{d+1}/T_d` of the graded absolute sums `T_d = Σ_{|α|=d} |c_α h^α|`
/// at a finite point `h`; degrees with `T_d = 0` are skipped.
pub fn degree_ratios<C: Scalar>(s: &MonomialSeries<C>, h: &[f64]) -> Vec<f64> {
    let mut by_degree = vec![0.0; s.degree() as usize + 1];
    for (a, c) in s.iter() {
        let v = crate::series::monomial_value(a, |i| h.get(i as usize).copied().unwrap_or(0.0));
        by_degree[a.degree() as usize] += (c.to_f64() * v).abs();
    }
    let nz: Vec<f64> = by_degree.into_iter().filter(|t| *t > 0.0).collect();
    nz.windows(2).map(|w| w[1] / w[0]).collect()
}
