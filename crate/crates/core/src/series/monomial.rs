//! Sparse monomial series `Σ c_α x^α` over a named variable space.

use std::collections::hash_map::{DefaultHasher, Entry};
use std::collections::HashMap;
use std::hash::BuildHasherDefault;

use super::{MultiIndex, PointOracle, VariableSpace};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Deterministic hasher so that iteration order, and therefore floating
/// point summation order, is reproducible across runs.
pub(crate) type TermMap<C> = HashMap<MultiIndex, C, BuildHasherDefault<DefaultHasher>>;

/// A finite monomial expansion. `cap`, when set, is the total degree up to
/// which the stored coefficients are trusted; no stored term exceeds it.
#[derive(Clone, Debug)]
pub struct MonomialSeries<C: Scalar = f64> {
    space: VariableSpace,
    terms: TermMap<C>,
    cap: Option<u32>,
}

/// Right-hand side of one variable in [`MonomialSeries::substitute`].
#[derive(Clone, Debug)]
pub enum Substitution<C: Scalar> {
    Series(MonomialSeries<C>),
    Constant(C),
}

fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<C: Scalar> MonomialSeries<C> {
    pub fn zero(space: VariableSpace) -> Self {
        MonomialSeries { space, terms: TermMap::default(), cap: None }
    }

    pub fn constant(space: VariableSpace, c: C) -> Self {
        Self::from_terms(space, [(MultiIndex::zero(), c)], None)
    }

    pub fn one(space: VariableSpace) -> Self {
        Self::constant(space, C::one())
    }

    /// The coordinate function of variable `var`.
    pub fn variable(space: VariableSpace, var: u32) -> Self {
        Self::from_terms(space, [(MultiIndex::var(var), C::one())], None)
    }

    /// Builds a series, summing repeated indices, dropping zeros and any
    /// term above `cap`.
    pub fn from_terms(
        space: VariableSpace,
        terms: impl IntoIterator<Item = (MultiIndex, C)>,
        cap: Option<u32>,
    ) -> Self {
        let mut s = MonomialSeries { space, terms: TermMap::default(), cap };
        for (a, c) in terms {
            s.add_term(a, c);
        }
        s
    }

    /// Adds `c x^α` in place (respecting the cap).
    pub fn add_term(&mut self, alpha: MultiIndex, c: C) {
        if c.is_zero() || self.cap.is_some_and(|cap| alpha.degree() > cap) {
            return;
        }
        match self.terms.entry(alpha) {
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C {
        self.terms.get(alpha).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&MultiIndex::zero())
    }

    /// Highest total degree present (0 for the zero series).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Unordered term iterator.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    /// Terms in graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&MultiIndex, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Truncates to total degree `cap` and records it.
    pub fn truncated(&self, cap: u32) -> Self {
        let cap = min_cap(self.cap, Some(cap));
        MonomialSeries {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| cap.is_none_or(|c| a.degree() <= c))
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
            cap,
        }
    }

    /// Forgets the truncation degree: the stored terms are from now on read
    /// as an exact polynomial.
    pub fn into_polynomial(mut self) -> Self {
        self.cap = None;
        self
    }

    pub fn with_space(mut self, space: VariableSpace) -> Result<Self> {
        if space.len() != self.space.len() {
            return Err(self.space_error(&space));
        }
        self.space = space;
        Ok(self)
    }

    fn space_error(&self, other: &VariableSpace) -> Error {
        Error::SpaceMismatch {
            left: self.space.names().to_vec(),
            right: other.names().to_vec(),
        }
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(self.space_error(&other.space))
        }
    }

    /// Moves the series into `target`, matching variables by name.
    pub fn embed(&self, target: &VariableSpace) -> Result<Self> {
        let mut map = Vec::with_capacity(self.space.len());
        for name in self.space.names() {
            map.push(target.index_of(name));
        }
        let mut out = MonomialSeries { space: target.clone(), terms: TermMap::default(), cap: self.cap };
        for (a, c) in &self.terms {
            for &(v, _) in a.entries() {
                if map[v as usize].is_none() {
                    return Err(Error::UnknownVariable(self.space.names()[v as usize].clone()));
                }
            }
            out.add_term(a.remap(|v| map[v as usize].unwrap()), c.clone());
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MonomialSeries<D> {
        MonomialSeries::from_terms(
            self.space.clone(),
            self.terms.iter().map(|(a, c)| (a.clone(), f(c))),
            self.cap,
        )
    }

    pub fn to_f64(&self) -> MonomialSeries<f64> {
        self.map_coeffs(Scalar::to_f64)
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = self.map_coeffs(|c| c.clone() * k.clone());
        out.space = self.space.clone();
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.clone();
        out.cap = min_cap(self.cap, other.cap);
        if out.cap != self.cap {
            out = out.truncated(out.cap.unwrap());
        }
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Truncated Cauchy product; terms with `|α| > cap` are discarded and
    /// the result's cap is the minimum of `cap` and the input caps.
    pub fn mul(&self, other: &Self, cap: u32) -> Result<Self> {
        self.check_space(other)?;
        let cap = min_cap(Some(cap), min_cap(self.cap, other.cap)).unwrap();
        let mut by_degree: Vec<Vec<(&MultiIndex, &C)>> = vec![Vec::new(); cap as usize + 1];
        for (b, cb) in &other.terms {
            let d = b.degree();
            if d <= cap {
                by_degree[d as usize].push((b, cb));
            }
        }
        let mut out = MonomialSeries { space: self.space.clone(), terms: TermMap::default(), cap: Some(cap) };
        for (a, ca) in &self.terms {
            let da = a.degree();
            if da > cap {
                continue;
            }
            for bucket in &by_degree[..=(cap - da) as usize] {
                for (b, cb) in bucket {
                    out.add_term(a.add(b), ca.clone() * (*cb).clone());
                }
            }
        }
        Ok(out)
    }

    /// `∂f/∂x_var`; a set cap drops by one.
    pub fn partial_deriv(&self, var: u32) -> Self {
        let mut out = MonomialSeries {
            space: self.space.clone(),
            terms: TermMap::default(),
            cap: self.cap.map(|c| c.saturating_sub(1)),
        };
        for (a, c) in &self.terms {
            let e = a.exponent(var);
            if e > 0 {
                out.add_term(a.lower(var).unwrap(), c.clone() * C::from_i64(e as i64));
            }
        }
        out
    }

    /// Mixed partial `∂^β`.
    pub fn partial_multi(&self, beta: &MultiIndex) -> Self {
        let mut out = self.clone();
        for &(v, e) in beta.entries() {
            for _ in 0..e {
                out = out.partial_deriv(v);
            }
        }
        out
    }

    /// Coefficient of `x_var^k` viewed as a series in the other variables
    /// (the exponent of `var` is removed). The cap is lowered by `k`.
    pub fn coefficient_of_power(&self, var: u32, k: u32) -> Self {
        let mut out = MonomialSeries {
            space: self.space.clone(),
            terms: TermMap::default(),
            cap: self.cap.map(|c| c.saturating_sub(k)),
        };
        for (a, c) in &self.terms {
            if a.exponent(var) == k {
                let rest = a.saturating_sub(&MultiIndex::var_pow(var, k));
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Multiplies by the monomial `x^α`.
    pub fn shift(&self, alpha: &MultiIndex) -> Self {
        let cap = self.cap.map(|c| c + alpha.degree());
        MonomialSeries::from_terms(
            self.space.clone(),
            self.terms.iter().map(|(a, c)| (a.add(alpha), c.clone())),
            cap,
        )
    }

    /// Composition `f(y_1 ↦ g_1, …)` into `target`, exact for all degrees
    /// up to the returned cap.
    ///
    /// Variables of `self` without an assignment are mapped by name into
    /// `target`. A substituted series with a nonzero constant term is only
    /// accepted when `self` is a polynomial (no cap), since otherwise
    /// infinitely many dropped terms would feed every output degree.
    pub fn substitute(
        &self,
        assignment: &HashMap<u32, Substitution<C>>,
        target: &VariableSpace,
        cap: u32,
    ) -> Result<Self> {
        let mut out_cap = min_cap(Some(cap), self.cap).unwrap();
        let nvars = self.space.len();
        let mut images: Vec<Option<MonomialSeries<C>>> = vec![None; nvars];
        let mut used = vec![false; nvars];
        for a in self.terms.keys() {
            for &(v, _) in a.entries() {
                used[v as usize] = true;
            }
        }
        for v in 0..nvars {
            if !used[v] {
                continue;
            }
            let img = match assignment.get(&(v as u32)) {
                Some(Substitution::Series(g)) => {
                    if g.space != *target {
                        return Err(g.space_error(target));
                    }
                    g.clone()
                }
                Some(Substitution::Constant(c)) => MonomialSeries::constant(target.clone(), c.clone()),
                None => {
                    let name = &self.space.names()[v];
                    let idx = target
                        .index_of(name)
                        .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                    MonomialSeries::variable(target.clone(), idx)
                }
            };
            if self.cap.is_some() && !img.constant_term().is_zero() {
                return Err(Error::FormalConvergence(format!(
                    "truncated series composed with `{}` whose constant term is nonzero",
                    self.space.names()[v]
                )));
            }
            out_cap = min_cap(Some(out_cap), img.cap).unwrap();
            images[v] = Some(img);
        }

        let mut powers: Vec<Vec<MonomialSeries<C>>> = images
            .iter()
            .map(|img| match img {
                Some(g) => vec![MonomialSeries::one(target.clone()), g.clone()],
                None => Vec::new(),
            })
            .collect();
        let mut out = MonomialSeries::zero(target.clone());
        out.cap = Some(out_cap);
        let one = MonomialSeries::one(target.clone());
        for (a, c) in self.sorted_terms() {
            let mut prod = one.scale(c);
            for &(v, e) in a.entries() {
                let pw = &mut powers[v as usize];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap().mul(&pw[1], out_cap)?;
                    pw.push(next);
                }
                prod = prod.mul(&pw[e as usize], out_cap)?;
                if prod.is_zero() {
                    break;
                }
            }
            for (b, cb) in prod.terms {
                out.add_term(b, cb);
            }
        }
        Ok(out)
    }

    /// `1/(1-g) = Σ_k g^k` truncated to `cap`; `g` must vanish at 0.
    pub fn reciprocal_one_minus(g: &Self, cap: u32) -> Result<Self> {
        if !g.constant_term().is_zero() {
            return Err(Error::Precondition(
                "reciprocal_one_minus needs a series without constant term".into(),
            ));
        }
        let one = MonomialSeries::one(g.space.clone());
        let cap = min_cap(Some(cap), g.cap).unwrap();
        let mut r = one.truncated(cap);
        // r ← 1 + g·r gains one correct degree per pass
        for _ in 0..cap {
            r = one.add(&g.mul(&r, cap)?)?;
        }
        Ok(r)
    }

    /// Coefficientwise absolute value: the smallest majority function.
    pub fn majorant(&self) -> Self {
        self.map_coeffs(Scalar::abs)
    }

    /// True iff `|c_α(f)| ≤ C_α(self)` and `C_α ≥ 0` on both supports.
    pub fn is_majorant_of(&self, f: &Self) -> Result<bool> {
        self.check_space(f)?;
        let ok_self = self.terms.iter().all(|(a, big)| {
            big.is_nonnegative() && (big.clone() - f.coeff(a).abs()).is_nonnegative()
        });
        let ok_f = f.terms.keys().all(|a| self.terms.contains_key(a));
        Ok(ok_self && ok_f)
    }

    /// Value at a dense point (missing coordinates are zero).
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| c.to_f64() * monomial_value(a, |v| x.get(v as usize).copied().unwrap_or(0.0)))
            .sum()
    }

    /// `(Σ_{|α|≤cap} c_α x^α, Σ_{|α|≤cap} |c_α x^α|)`.
    pub fn eval_truncated(&self, x: &PointOracle, cap: u32) -> (f64, f64) {
        let mut value = 0.0;
        let mut abs = 0.0;
        for (a, c) in self.sorted_terms() {
            if a.degree() > cap {
                break;
            }
            let t = c.to_f64() * monomial_value(a, |v| x.coord(v as usize));
            value += t;
            abs += t.abs();
        }
        (value, abs)
    }

    /// Graded partial sums `Σ_{|α|≤d} |c_α x^α|` for `d = 0..=cap`.
    pub fn abs_partial_sums(&self, x: &PointOracle, cap: u32) -> Vec<f64> {
        let mut per_degree = vec![0.0; cap as usize + 1];
        for (a, c) in &self.terms {
            let d = a.degree();
            if d <= cap {
                per_degree[d as usize] += (c.to_f64() * monomial_value(a, |v| x.coord(v as usize))).abs();
            }
        }
        let mut acc = 0.0;
        per_degree
            .into_iter()
            .map(|s| {
                acc += s;
                acc
            })
            .collect()
    }
}

pub(crate) fn monomial_value(a: &MultiIndex, coord: impl Fn(u32) -> f64) -> f64 {
    a.entries().iter().map(|&(v, e)| coord(v).powi(e as i32)).product()
}

impl<C: Scalar> PartialEq for MonomialSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.cap == other.cap && self.terms == other.terms
    }
}

/// Every `α` over variables `0..num_vars` with `|α| ≤ cap`, coefficient 1.
pub fn geometric_series<C: Scalar>(num_vars: usize, cap: u32) -> Result<MonomialSeries<C>> {
    let alphas = super::enumerate_multiindices(num_vars, cap)?;
    Ok(MonomialSeries::from_terms(
        VariableSpace::x(num_vars),
        alphas.into_iter().map(|a| (a, C::one())),
        Some(cap),
    ))
}

/// Evaluates the truncated geometric series at `x` without materialising
/// it, through the complete homogeneous sums `h_d = Σ_{|α|=d} x^α`
/// built variable by variable. Returns `(value, abs_partial, graded
/// partial sums of |x^α|)`.
pub fn geometric_eval(x: &PointOracle, num_vars: usize, cap: u32) -> (f64, f64, Vec<f64>) {
    let n = cap as usize + 1;
    let mut h = vec![0.0; n];
    let mut habs = vec![0.0; n];
    h[0] = 1.0;
    habs[0] = 1.0;
    for v in 0..num_vars {
        let xv = x.coord(v);
        for d in 1..n {
            h[d] += xv * h[d - 1];
            habs[d] += xv.abs() * habs[d - 1];
        }
    }
    let mut acc = 0.0;
    let partial: Vec<f64> = habs
        .iter()
        .map(|s| {
            acc += s;
            acc
        })
        .collect();
    (h.iter().sum(), acc, partial)
}
