use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{enumerate_multiindices, MonomialSeries, MultiIndex, VariableSpace};

/// The derivative `∂_x^β ∂_t^j u`; `β` is indexed by spatial variable
/// (0 is `x1`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivIndex {
    pub j: u32,
    pub beta: MultiIndex,
}

impl fmt::Debug for DerivIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&deriv_name(&self.beta, self.j))
    }
}

/// Variable name of a derivative: `u_t`, `u_x1`, `u_tx1x1`, ...
pub fn deriv_name(beta: &MultiIndex, j: u32) -> String {
    let mut s = String::from("u_");
    s.push_str(&"t".repeat(j as usize));
    for &(v, e) in beta.entries() {
        for _ in 0..e {
            s.push_str(&format!("x{}", v + 1));
        }
    }
    s
}

/// All `(β, j)` with `1 ≤ |β| + j ≤ m` and `j < m`, ordered by `j` then
/// graded-lex in `β`.
pub fn w_index(m: u32, x_vars: usize) -> Result<Vec<DerivIndex>> {
    let betas = enumerate_multiindices(x_vars, m)?;
    let mut out = Vec::new();
    for j in 0..m {
        for beta in &betas {
            let d = beta.degree() + j;
            if (1..=m).contains(&d) {
                out.push(DerivIndex { j, beta: beta.clone() });
            }
        }
    }
    Ok(out)
}

/// How `f` reads its `u` and `w` arguments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centering {
    /// `f` is given in the shifted variables `u - u0`, `w - w0`.
    #[default]
    Jet,
    /// `f` takes the values of `u` and its derivatives directly. Only
    /// polynomial `f` can be composed this way.
    Raw,
}

/// Variable layout `(t, x1..xn, u, w...)` of the right-hand side.
#[derive(Clone, Debug)]
pub struct ProblemSpace {
    pub m: u32,
    pub x_vars: usize,
    pub w_index: Vec<DerivIndex>,
    pub space: VariableSpace,
    pub x_space: VariableSpace,
    pub tx_space: VariableSpace,
}

impl ProblemSpace {
    pub fn new(m: u32, x_vars: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("time order m must be at least 1".into()));
        }
        if x_vars == 0 {
            return Err(Error::Precondition("x_vars must be at least 1".into()));
        }
        let w_index = w_index(m, x_vars)?;
        let tx_space = VariableSpace::tx(x_vars);
        let mut names: Vec<String> = tx_space.names().to_vec();
        names.push("u".into());
        names.extend(w_index.iter().map(|d| deriv_name(&d.beta, d.j)));
        Ok(ProblemSpace {
            m,
            x_vars,
            w_index,
            space: VariableSpace::new(names),
            x_space: VariableSpace::x(x_vars),
            tx_space,
        })
    }

    pub fn t(&self) -> u32 {
        0
    }

    /// Spatial variable `i` (0-based, so `x(0)` is `x1`).
    pub fn x(&self, i: usize) -> u32 {
        1 + i as u32
    }

    pub fn u(&self) -> u32 {
        self.x_vars as u32 + 1
    }

    pub fn w(&self, beta: &MultiIndex, j: u32) -> Option<u32> {
        let d = DerivIndex { j, beta: beta.clone() };
        self.w_index
            .iter()
            .position(|e| *e == d)
            .map(|k| self.x_vars as u32 + 2 + k as u32)
    }

    /// Series-valued coordinate of a problem variable.
    pub fn var<C: Scalar>(&self, var: u32) -> MonomialSeries<C> {
        MonomialSeries::variable(self.space.clone(), var)
    }
}

/// Values of `u` and of every `w_{β,j}` at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialJet<C: Scalar = f64> {
    pub u0: C,
    pub w0: Vec<(DerivIndex, C)>,
}

impl<C: Scalar> InitialJet<C> {
    pub fn get(&self, beta: &MultiIndex, j: u32) -> Option<&C> {
        self.w0.iter().find(|(d, _)| d.j == j && d.beta == *beta).map(|(_, c)| c)
    }
}

/// A normal (Kowalevskian) Cauchy problem of order `m` with initial data
/// `∂_t^k u(0, x) = φ_k(x)`.
#[derive(Clone, Debug)]
pub struct CauchyProblem<C: Scalar = f64> {
    pub f: MonomialSeries<C>,
    pub phi: Vec<MonomialSeries<C>>,
    pub centering: Centering,
    layout: ProblemSpace,
}

impl<C: Scalar> CauchyProblem<C> {
    /// `f` and `phi` are moved into the problem's spaces by variable name.
    pub fn new(
        m: u32,
        x_vars: usize,
        f: &MonomialSeries<C>,
        phi: &[MonomialSeries<C>],
        centering: Centering,
    ) -> Result<Self> {
        let layout = ProblemSpace::new(m, x_vars)?;
        if phi.len() != m as usize {
            return Err(Error::Precondition(format!(
                "expected {m} initial functions, got {}",
                phi.len()
            )));
        }
        let f = f.embed(&layout.space)?;
        let phi = phi.iter().map(|p| p.embed(&layout.x_space)).collect::<Result<Vec<_>>>()?;
        Ok(CauchyProblem { f, phi, centering, layout })
    }

    pub fn m(&self) -> u32 {
        self.layout.m
    }

    pub fn x_vars(&self) -> usize {
        self.layout.x_vars
    }

    pub fn w_index(&self) -> &[DerivIndex] {
        &self.layout.w_index
    }

    pub fn layout(&self) -> &ProblemSpace {
        &self.layout
    }

    /// Same equation with different initial data.
    pub fn with_phi(&self, phi: &[MonomialSeries<C>]) -> Result<Self> {
        Self::new(self.m(), self.x_vars(), &self.f, phi, self.centering)
    }

    /// `u0 = φ_0(0)` and `w0(β, j) = ∂^β φ_j(0)`.
    pub fn derived_initial_values(&self) -> InitialJet<C> {
        let w0 = self
            .layout
            .w_index
            .iter()
            .map(|d| {
                let c = self.phi[d.j as usize].coeff(&d.beta);
                (d.clone(), c * C::from_i64(d.beta.factorial() as i64))
            })
            .collect();
        InitialJet { u0: self.phi[0].constant_term(), w0 }
    }

    /// Converts a polynomial raw right-hand side to jet centering by
    /// substituting `u ↦ u0 + u`, `w ↦ w0 + w`.
    pub fn recentered(&self) -> Result<Self> {
        if self.centering == Centering::Jet {
            return Ok(self.clone());
        }
        if self.f.cap().is_some() {
            return Err(Error::FormalConvergence(
                "only a polynomial right-hand side can be recentered".into(),
            ));
        }
        let jet = self.derived_initial_values();
        let sp = &self.layout.space;
        let shifted = |var: u32, c: &C| {
            crate::series::Substitution::Series(
                MonomialSeries::variable(sp.clone(), var).add(&MonomialSeries::constant(sp.clone(), c.clone())).unwrap(),
            )
        };
        let mut asg = std::collections::HashMap::new();
        asg.insert(self.layout.u(), shifted(self.layout.u(), &jet.u0));
        for (d, c) in &jet.w0 {
            asg.insert(self.layout.w(&d.beta, d.j).unwrap(), shifted(self.layout.w(&d.beta, d.j).unwrap(), c));
        }
        let deg = self.f.degree();
        let f = self.f.substitute(&asg, sp, deg)?.into_polynomial();
        Ok(CauchyProblem { f, phi: self.phi.clone(), centering: Centering::Jet, layout: self.layout.clone() })
    }
}
