use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::divergence::{face_integral, volume_integral, Domain, Estimate, Gauss, Method};
use super::weights::{build_weights, GeometricPattern, WeightScheme};
use crate::ck_solver::LinearFirstOrderProblem;
use crate::error::{Error, Result};
use crate::series::{MonomialSeries, MultiIndex, Substitution, VariableSpace};

fn pmul(a: &MonomialSeries<f64>, b: &MonomialSeries<f64>) -> Result<MonomialSeries<f64>> {
    Ok(a.mul(b, a.degree() + b.degree())?.into_polynomial())
}

/// `ã_i = a_i / (1 − 2 Σ x_i a_i)` and `b̃ = b / (1 − 2 Σ x_i a_i)`, expanded
/// to total degree `cap`; the coefficients must not depend on `t`.
pub fn change_of_variables(
    p: &LinearFirstOrderProblem<f64>,
    cap: u32,
) -> Result<(Vec<MonomialSeries<f64>>, MonomialSeries<f64>)> {
    if p.time_dependent {
        return Err(Error::Precondition("the change of variables needs t-independent coefficients".into()));
    }
    let xs = VariableSpace::x(p.x_vars());
    let mut d = MonomialSeries::zero(xs.clone());
    for (i, a) in p.a.iter().enumerate() {
        d = d.add(&a.shift(&MultiIndex::var(i as u32)).scale(&2.0))?;
    }
    let r = MonomialSeries::reciprocal_one_minus(&d.truncated(cap), cap)?;
    let a_t = p.a.iter().map(|a| a.mul(&r, cap)).collect::<Result<Vec<_>>>()?;
    Ok((a_t, p.b.mul(&r, cap)?))
}

/// Transformed coefficients with the Gaussian data of `p_t`; `a_tilde` and
/// `b_tilde` are read as polynomials.
#[derive(Clone, Debug)]
pub struct GreenSetup {
    pub a_tilde: Vec<MonomialSeries<f64>>,
    pub b_tilde: MonomialSeries<f64>,
    pub weights: WeightScheme,
    pub lambda: f64,
    pub t: f64,
}

impl GreenSetup {
    pub fn new(
        a_tilde: &[MonomialSeries<f64>],
        b_tilde: &MonomialSeries<f64>,
        weights: WeightScheme,
        lambda: f64,
        t: f64,
    ) -> Result<Self> {
        if !(lambda > 0.0) || !(t > 0.0) {
            return Err(Error::Precondition("λ and t must be positive".into()));
        }
        let xs = VariableSpace::x(a_tilde.len());
        Ok(GreenSetup {
            a_tilde: a_tilde.iter().map(|a| a.embed(&xs).map(|s| s.into_polynomial())).collect::<Result<_>>()?,
            b_tilde: b_tilde.embed(&xs)?.into_polynomial(),
            weights,
            lambda,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.a_tilde.len()
    }

    pub fn tx(&self) -> VariableSpace {
        VariableSpace::tx(self.n())
    }

    pub fn a_vec(&self) -> Vec<f64> {
        self.weights.a_vec(self.n())
    }

    fn lift(&self, s: &MonomialSeries<f64>) -> Result<MonomialSeries<f64>> {
        Ok(s.embed(&self.tx())?.into_polynomial())
    }

    /// `G1[U] = ∂_t' U − Σ ã_i ∂_i U − b̃ U`.
    pub fn apply_g1(&self, u: &MonomialSeries<f64>) -> Result<MonomialSeries<f64>> {
        let u = u.embed(&self.tx())?.into_polynomial();
        let mut out = u.partial_deriv(0);
        for (i, a) in self.a_tilde.iter().enumerate() {
            out = out.sub(&pmul(&self.lift(a)?, &u.partial_deriv(i as u32 + 1))?)?;
        }
        out.sub(&pmul(&self.lift(&self.b_tilde)?, &u)?)
    }

    /// `b' = Σ ∂_i ã_i − b̃ + (t'/A_0² − Σ x_i ã_i / A_i²) / t` over `(t', x)`.
    pub fn adjoint_b(&self) -> Result<MonomialSeries<f64>> {
        let tx = self.tx();
        let mut out = self.lift(&self.b_tilde)?.neg();
        let mut pairing = MonomialSeries::variable(tx.clone(), 0).scale(&(1.0 / self.weights.a_sq(0)));
        for (i, a) in self.a_tilde.iter().enumerate() {
            let a = self.lift(a)?;
            out = out.add(&a.partial_deriv(i as u32 + 1))?;
            pairing = pairing.sub(&a.shift(&MultiIndex::var(i as u32 + 1)).scale(&(1.0 / self.weights.a_sq(i + 1))))?;
        }
        out.add(&pairing.scale(&(1.0 / self.t)))
    }

    /// `G2[W] = −∂_t' W + Σ ∂_i(ã_i W) + [−b̃ + (t'/A_0² − Σ x_i ã_i/A_i²)/t] W`,
    /// the formal adjoint of `G1` in `L²(p_t)`.
    pub fn apply_g2(&self, w: &MonomialSeries<f64>) -> Result<MonomialSeries<f64>> {
        let w = w.embed(&self.tx())?.into_polynomial();
        let mut out = w.partial_deriv(0).neg();
        for (i, a) in self.a_tilde.iter().enumerate() {
            out = out.add(&pmul(&self.lift(a)?, &w.partial_deriv(i as u32 + 1))?)?;
        }
        out.add(&pmul(&self.adjoint_b()?, &w)?)
    }

    /// `G2[W] = 0` backward from `t' = λ`, written for `τ = λ − t'` as
    /// `∂_τ V = −Σ ã_i ∂_i V − b'(λ − τ, x) V`.
    pub fn build_g2(&self) -> Result<LinearFirstOrderProblem<f64>> {
        let tx = self.tx();
        let b_rev = reflect_time(&self.adjoint_b()?, self.lambda)?.neg();
        let a_rev: Vec<_> = self.a_tilde.iter().map(|a| Ok(self.lift(a)?.neg())).collect::<Result<_>>()?;
        let zero = MonomialSeries::zero(VariableSpace::x(self.n()));
        LinearFirstOrderProblem::new(&a_rev, &b_rev.embed(&tx)?, &zero, true)
    }

    /// Adjoint solution with `W(λ, x) = datum(x)`, solved to total degree
    /// `degree` in `τ` and returned as a polynomial in `(t', x)`.
    pub fn solve_adjoint(&self, datum: &MonomialSeries<f64>, degree: u32) -> Result<MonomialSeries<f64>> {
        let p = self.build_g2()?.with_phi(datum)?;
        let v = p.solve(degree)?.series.into_polynomial();
        reflect_time(&v, self.lambda)
    }

    /// `|U(Σx², x)|` coefficientwise below `1e-12` relative to `U`.
    pub fn vanishes_on_paraboloid(&self, u: &MonomialSeries<f64>) -> Result<bool> {
        let tx = self.tx();
        let u = u.embed(&tx)?.into_polynomial();
        let mut r2 = MonomialSeries::zero(tx.clone());
        for i in 0..self.n() {
            r2.add_term(MultiIndex::var_pow(i as u32 + 1, 2), 1.0);
        }
        let mut asg = HashMap::new();
        asg.insert(0, Substitution::Series(r2));
        let on_k = u.substitute(&asg, &tx, 2 * u.degree().max(1))?;
        let scale = u.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max);
        let ok = on_k.iter().all(|(_, c)| c.abs() <= 1e-12 * (1.0 + scale));
        Ok(ok)
    }
}

/// `s(λ − t, x)` for a polynomial `s` over `(t, x)`.
pub fn reflect_time(s: &MonomialSeries<f64>, lambda: f64) -> Result<MonomialSeries<f64>> {
    let sp = s.space().clone();
    let image = MonomialSeries::constant(sp.clone(), lambda).sub(&MonomialSeries::variable(sp.clone(), 0))?;
    let mut asg = HashMap::new();
    asg.insert(0, Substitution::Series(image));
    Ok(s.clone().into_polynomial().substitute(&asg, &sp, s.degree())?.into_polynomial())
}

/// Two sides of `∫_{H_λ}(W G1[U] − U G2[W]) dp_t = (1/A_0) ∫_{l_λ} W U dσ_t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenReport {
    pub method: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub error_bar: f64,
    /// `(1/A_0)`: the `H`-flux factor of `(1, −ã)` through `l_λ`.
    pub surface_factor: f64,
}

/// Requires `U` to vanish on the paraboloid `t' = Σ x'²`, so that only the
/// flat top contributes.
pub fn green_residual(
    w: &MonomialSeries<f64>,
    u: &MonomialSeries<f64>,
    setup: &GreenSetup,
    method: &Method,
) -> Result<GreenReport> {
    if !setup.vanishes_on_paraboloid(u)? {
        return Err(Error::Precondition("U must vanish on the paraboloid t' = Σx'²".into()));
    }
    let tx = setup.tx();
    let w = w.embed(&tx)?.into_polynomial();
    let u = u.embed(&tx)?.into_polynomial();
    let integrand = pmul(&w, &setup.apply_g1(&u)?)?.sub(&pmul(&u, &setup.apply_g2(&w)?)?)?;
    let g = Gauss::centred(setup.a_vec(), setup.t);
    let domain = Domain::HLambda { n: setup.n(), lambda: setup.lambda };
    let lhs = volume_integral(&domain, &|y| integrand.eval(y), &g, method)?;
    let wu = pmul(&w, &u)?;
    let top = &domain.faces()[0];
    let factor = 1.0 / setup.weights.a(0);
    let s = face_integral(top, &|y, _| wu.eval(y), &g, method, 20)?;
    let rhs = factor * s.value;
    let rhs_err = factor * s.error;
    let error_bar = match method {
        Method::MonteCarlo { .. } => (lhs.error.powi(2) + rhs_err.powi(2)).sqrt(),
        Method::Quadrature { .. } => lhs.error + rhs_err,
    };
    Ok(GreenReport {
        method: method.name().into(),
        lhs: lhs.value,
        rhs,
        residual: lhs.value - rhs,
        error_bar,
        surface_factor: factor,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolmgrenOptions {
    pub lambda: f64,
    pub t: f64,
    /// Exponents `k` of the data `W(λ, x) = x^k`.
    pub moments: Vec<Vec<u32>>,
    /// Total degree of the adjoint and forward solves.
    pub solver_degree: u32,
    pub method: Method,
    pub pattern: GeometricPattern,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub k: Vec<u32>,
    /// `A_0 ∫_{H_λ}(W G1[Ũ] − Ũ G2[W]) dp`.
    pub moment_green: Estimate,
    /// `∫_{l_λ} x^k Ũ dσ` by direct surface integration.
    pub moment_direct: Estimate,
    /// `A_0 ∫_{H_λ} Ũ G2[W] dp`, the part due to truncating the adjoint solve.
    pub adjoint_defect: Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolmgrenReport {
    pub weights: WeightScheme,
    pub u_tilde_terms: usize,
    pub rows: Vec<MomentRow>,
}

/// For each `k`: solves the adjoint equation backward from `x^k`, then
/// evaluates the `l_λ` moment of `Ũ` through the Green identity and
/// directly. `Ũ` is `u_tilde` when given, otherwise the solution of
/// `problem` moved to `t' = t + Σ x²`.
pub fn holmgren_moment_demo(
    problem: &LinearFirstOrderProblem<f64>,
    u_tilde: Option<&MonomialSeries<f64>>,
    opts: &HolmgrenOptions,
) -> Result<HolmgrenReport> {
    let n = problem.x_vars();
    let weights = build_weights(&problem.a, &problem.b, opts.pattern)?;
    let (a_t, b_t) = change_of_variables(problem, opts.solver_degree)?;
    let setup = GreenSetup::new(&a_t, &b_t, weights.clone(), opts.lambda, opts.t)?;
    let tx = setup.tx();
    let u = match u_tilde {
        Some(u) => u.embed(&tx)?.into_polynomial(),
        None => {
            let sol = problem.solve(opts.solver_degree)?.series;
            let mut shift = MonomialSeries::variable(tx.clone(), 0);
            for i in 0..n {
                shift.add_term(MultiIndex::var_pow(i as u32 + 1, 2), -1.0);
            }
            let mut asg = HashMap::new();
            asg.insert(0, Substitution::Series(shift));
            sol.substitute(&asg, &tx, opts.solver_degree)?.into_polynomial()
        }
    };
    if !setup.vanishes_on_paraboloid(&u)? {
        return Err(Error::Precondition("Ũ must vanish on the paraboloid (zero initial data)".into()));
    }
    let g = Gauss::centred(setup.a_vec(), setup.t);
    let domain = Domain::HLambda { n, lambda: opts.lambda };
    let top = &domain.faces()[0];
    let a0 = weights.a(0);
    let g1u = setup.apply_g1(&u)?;
    let mut rows = Vec::new();
    for k in &opts.moments {
        if k.len() > n {
            return Err(Error::Precondition(format!("moment {k:?} has more than {n} exponents")));
        }
        let xk = MultiIndex::from_dense(k);
        let datum = MonomialSeries::from_terms(VariableSpace::x(n), [(xk.clone(), 1.0)], None);
        let w = setup.solve_adjoint(&datum, opts.solver_degree)?;
        let g2w = setup.apply_g2(&w)?;
        let first = pmul(&w, &g1u)?;
        let second = pmul(&u, &g2w)?;
        let full = first.sub(&second)?;
        let scaled = |e: Estimate| Estimate { value: a0 * e.value, error: a0 * e.error };
        let moment_green = scaled(volume_integral(&domain, &|y| full.eval(y), &g, &opts.method)?);
        let adjoint_defect = scaled(volume_integral(&domain, &|y| second.eval(y), &g, &opts.method)?);
        let xk_tx = xk.remap(|v| v + 1);
        let moment_direct = face_integral(
            top,
            &|y, _| u.eval(y) * crate::series::monomial_value(&xk_tx, |i| y[i as usize]),
            &g,
            &opts.method,
            30,
        )?;
        rows.push(MomentRow { k: k.clone(), moment_green, moment_direct, adjoint_defect });
    }
    Ok(HolmgrenReport { weights, u_tilde_terms: u.len(), rows })
}
