use std::path::Path;

use serde_json::{json, Value};

use super::{
    DivergenceArgs, DomainKind, GreenArgs, HolmgrenArgs, Mode, Outcome, RadiusArgs, SolveArgs, Table, TopologyArgs,
    WeightsArgs, ZetaArgs,
};
use crate::ck_solver::{degree_ratios, load_problem, LinearFirstOrderProblem, LoadedProblem};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{
    enumerate_multiindices, geometric_eval, nth_prime, series_to_json, MonomialSeries, PointOracle, SeriesJson,
    TailRule, VariableSpace,
};
use crate::topology::run_property_suite;
use crate::wiener::{
    build_weights, change_of_variables, divergence_residual, green_residual, holmgren_moment_demo, Domain, Gauss,
    GeometricPattern, GreenSetup, HolmgrenOptions, Method, PolyField, VectorFieldF,
};

fn read_json(path: &Path, field: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse(field, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(field, format!("{}: {e}", path.display())))
}

fn method(quadrature: bool, tol: f64, samples: usize, seed: u64) -> Method {
    if quadrature {
        Method::Quadrature { tol: 1e-2 * tol }
    } else {
        Method::MonteCarlo { samples, seed }
    }
}

fn within(m: &Method, residual: f64, error_bar: f64, tol: f64) -> bool {
    match m {
        Method::Quadrature { .. } => residual.abs() < tol,
        Method::MonteCarlo { .. } => residual.abs() < 3.0 * error_bar,
    }
}

fn samples_of(m: &Method) -> usize {
    match m {
        Method::Quadrature { .. } => 0,
        Method::MonteCarlo { samples, .. } => *samples,
    }
}

pub(super) fn zeta(a: &ZetaArgs) -> Result<Outcome> {
    let cap = if a.cap > 0 { a.cap } else { (((1.0 / a.tol).log2() + 10.0) / a.s).ceil().clamp(8.0, 400.0) as u32 };
    let x = PointOracle::with_tail(Vec::new(), TailRule::PrimePowers { s: a.s });
    let (value, _, partial) = geometric_eval(&x, a.primes, cap);
    let direct: f64 = (1..=a.direct_terms).rev().map(|n| (n as f64).powf(-a.s)).sum();
    let residual = value - direct;
    let mut table = Table::new(["degree", "partial_sum"]);
    for (d, s) in partial.iter().enumerate() {
        table.push(vec![d as f64, *s]);
    }
    Ok(Outcome {
        n: a.primes,
        samples: 0,
        lhs: value,
        rhs: direct,
        residual,
        stderr: 0.0,
        pass: residual.abs() < a.tol,
        results: json!({ "cap": cap, "largest_prime": nth_prime(a.primes - 1), "partial_sums": partial }),
        table: Some(table),
    })
}

fn solve_in<C: Scalar>(a: &SolveArgs, v: &Value) -> Result<Outcome> {
    let lp: LoadedProblem<C> = load_problem(v)?;
    let p = &lp.cauchy;
    let sol = p.solve(a.degree)?;
    let res = p.residual(&sol, sol.residual_degree)?;
    let res_max = res.iter().map(|(_, c)| c.to_f64().abs()).fold(0.0, f64::max);
    let exact_zero = res.iter().all(|(_, c)| c.is_zero());
    let pass = match a.mode {
        Mode::Rational => exact_zero,
        Mode::Double => res_max <= a.tol,
    };
    let space = sol.series.space().clone();
    let mut table = Table::new(space.names().iter().cloned().chain(["c".to_string()]));
    for (alpha, c) in sol.series.sorted_terms() {
        let mut row: Vec<f64> = alpha.to_dense(space.len()).into_iter().map(f64::from).collect();
        row.push(c.to_f64());
        table.push(row);
    }
    let series = series_to_json(&sol.series);
    if let Some(out) = &a.out {
        std::fs::write(out, serde_json::to_string_pretty(&series)? + "\n")?;
    }
    Ok(Outcome {
        n: p.x_vars(),
        samples: 0,
        lhs: res_max,
        rhs: 0.0,
        residual: res_max,
        stderr: 0.0,
        pass,
        results: json!({
            "mode": C::mode_name(),
            "m": p.m(),
            "x_vars": p.x_vars(),
            "degree": sol.degree,
            "residual_degree": sol.residual_degree,
            "terms": sol.series.len(),
            "residual_exact_zero": exact_zero,
            "series": series,
        }),
        table: Some(table),
    })
}

pub(super) fn solve(a: &SolveArgs) -> Result<Outcome> {
    let v = read_json(&a.problem, "problem")?;
    match a.mode {
        Mode::Rational => solve_in::<num::BigRational>(a, &v),
        Mode::Double => solve_in::<f64>(a, &v),
    }
}

fn linear_problem(path: &Path) -> Result<LinearFirstOrderProblem<f64>> {
    load_problem::<f64>(&read_json(path, "problem")?)?
        .linear
        .ok_or_else(|| Error::parse("linear", "this command needs a linear first-order problem"))
}

pub(super) fn radius(a: &RadiusArgs) -> Result<Outcome> {
    let p = linear_problem(&a.problem)?;
    let witness = match &a.witness {
        Some(w) => serde_json::from_value(read_json(w, "witness")?).map_err(|e| Error::parse("witness", e.to_string()))?,
        None => p.default_witness(a.p),
    };
    let (r, cert) = p.majorant_radius(a.p, &witness, a.cap)?;
    let sol = p.solve(a.degree)?;
    let h = vec![0.5 * r; p.x_vars() + 1];
    let ratios = degree_ratios(&sol.series, &h);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let mut table = Table::new(["degree", "majorant_partial_sum"]);
    for (d, s) in cert.partial_sums.iter().enumerate() {
        table.push(vec![d as f64, *s]);
    }
    Ok(Outcome {
        n: p.x_vars(),
        samples: 0,
        lhs: r,
        rhs: 0.0,
        residual: r,
        stderr: 0.0,
        pass: r > 0.0,
        results: json!({
            "r": r,
            "certificate": cert,
            "ratio_point": h,
            "degree_ratios": ratios,
            "max_ratio": max_ratio,
        }),
        table: Some(table),
    })
}

pub(super) fn topology(a: &TopologyArgs, seed: u64) -> Result<Outcome> {
    let r = run_property_suite(a.trials, seed);
    let violations =
        (r.norm_monotonicity_violations + r.small_p_violations + r.metric_axiom_violations) as f64;
    Ok(Outcome {
        n: a.trials,
        samples: a.trials,
        lhs: violations,
        rhs: 0.0,
        residual: violations,
        stderr: 0.0,
        pass: r.pass(),
        results: serde_json::to_value(&r)?,
        table: None,
    })
}

fn pattern(path: Option<&Path>) -> Result<GeometricPattern> {
    match path {
        Some(p) => serde_json::from_value(read_json(p, "pattern")?).map_err(|e| Error::parse("pattern", e.to_string())),
        None => Ok(GeometricPattern::shipped()),
    }
}

pub(super) fn weights(a: &WeightsArgs) -> Result<Outcome> {
    let p = linear_problem(&a.problem)?;
    if p.time_dependent {
        return Err(Error::Precondition("weights need t-independent coefficients".into()));
    }
    let w = build_weights(&p.a, &p.b, pattern(a.pattern.as_deref())?)?;
    let n = p.x_vars();
    let mut table = Table::new(["i", "A_i"]);
    for (i, ai) in w.a_vec(n).into_iter().enumerate() {
        table.push(vec![i as f64, ai]);
    }
    Ok(Outcome {
        n,
        samples: 0,
        lhs: w.rho1_bound,
        rhs: 0.5,
        residual: w.rho1_bound - 0.5,
        stderr: 0.0,
        pass: w.rho1_bound < 0.5,
        results: json!({
            "scheme": w,
            "pattern_total": w.pattern.total(),
            "a": w.a_vec(n),
            "sum_a_sq": w.sum_a_sq(),
        }),
        table: Some(table),
    })
}

/// `ã`, `b̃` of the problem `a = (a1, 0, ..)`, `b = 0` on `n` variables.
fn constant_a1(n: usize, a1: f64, degree: u32) -> Result<(LinearFirstOrderProblem<f64>, Vec<MonomialSeries<f64>>, MonomialSeries<f64>)> {
    let xs = VariableSpace::x(n);
    let mut a = vec![MonomialSeries::zero(xs.clone()); n];
    a[0] = MonomialSeries::constant(xs.clone(), a1);
    let zero = MonomialSeries::zero(xs);
    let p = LinearFirstOrderProblem::new(&a, &zero, &zero, false)?;
    let (at, bt) = change_of_variables(&p, degree)?;
    Ok((p, at, bt))
}

fn box_field(a: &DivergenceArgs) -> Result<PolyField> {
    let d = a.dim;
    let sp = VariableSpace::new((0..d).map(|i| format!("y{i}")));
    match &a.field {
        Some(path) => {
            let comps: Vec<SeriesJson> =
                serde_json::from_value(read_json(path, "field")?).map_err(|e| Error::parse("field", e.to_string()))?;
            let comps = comps.iter().map(|c| c.to_series::<f64>()?.embed(&sp)).collect::<Result<Vec<_>>>()?;
            PolyField::new(comps)
        }
        None => {
            let comps = (0..d as u32)
                .map(|i| {
                    let mut c = MonomialSeries::one(sp.clone());
                    c.add_term(crate::series::MultiIndex::var(i), 1.0);
                    c.add_term(crate::series::MultiIndex::var_pow(i, 2), 1.0);
                    c
                })
                .collect();
            PolyField::new(comps)
        }
    }
}

pub(super) fn divergence(a: &DivergenceArgs, seed: u64) -> Result<Outcome> {
    let m = method(a.quadrature, a.tol, a.samples, seed);
    let (report, extra) = match a.domain {
        DomainKind::HLambda => {
            let (p, at, bt) = constant_a1(a.dim, a.a1, a.degree)?;
            let w = build_weights(&p.a, &p.b, GeometricPattern::shipped())?;
            let g = Gauss::centred(w.a_vec(a.dim), a.t);
            let f = VectorFieldF::new(w.clone(), &at, &bt)?;
            let domain = Domain::HLambda { n: a.dim, lambda: a.lambda };
            (divergence_residual(&f, &domain, &g, &m)?, json!({ "weights": w, "a": g.a }))
        }
        DomainKind::Box => {
            let lo = if a.lo.is_empty() { vec![0.0; a.dim] } else { a.lo.clone() };
            let hi = if a.hi.is_empty() { vec![1.0; a.dim] } else { a.hi.clone() };
            if lo.len() != a.dim || hi.len() != a.dim || lo.iter().zip(&hi).any(|(l, h)| !(l < h)) {
                return Err(Error::parse("lo/hi", format!("need {} ordered bounds per side", a.dim)));
            }
            let g = Gauss::centred(vec![1.0; a.dim], a.t);
            let f = box_field(a)?;
            let domain = Domain::Box { lo, hi };
            (divergence_residual(&f, &domain, &g, &m)?, json!({ "domain": domain }))
        }
    };
    let mut table = Table::new(["face", "value", "error"]);
    for (k, (_, e)) in report.faces.iter().enumerate() {
        table.push(vec![k as f64, e.value, e.error]);
    }
    Ok(Outcome {
        n: a.dim,
        samples: samples_of(&m),
        lhs: report.lhs,
        rhs: report.rhs,
        residual: report.residual,
        stderr: report.error_bar,
        pass: within(&m, report.residual, report.error_bar, a.tol),
        results: json!({ "report": report, "setup": extra }),
        table: Some(table),
    })
}

pub(super) fn green(a: &GreenArgs, seed: u64) -> Result<Outcome> {
    let m = method(a.quadrature, a.tol, a.samples, seed);
    let n = a.dim;
    let (p, at, bt) = constant_a1(n, a.a1, a.degree)?;
    let w = build_weights(&p.a, &p.b, GeometricPattern::shipped())?;
    let setup = GreenSetup::new(&at, &bt, w, a.lambda, a.t)?;
    let tx = VariableSpace::tx(n);
    let mut u = MonomialSeries::variable(tx.clone(), 0);
    for i in 1..=n as u32 {
        u.add_term(crate::series::MultiIndex::var_pow(i, 2), -1.0);
    }
    let mut ws = vec![("1".to_string(), MonomialSeries::one(tx.clone()))];
    for i in 1..=n as u32 {
        ws.push((tx.names()[i as usize].clone(), MonomialSeries::variable(tx.clone(), i)));
    }
    let mut rows = Vec::new();
    let mut table = Table::new(["case", "lhs", "rhs", "residual", "error_bar"]);
    for (k, (name, wp)) in ws.iter().enumerate() {
        let r = green_residual(wp, &u, &setup, &m)?;
        table.push(vec![k as f64, r.lhs, r.rhs, r.residual, r.error_bar]);
        rows.push((name.clone(), r));
    }
    let pass = rows.iter().all(|(_, r)| within(&m, r.residual, r.error_bar, a.tol));
    let worst = rows.iter().map(|(_, r)| r.residual).fold(0.0, |m: f64, v| if v.abs() > m.abs() { v } else { m });
    let stderr = rows.iter().map(|(_, r)| r.error_bar).fold(0.0, f64::max);
    let first = &rows[0].1;
    Ok(Outcome {
        n,
        samples: samples_of(&m),
        lhs: first.lhs,
        rhs: first.rhs,
        residual: worst,
        stderr,
        pass,
        results: json!({
            "u": series_to_json(&u),
            "cases": rows.iter().map(|(name, r)| json!({ "w": name, "report": r })).collect::<Vec<_>>(),
            "weights": setup.weights,
            "lambda_over_a0_sq": a.lambda / setup.weights.a_sq(0),
        }),
        table: Some(table),
    })
}

fn pad(p: &LinearFirstOrderProblem<f64>, dim: usize) -> Result<LinearFirstOrderProblem<f64>> {
    let n = p.x_vars();
    if n > dim {
        return Err(Error::parse("dim", format!("problem has {n} x-variables, more than --dim {dim}")));
    }
    let cs = if p.time_dependent { VariableSpace::tx(dim) } else { VariableSpace::x(dim) };
    let mut a = p.a.clone();
    a.resize(dim, MonomialSeries::zero(cs));
    LinearFirstOrderProblem::new(&a, &p.b, &p.phi, p.time_dependent)
}

pub(super) fn holmgren(a: &HolmgrenArgs, seed: u64) -> Result<Outcome> {
    let p = pad(&linear_problem(&a.problem)?, a.dim)?;
    let u_tilde = match &a.u_tilde {
        Some(path) => Some(crate::series::series_from_json::<f64>(&read_json(path, "u-tilde")?)?),
        None => None,
    };
    let m = method(a.quadrature, a.tol, a.samples, seed);
    let moments = enumerate_multiindices(a.dim, a.max_moment)?.into_iter().map(|k| k.to_dense(a.dim)).collect();
    let opts = HolmgrenOptions {
        lambda: a.lambda,
        t: a.t,
        moments,
        solver_degree: a.degree,
        method: m,
        pattern: GeometricPattern::shipped(),
    };
    let r = holmgren_moment_demo(&p, u_tilde.as_ref(), &opts)?;
    let mut cols: Vec<String> = (1..=a.dim).map(|i| format!("k{i}")).collect();
    cols.extend(["moment_green", "moment_direct", "adjoint_defect", "error_bar"].map(String::from));
    let mut table = Table::new(cols);
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut worst_err: f64 = 0.0;
    for row in &r.rows {
        let diff = row.moment_green.value - row.moment_direct.value;
        let err = (row.moment_green.error.powi(2) + row.moment_direct.error.powi(2)).sqrt();
        pass &= within(&m, diff, err, a.tol);
        if diff.abs() >= worst.abs() {
            worst = diff;
        }
        worst_err = worst_err.max(err);
        let mut cells: Vec<f64> = row.k.iter().map(|&e| f64::from(e)).collect();
        cells.extend([row.moment_green.value, row.moment_direct.value, row.adjoint_defect.value, err]);
        table.push(cells);
    }
    let first = &r.rows[0];
    Ok(Outcome {
        n: a.dim,
        samples: samples_of(&m),
        lhs: first.moment_green.value,
        rhs: first.moment_direct.value,
        residual: worst,
        stderr: worst_err,
        pass,
        results: serde_json::to_value(&r)?,
        table: Some(table),
    })
}
