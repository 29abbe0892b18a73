//! Solves a few Cauchy problems exactly over the rationals and prints the
//! Taylor coefficients.
//!
//! cargo run --example cauchy_kowalevski

use ck_holmgren::ck_solver::{CauchyProblem, Centering, ProblemSpace};
use ck_holmgren::series::{MonomialSeries, MultiIndex, VariableSpace};
use num::{BigInt, BigRational};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn show(title: &str, p: &CauchyProblem<Q>, degree: u32) {
    let s = p.solve(degree).unwrap();
    let residual = p.residual(&s, s.residual_degree).unwrap();
    println!("{title}  (residual zero to degree {}: {})", s.residual_degree, residual.is_zero());
    for (alpha, c) in s.series.sorted_terms() {
        println!("  {alpha:?}  {c}");
    }
}

fn main() {
    let ps = ProblemSpace::new(1, 1).unwrap();
    let xs = VariableSpace::x(1);

    // u_t = u, u(0) = 1
    let exp = CauchyProblem::new(1, 1, &ps.var(ps.u()), &[MonomialSeries::one(xs.clone())], Centering::Raw).unwrap();
    show("u_t = u", &exp, 6);

    // u_t = u_x, u(0, x) = x^3
    let ux = ps.var::<Q>(ps.w(&MultiIndex::var(0), 0).unwrap());
    let cube = MonomialSeries::from_terms(xs.clone(), [(MultiIndex::var_pow(0, 3), q(1))], None);
    show("u_t = u_x", &CauchyProblem::new(1, 1, &ux, &[cube], Centering::Raw).unwrap(), 6);

    // u_tt = u_xx, u = x^2, u_t = x
    let ps2 = ProblemSpace::new(2, 1).unwrap();
    let uxx = ps2.var::<Q>(ps2.w(&MultiIndex::var_pow(0, 2), 0).unwrap());
    let phi = [
        MonomialSeries::from_terms(xs.clone(), [(MultiIndex::var_pow(0, 2), q(1))], None),
        MonomialSeries::variable(xs, 0),
    ];
    show("u_tt = u_xx", &CauchyProblem::new(2, 1, &uxx, &phi, Centering::Raw).unwrap(), 6);
}
