//! Green identity on H_λ for the transformed operator pair, n = 1.
//!
//! cargo run --release --example green_identity

use ck_holmgren::ck_solver::LinearFirstOrderProblem;
use ck_holmgren::series::{MonomialSeries, MultiIndex, VariableSpace};
use ck_holmgren::wiener::{change_of_variables, green_residual, GreenSetup, Method, WeightScheme};

fn main() {
    let xs = VariableSpace::x(1);
    let zero = MonomialSeries::zero(xs.clone());
    let p = LinearFirstOrderProblem::new(&[MonomialSeries::one(xs)], &zero, &zero, false).unwrap();
    let (a_t, b_t) = change_of_variables(&p, 8).unwrap();
    let setup = GreenSetup::new(&a_t, &b_t, WeightScheme::shipped(), 0.25, 1.0).unwrap();

    let tx = VariableSpace::tx(1);
    let mut u = MonomialSeries::variable(tx.clone(), 0);
    u.add_term(MultiIndex::var_pow(1, 2), -1.0);
    let ws = [("1", MonomialSeries::one(tx.clone())), ("x1", MonomialSeries::variable(tx, 1))];
    for (name, w) in &ws {
        let r = green_residual(w, &u, &setup, &Method::Quadrature { tol: 1e-10 }).unwrap();
        println!("W = {name:<3} lhs {:+.12} rhs {:+.12} residual {:+.1e}", r.lhs, r.rhs, r.residual);
    }
}
