//! Builds the Gaussian weights for a linear problem and prints the
//! resulting standard deviations and ρ bounds.
//!
//! cargo run --example weight_scheme

use ck_holmgren::series::{MonomialSeries, MultiIndex, VariableSpace};
use ck_holmgren::wiener::{build_weights, GeometricPattern, WeightScheme};

fn main() {
    let shipped = WeightScheme::shipped();
    for i in 0..5 {
        println!("A_{i} = {:.6}  A_{i}^2 = {:.6}", shipped.a(i), shipped.a_sq(i));
    }
    println!("sum of A_i^2 = {}", shipped.sum_a_sq());

    let xs = VariableSpace::x(2);
    let mut a1 = MonomialSeries::one(xs.clone());
    a1.add_term(MultiIndex::var(0), 0.25);
    let a2 = MonomialSeries::variable(xs.clone(), 1).scale(&0.5);
    let b = MonomialSeries::zero(xs);
    let w = build_weights(&[a1, a2], &b, GeometricPattern::shipped()).unwrap();
    println!("rho0 = {:.6e}, rho1 = {:.6e}, bound at rho1 = {:.6}", w.rho0, w.rho1, w.rho1_bound);
}
