//! Computes the majorant radius of a linear first-order problem and checks
//! that the solved series decays at half that radius.
//!
//! cargo run --example majorant_radius

use ck_holmgren::ck_solver::{degree_ratios, LinearFirstOrderProblem};
use ck_holmgren::series::{MonomialSeries, MultiIndex, VariableSpace};

fn main() {
    let xs = VariableSpace::x(2);
    let mut a1 = MonomialSeries::one(xs.clone());
    a1.add_term(MultiIndex::var(1), 0.5);
    let a2 = MonomialSeries::variable(xs.clone(), 0);
    let b = MonomialSeries::one(xs.clone());
    let phi = MonomialSeries::from_terms(xs, [(MultiIndex::var_pow(0, 2), 1.0), (MultiIndex::var(1), -1.0)], None);
    let p = LinearFirstOrderProblem::new(&[a1, a2], &b, &phi, false).unwrap();

    let (r, cert) = p.majorant_radius(1.0, &p.default_witness(1.0), 12).unwrap();
    println!("r = {r:.6e}");
    println!("majorant partial sums: {:?}", cert.partial_sums);

    let s = p.solve(10).unwrap();
    for (d, ratio) in degree_ratios(&s.series, &[0.5 * r; 3]).iter().enumerate() {
        println!("degree {:>2}: ratio {ratio:.4}", d + 1);
    }
}
