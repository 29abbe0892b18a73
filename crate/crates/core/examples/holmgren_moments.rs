//! Moments of Ũ on the top face l_λ computed through the Green identity and
//! by direct surface integration.
//!
//! cargo run --release --example holmgren_moments

use ck_holmgren::ck_solver::LinearFirstOrderProblem;
use ck_holmgren::series::{MonomialSeries, MultiIndex, VariableSpace};
use ck_holmgren::wiener::{holmgren_moment_demo, GeometricPattern, HolmgrenOptions, Method};

fn main() {
    let xs = VariableSpace::x(2);
    let a = [MonomialSeries::one(xs.clone()).scale(&0.5), MonomialSeries::zero(xs.clone())];
    let b = MonomialSeries::variable(xs.clone(), 0).scale(&0.25);
    let p = LinearFirstOrderProblem::new(&a, &b, &MonomialSeries::zero(xs), false).unwrap();

    // Ũ = t - |x|^2
    let tx = VariableSpace::tx(2);
    let mut u = MonomialSeries::variable(tx.clone(), 0);
    u.add_term(MultiIndex::var_pow(1, 2), -1.0);
    u.add_term(MultiIndex::var_pow(2, 2), -1.0);

    let opts = HolmgrenOptions {
        lambda: 0.1,
        t: 1.0,
        moments: vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]],
        solver_degree: 8,
        method: Method::Quadrature { tol: 1e-9 },
        pattern: GeometricPattern::shipped(),
    };
    for (label, ut) in [("phi = 0", None), ("U~ = t - |x|^2", Some(&u))] {
        let r = holmgren_moment_demo(&p, ut, &opts).unwrap();
        println!("{label}");
        for row in &r.rows {
            println!(
                "  k = {:?}: green {:+.10} direct {:+.10} adjoint defect {:+.1e}",
                row.k, row.moment_green.value, row.moment_direct.value, row.adjoint_defect.value
            );
        }
    }
}
