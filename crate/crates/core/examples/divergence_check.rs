//! Gaussian divergence identity on a box, by adaptive quadrature and by
//! Monte Carlo.
//!
//! cargo run --release --example divergence_check

use ck_holmgren::series::{MonomialSeries, MultiIndex, VariableSpace};
use ck_holmgren::wiener::{divergence_residual, Domain, Gauss, Method, PolyField};

fn main() {
    let sp = VariableSpace::new(["y1", "y2"]);
    // F = (1 + y1 y2, y2^2)
    let f1 = MonomialSeries::from_terms(
        sp.clone(),
        [(MultiIndex::zero(), 1.0), (MultiIndex::new(vec![(0, 1), (1, 1)]).unwrap(), 1.0)],
        None,
    );
    let f2 = MonomialSeries::from_terms(sp, [(MultiIndex::var_pow(1, 2), 1.0)], None);
    let field = PolyField::new(vec![f1, f2]).unwrap();
    let g = Gauss::centred(vec![1.0, 0.7], 1.0);
    let dom = Domain::Box { lo: vec![-0.5, 0.0], hi: vec![1.0, 1.2] };

    for m in [Method::Quadrature { tol: 1e-12 }, Method::MonteCarlo { samples: 200_000, seed: 1 }] {
        let r = divergence_residual(&field, &dom, &g, &m).unwrap();
        println!("{:<10} volume {:.10} flux {:.10} residual {:+.2e} ± {:.1e}", r.method, r.lhs, r.rhs, r.residual, r.error_bar);
        for (face, est) in &r.faces {
            println!("    {face:<12} {:+.10}", est.value);
        }
    }
}
