//! Sampling the truncated Gaussian measure: the scaling law, the Fernique
//! probe and a Hermite projection of a disk indicator.
//!
//! cargo run --release --example gaussian_measure

use ck_holmgren::wiener::{hermite_projection, GaussianSampler, TestSet, WeightScheme};

fn main() {
    let w = WeightScheme::shipped();
    let s = GaussianSampler::from_weights(&w, 2, 1.0, 7).unwrap();
    let ball = TestSet::Ball { center: vec![0.0; 3], radius: 0.5 };
    for scale in [0.5, 2.0] {
        let r = s.scaling_check(scale, &ball, 200_000).unwrap();
        println!("scale {scale}: {:.5} vs {:.5} (diff {:+.1e}, σ {:.1e})", r.lhs.mean, r.rhs.mean, r.diff, r.combined_stderr);
    }

    let one = GaussianSampler::diagonal(vec![1.0], 1.0, 3).unwrap();
    for eps in [0.1, 0.25, 0.5] {
        let f = one.fernique_probe(eps, 200_000);
        println!("fernique eps {eps}: {:.6} ± {:.1e} (closed form {:?}, stable {})", f.estimate, f.stderr, f.closed_form, f.stable);
    }

    let disk = GaussianSampler::diagonal(vec![w.a(1), w.a(2)], 1.0, 5).unwrap();
    let ind = |y: &[f64]| if y[0] * y[0] + y[1] * y[1] < 0.25 { 1.0 } else { 0.0 };
    for d in [0, 2, 4, 6] {
        let h = hermite_projection(ind, d, &disk, 200_000).unwrap();
        println!("hermite degree {d}: residual^2 {:.5} ± {:.1e}", h.residual.powi(2), h.residual_sq_stderr);
    }
}
