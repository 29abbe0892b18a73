//! Distances between points of the sequence space and the randomized
//! property suite for the p-norm topologies.
//!
//! cargo run --example topology_suite

use ck_holmgren::series::{PointOracle, TailRule};
use ck_holmgren::topology::{ball_contains, dist, run_property_suite, MetricSpec};

fn main() {
    let x = PointOracle::with_tail(vec![1.0, 0.5], TailRule::Geometric { scale: 1.0, ratio: 0.5 });
    let y = PointOracle::with_tail(vec![1.0], TailRule::Geometric { scale: 0.25, ratio: 0.3 });
    for p in [0.5, 1.0, 2.0] {
        let spec = MetricSpec::new(p).unwrap();
        let d = dist(&x, &y, spec, 64).unwrap();
        let inside = ball_contains(&x, &y, 0.5, spec, 64).unwrap();
        println!("p = {p}: dist in [{:.6}, {:.6}], y in x + B_0.5: {inside:?}", d.lower, d.upper);
    }
    let d = dist(&x, &y, MetricSpec::sup(), 64).unwrap();
    println!("sup: dist in [{:.6}, {:.6}]", d.lower, d.upper);

    // (i+1)^-2 is not summable after raising to the power 1/2
    let slow = PointOracle::with_tail(Vec::new(), TailRule::PowerLaw { scale: 1.0, exponent: -2.0 });
    println!("p = 0.5 with a power-law tail: {:?}", dist(&x, &slow, MetricSpec::new(0.5).unwrap(), 64).err());

    let report = run_property_suite(500, 1);
    println!("{report:#?}");
    println!("pass: {}", report.pass());
}
