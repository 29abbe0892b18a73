use ck_holmgren::series::{PointOracle, TailRule};
use ck_holmgren::topology::{ball_contains, dist, norm_of_difference, run_property_suite, MetricSpec, Tri};
use proptest::prelude::*;

fn vector() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), -3.0f64..3.0], 1..10)
}

proptest! {
    #[test]
    fn norms_decrease_in_p(x in vector(), p in 1.0f64..6.0, dq in 0.0f64..4.0, sup in any::<bool>()) {
        let q = if sup { f64::INFINITY } else { p + dq };
        let np = MetricSpec::new(p).unwrap().size(&x);
        let nq = MetricSpec { p: q }.size(&x);
        prop_assert!(nq <= np * (1.0 + 1e-12) + 1e-300);
        // so every B_r^p ball sits inside B_r^q
        let r = np * 1.5 + 0.1;
        let origin = PointOracle::finite(vec![]);
        let pt = PointOracle::finite(x.clone());
        if ball_contains(&origin, &pt, r, MetricSpec { p }, 0).unwrap() == Tri::True {
            prop_assert_eq!(ball_contains(&origin, &pt, r, MetricSpec { p: q }, 0).unwrap(), Tri::True);
        }
    }

    #[test]
    fn small_p_sums(x in prop::collection::vec(-1.0f64..1.0, 1..8), p in 0.05f64..0.9, frac in 0.01f64..1.0) {
        let q = p + (1.0 - p) * frac * 0.99;
        let sp: f64 = x.iter().map(|v| v.abs().powf(p)).sum();
        let scaled: Vec<f64> = if sp > 1.0 { x.iter().map(|v| v / sp.powf(1.0 / p)).collect() } else { x.clone() };
        let sp = MetricSpec::new(p).unwrap().size(&scaled);
        let sq = MetricSpec::new(q).unwrap().size(&scaled);
        prop_assert!(sp <= 1.0 + 1e-12);
        prop_assert!(sq <= sp + 1e-12);
    }

    #[test]
    fn metric_axioms(x in vector(), y in vector(), z in vector(), p in prop_oneof![0.1f64..1.0, 1.0f64..5.0, Just(f64::INFINITY)]) {
        let spec = MetricSpec { p };
        let (px, py, pz) = (PointOracle::finite(x), PointOracle::finite(y), PointOracle::finite(z));
        let d = |a: &PointOracle, b: &PointOracle| {
            let i = dist(a, b, spec, 0).unwrap();
            assert!(i.is_exact());
            i.lower
        };
        prop_assert_eq!(d(&px, &px), 0.0);
        prop_assert_eq!(d(&px, &py), d(&py, &px));
        prop_assert!(d(&px, &pz) <= d(&px, &py) + d(&py, &pz) + 1e-12);
        prop_assert!((0.0..=1.0).contains(&d(&px, &py)));
    }

    #[test]
    fn tail_intervals_bracket_long_truncations(scale in 0.1f64..2.0, ratio in 0.1f64..0.9, p in 1.0f64..3.0) {
        let x = PointOracle::with_tail(vec![0.3], TailRule::Geometric { scale, ratio });
        let y = PointOracle::finite(vec![-0.2, 0.1]);
        let spec = MetricSpec { p };
        let coarse = norm_of_difference(&x, &y, spec, 4).unwrap();
        let fine = norm_of_difference(&x, &y, spec, 200).unwrap();
        prop_assert!(coarse.lower <= fine.lower + 1e-12);
        prop_assert!(fine.upper <= coarse.upper + 1e-12);
        prop_assert!(fine.upper - fine.lower <= coarse.upper - coarse.lower + 1e-12);
    }
}

#[test]
fn randomized_suite_is_clean() {
    for seed in [1, 2, 3] {
        let r = run_property_suite(2000, seed);
        assert!(r.pass(), "{r:?}");
    }
}
