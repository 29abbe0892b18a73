#![allow(dead_code)]

use ck_holmgren::ck_solver::{CauchyProblem, Centering, ProblemSpace};
use ck_holmgren::scalar::factorial;
use ck_holmgren::series::{MonomialSeries, MultiIndex, VariableSpace};
use num::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn qi(v: i64) -> Q {
    Q::from_integer(v.into())
}

pub fn random_poly(rng: &mut ChaCha8Rng, space: &VariableSpace, max_terms: usize) -> MonomialSeries<Q> {
    let mut s = MonomialSeries::zero(space.clone());
    for _ in 0..rng.random_range(0..=max_terms) {
        let deg = rng.random_range(0..=2);
        let mut e = Vec::new();
        for _ in 0..deg {
            e.push((rng.random_range(0..space.len()) as u32, 1));
        }
        let c = rng.random_range(-3i64..=3);
        let a = e.iter().fold(MultiIndex::zero(), |acc, &(v, k)| acc.add(&MultiIndex::var_pow(v, k)));
        s.add_term(a, qi(c));
    }
    s
}

pub fn random_problem(rng: &mut ChaCha8Rng) -> CauchyProblem<Q> {
    let m = rng.random_range(1..=2u32);
    let n = rng.random_range(1..=3usize);
    let ps = ProblemSpace::new(m, n).unwrap();
    let f = random_poly(rng, &ps.space, 4);
    let phi: Vec<_> = (0..m).map(|_| random_poly(rng, &ps.x_space, 3)).collect();
    let centering = if rng.random_bool(0.5) { Centering::Raw } else { Centering::Jet };
    CauchyProblem::new(m, n, &f, &phi, centering).unwrap()
}


/// Residual through `degree − m` is exactly zero, the first `m` time
/// layers reproduce the data and a second solve is identical. Returns
/// whether the solution has terms beyond the data layers.
pub fn check_problem(p: &CauchyProblem<Q>, degree: u32) -> Result<bool, String> {
    let s = p.solve(degree).map_err(|e| e.to_string())?;
    if s.residual_degree != degree - p.m() {
        return Err(format!("residual degree {}", s.residual_degree));
    }
    let r = p.residual(&s, s.residual_degree).map_err(|e| e.to_string())?;
    if !r.is_zero() {
        return Err(format!("nonzero residual {r:?}"));
    }
    for (k, phi) in p.phi.iter().enumerate() {
        let kf: Q = factorial(k as u32);
        for (a, c) in s.series.iter() {
            if a.exponent(0) == k as u32 {
                let beta = MultiIndex::new(a.entries().iter().filter(|e| e.0 > 0).map(|&(v, e)| (v - 1, e)).collect())
                    .map_err(|e| e.to_string())?;
                if c.clone() * kf.clone() != phi.coeff(&beta) {
                    return Err(format!("layer {k} differs from the data at {beta:?}"));
                }
            }
        }
        for (b, c) in phi.iter() {
            if b.degree() + k as u32 <= degree {
                let a = b.remap(|v| v + 1).add(&MultiIndex::var_pow(0, k as u32));
                if s.series.coeff(&a) * kf.clone() != *c {
                    return Err(format!("datum term {b:?} of layer {k} missing"));
                }
            }
        }
    }
    let again = p.solve(degree).map_err(|e| e.to_string())?;
    if again.series != s.series {
        return Err("second solve differs".into());
    }
    let moves = s.series.iter().any(|(a, _)| a.exponent(0) >= p.m());
    Ok(moves)
}
