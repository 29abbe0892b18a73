//! Evaluates the geometric series over prime variables `x_i = p_i^{-s}`,
//! which is the Euler product for ζ(s), and compares with a direct sum.
//!
//! cargo run --example zeta_product -- 3

use ck_holmgren::series::{geometric_eval, nth_prime, PointOracle, TailRule};

fn main() {
    let s: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3.0);
    let primes = 100;
    let x = PointOracle::with_tail(Vec::new(), TailRule::PrimePowers { s });
    let direct: f64 = (1..=1_000_000u64).rev().map(|n| (n as f64).powf(-s)).sum();
    println!("s = {s}, {primes} primes (largest {})", nth_prime(primes - 1));
    for cap in [4, 8, 16, 32] {
        let (value, abs_value, _) = geometric_eval(&x, primes, cap);
        println!("cap {cap:>2}: {value:.12}  (abs {abs_value:.12})  diff {:+.3e}", value - direct);
    }
    println!("direct sum:  {direct:.12}");
}
