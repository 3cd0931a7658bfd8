//! The optimizer saturates 2^(N-1)·√2 on GHZ states for N = 3, 4, 5.
//!
//! Run: `cargo run --example quantum_bound_scaling --release`

use std::time::Instant;

use svetlichny::inequality::bounds;
use svetlichny::optimize::{default_restarts, maximize};
use svetlichny::qcore::{make_ghz, GhzPhase};

fn main() {
    println!(
        "{:>3} {:>16} {:>16} {:>10} {:>8}",
        "N", "optimizer best", "quantum bound", "error", "seconds"
    );
    for n in 3..=5 {
        let started = Instant::now();
        let rho = make_ghz(n, GhzPhase::Plus).unwrap();
        let outcome = maximize(&rho, default_restarts(n), 7, 1e-9).unwrap();
        let (_, quantum) = bounds(n).unwrap();
        println!(
            "{n:>3} {:>16.10} {quantum:>16.10} {:>10.2e} {:>8.2}",
            outcome.best_value,
            (outcome.best_value - quantum).abs(),
            started.elapsed().as_secs_f64()
        );
        assert!((outcome.best_value - quantum).abs() < 1e-5);
    }
}
