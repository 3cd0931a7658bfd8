//! Hybrid and quantum bounds for growing party counts, plus the even/odd
//! co-party tuple split behind the joint-measurement bound.
//!
//! Run: `cargo run --example bounds_table`

use svetlichny::inequality::{bounds, parity_counts};

fn main() {
    println!(
        "{:>3} {:>12} {:>16} {:>10} {:>10}",
        "N", "hybrid", "quantum", "even k'", "odd k'"
    );
    for n in 2..=8 {
        let (hybrid, quantum) = bounds(n).unwrap();
        let (even, odd) = parity_counts(n).unwrap();
        println!("{n:>3} {hybrid:>12.1} {quantum:>16.9} {even:>10} {odd:>10}");
    }
    println!();
    println!("hybrid  = 2^(N-1), the bound genuine N-party correlations must beat");
    println!("quantum = 2^(N-1)*sqrt(2), the largest value quantum mechanics allows");
}
