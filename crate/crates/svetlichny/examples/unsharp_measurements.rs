//! Unsharp measurements in isolation: the effects ½[I ± η d·σ], the
//! proportionality between their outcome bias and the sharp expectation,
//! and the exact outcome distribution they induce.
//!
//! Run: `cargo run --example unsharp_measurements`

use svetlichny::measure::{unsharp_povm, verify_proportionality, Setting};
use svetlichny::qcore::{bloch_operator, expectation, random_state, Direction, Purity};
use svetlichny::simulate::{outcome_distribution, PartyPovm};

fn main() {
    let rho = random_state(1, Purity::Mixed, 8).unwrap();
    let d = Direction::from_angles(1.0, 0.4);
    let sharp_expectation = expectation(&rho, &bloch_operator(&d)).unwrap();
    println!("random qubit state, direction (theta=1.0, phi=0.4)");
    println!("sharp expectation <d*sigma> = {sharp_expectation:+.9}");
    println!();
    println!(
        "{:>6} {:>14} {:>14} {:>12}",
        "eta", "P(+1)", "bias", "eta*<d*sigma>"
    );
    for k in 0..=4 {
        let eta = f64::from(k) * 0.25;
        let setting = Setting::new(d, eta).unwrap();
        let povm = unsharp_povm(&setting);
        let pmf = outcome_distribution(&rho, &[PartyPovm::Binary(povm)]).unwrap();
        let p_plus = pmf.probs()[0];
        let bias = pmf.probs()[0] - pmf.probs()[1];
        println!(
            "{eta:>6.2} {p_plus:>14.9} {bias:>+14.9} {:>+12.9}",
            eta * sharp_expectation
        );
        // the residual of the proportionality identity is zero to rounding
        let residual = verify_proportionality(&rho, &setting).unwrap();
        assert!(residual <= 1e-12);
    }
    println!();
    println!("the outcome bias equals eta times the sharp expectation at every eta");
}
