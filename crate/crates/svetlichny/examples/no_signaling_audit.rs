//! The co-parties cannot signal to the joint measurer: the probability that
//! the joint pair agrees is the same constant ½(1 + η₁η₂ a·a') for every
//! co-party setting choice, exactly and in Monte Carlo.
//!
//! Run: `cargo run --example no_signaling_audit`

use svetlichny::inequality::PartySettings;
use svetlichny::measure::{joint_povm, Setting};
use svetlichny::qcore::{make_ghz, random_direction, GhzPhase};
use svetlichny::simulate::audit_no_signaling;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 424_242;
const SHOTS: u64 = 100_000;

fn main() {
    let rho = make_ghz(3, GhzPhase::Plus).unwrap();
    let eta = std::f64::consts::FRAC_1_SQRT_2;
    let joint = joint_povm(
        &Setting::new(svetlichny::qcore::Direction::x_axis(), eta).unwrap(),
        &Setting::new(svetlichny::qcore::Direction::y_axis(), eta).unwrap(),
    )
    .unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let grid_rest: Vec<PartySettings> = (0..2)
        .map(|_| PartySettings::sharp(random_direction(&mut rng), random_direction(&mut rng)))
        .collect();

    let report = audit_no_signaling(&rho, &joint, &grid_rest, Some(SHOTS), SEED).unwrap();
    println!(
        "{:<32} {:>14} {:>14} {:>12} {:>6}",
        "check", "lhs", "rhs", "slack", "pass"
    );
    for check in &report.checks {
        println!(
            "{:<32} {:>14.9} {:>14.9} {:>12.2e} {:>6}",
            check.name, check.lhs, check.rhs, check.slack, check.passed
        );
    }
    println!();
    println!("overall: {}", report.overall);
    println!("(orthogonal directions at eta = 1/sqrt(2) pin the agreement rate to exactly 1/2)");
    assert!(report.overall);
}
