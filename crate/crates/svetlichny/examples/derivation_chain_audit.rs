//! Machine-checks every step that turns joint measurability plus
//! no-signaling into the bound S_N^J ≤ 2^(N-1): the decomposition of each
//! expectation combination into agreement probabilities, the dropped-term
//! inequalities, the even/odd tuple split, and the final bound — at N = 3
//! on the saturating GHZ configuration and at N = 4 on a random one.
//!
//! Run: `cargo run --example derivation_chain_audit`

use svetlichny::inequality::PartySettings;
use svetlichny::measure::{equal_sharpness_max, joint_povm, Setting};
use svetlichny::optimize::maximize;
use svetlichny::qcore::{make_ghz, random_direction, random_state, GhzPhase, Purity};
use svetlichny::simulate::{audit_chain_n, audit_chain_three, AuditReport};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn print_report(title: &str, report: &AuditReport) {
    println!("== {title}");
    for check in &report.checks {
        println!(
            "  {:<34} lhs {:>12.9}  rhs {:>12.9}  slack {:>10.2e}  {}",
            check.name,
            check.lhs,
            check.rhs,
            check.slack,
            if check.passed { "ok" } else { "FAIL" }
        );
    }
    println!("  overall: {}", report.overall);
    println!();
}

fn main() {
    // N = 3: GHZ at the optimizer's directions, joint party at the cap
    let rho = make_ghz(3, GhzPhase::Plus).unwrap();
    let grid = maximize(&rho, 24, 5, 1e-9).unwrap().best_angles.to_grid();
    let p1 = grid.party(1);
    let eta = std::f64::consts::FRAC_1_SQRT_2;
    let joint = joint_povm(
        &Setting::new(*p1.setting0.direction(), eta).unwrap(),
        &Setting::new(*p1.setting1.direction(), eta).unwrap(),
    )
    .unwrap();
    let report = audit_chain_three(&rho, &joint, &grid.parties()[1..]).unwrap();
    print_report("three parties, GHZ saturation (S3^J = 4 exactly)", &report);
    assert!(report.overall);

    // N = 4: random state, random admissible joint measurement
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let rho4 = random_state(4, Purity::Mixed, 99).unwrap();
    let a = random_direction(&mut rng);
    let a2 = random_direction(&mut rng);
    let eta4 = 0.8 * equal_sharpness_max(&a, &a2);
    let joint4 = joint_povm(
        &Setting::new(a, eta4).unwrap(),
        &Setting::new(a2, eta4).unwrap(),
    )
    .unwrap();
    let grid_rest: Vec<PartySettings> = (0..3)
        .map(|_| {
            PartySettings::new(
                Setting::new(random_direction(&mut rng), rng.random_range(0.0..1.0)).unwrap(),
                Setting::new(random_direction(&mut rng), rng.random_range(0.0..1.0)).unwrap(),
            )
        })
        .collect();
    let report4 = audit_chain_n(&rho4, &joint4, &grid_rest).unwrap();
    print_report("four parties, random configuration", &report4);
    assert!(report4.overall);
}
