//! The joint-measurement Svetlichny value scales linearly with the
//! sharpness, S_N^J = η·S_N, and therefore never beats 2^(N-1): at the GHZ
//! optimum with the largest admissible equal sharpness η = 1/√2 it lands
//! exactly on the hybrid bound.
//!
//! Run: `cargo run --example joint_measurement_scaling`

use svetlichny::inequality::{correlator_table, svetlichny_joint_value, svetlichny_value};
use svetlichny::measure::{equal_sharpness_max, joint_povm, Setting};
use svetlichny::optimize::maximize;
use svetlichny::qcore::{make_ghz, GhzPhase};

fn main() {
    let rho = make_ghz(3, GhzPhase::Plus).unwrap();
    let outcome = maximize(&rho, 24, 11, 1e-9).unwrap();
    let grid = outcome.best_angles.to_grid();
    let p1 = grid.party(1);
    let (a, a2) = (*p1.setting0.direction(), *p1.setting1.direction());
    let grid_rest = grid.parties()[1..].to_vec();

    let sharp = svetlichny_value(&correlator_table(&rho, &grid).unwrap());
    println!("sharp S3 at the optimum: {:.9}", sharp.value);
    println!(
        "eta cap for party 1's directions: {:.9}",
        equal_sharpness_max(&a, &a2)
    );
    println!();
    println!(
        "{:>8} {:>14} {:>14} {:>12}",
        "eta", "S3^J", "eta * S3", "difference"
    );
    for k in 1..=7 {
        let eta = f64::from(k) * 0.1;
        let joint = joint_povm(
            &Setting::new(a, eta).unwrap(),
            &Setting::new(a2, eta).unwrap(),
        )
        .unwrap();
        let joint_value = svetlichny_joint_value(&rho, &joint, &grid_rest).unwrap();
        let scaled = eta * sharp.value;
        println!(
            "{eta:>8.3} {joint_value:>14.9} {scaled:>14.9} {:>12.2e}",
            (joint_value - scaled).abs()
        );
    }

    let eta = std::f64::consts::FRAC_1_SQRT_2;
    let joint = joint_povm(
        &Setting::new(a, eta).unwrap(),
        &Setting::new(a2, eta).unwrap(),
    )
    .unwrap();
    let saturated = svetlichny_joint_value(&rho, &joint, &grid_rest).unwrap();
    println!();
    println!("at the admissibility cap eta = 1/sqrt(2):");
    println!("  S3^J = {saturated:.9}  (hybrid bound 4)");
    assert!((saturated - 4.0).abs() < 1e-6);

    // the same grid measured sharply breaks the hybrid bound, the joint
    // measurement never does
    assert!(sharp.violates_hybrid);
    assert!(saturated <= 4.0 + 1e-9);
}
