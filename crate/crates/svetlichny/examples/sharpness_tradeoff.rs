//! How the joint-measurability region shrinks with the angle between the
//! two measured directions: the Busch margin at full sharpness goes
//! negative while the equal-sharpness maximum falls from 1 to √2/2.
//!
//! Run: `cargo run --example sharpness_tradeoff`

use svetlichny::measure::{busch_margin, equal_sharpness_max, joint_povm, Setting};
use svetlichny::qcore::Direction;

fn main() {
    println!(
        "{:>7} {:>16} {:>16} {:>12}",
        "angle", "margin at eta=1", "max equal eta", "admissible"
    );
    let x = Direction::x_axis();
    for degrees in (0..=90).step_by(10) {
        let radians = f64::from(degrees).to_radians();
        let other = Direction::from_angles(std::f64::consts::FRAC_PI_2, radians);
        let sharp1 = Setting::sharp(x);
        let sharp2 = Setting::sharp(other);
        let margin = busch_margin(&sharp1, &sharp2);
        let eta_max = equal_sharpness_max(&x, &other);
        println!(
            "{degrees:>6}° {margin:>16.9} {eta_max:>16.9} {:>12}",
            margin >= 0.0
        );
    }

    println!();
    let y = Direction::y_axis();
    let eta = equal_sharpness_max(&x, &y);
    println!("orthogonal pair at the equal-sharpness maximum eta = {eta:.9}:");
    let joint = joint_povm(
        &Setting::new(x, eta).unwrap(),
        &Setting::new(y, eta).unwrap(),
    )
    .unwrap();
    for (mu, nu) in svetlichny::measure::JointPovm::outcome_pairs() {
        let effect = joint.effect(mu, nu);
        let min = svetlichny::qcore::min_eigenvalue_hermitian(effect).unwrap();
        println!(
            "  G({:+},{:+}) min eigenvalue = {min:+.3e}",
            mu.sign(),
            nu.sign()
        );
    }
    println!("every effect sits exactly on the positivity boundary");

    // sharper than the cap: the pair stops being jointly measurable
    let too_sharp = Setting::new(x, eta + 0.05).unwrap();
    let partner = Setting::new(y, eta + 0.05).unwrap();
    match joint_povm(&too_sharp, &partner) {
        Err(err) => println!("eta = {:.4} is rejected: {err}", eta + 0.05),
        Ok(_) => unreachable!("above the Busch cap"),
    }
}
