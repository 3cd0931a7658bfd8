//! Projective, unsharp, and joint qubit measurements.
//!
//! A binary measurement with direction `d` and sharpness `η` has effects
//! `½[I ± η d·σ]`. Two such measurements admit a joint four-outcome POVM
//! exactly when the Busch margin `2 − (|η₁a + η₂a'| + |η₁a − η₂a'|)` is
//! nonnegative; the explicit joint observable used here is
//! `G_{μν} = ¼[(1 + μν η₁η₂ a·a')I + (μη₁a + νη₂a')·σ]`.

use crate::error::{Error, Result};
use crate::qcore::{
    bloch_operator, expectation, min_eigenvalue_hermitian, ComplexMatrix, DensityMatrix, Direction,
    C64,
};

const EFFECT_PSD_TOL: f64 = -1e-12;
const COMPLETENESS_TOL: f64 = 1e-12;
const ADMISSIBILITY_SLACK: f64 = -1e-12;

/// A ±1-valued measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    /// The outcome as the signed value ±1.
    pub fn value(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Result<Self> {
        match sign {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::InvalidPovm {
                reason: format!("outcome sign must be ±1, got {other}"),
            }),
        }
    }
}

/// One party's measurement choice: a direction plus a sharpness in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setting {
    direction: Direction,
    sharpness: f64,
}

impl Setting {
    pub fn new(direction: Direction, sharpness: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&sharpness) {
            return Err(Error::SharpnessOutOfRange { value: sharpness });
        }
        Ok(Self {
            direction,
            sharpness,
        })
    }

    /// Fully sharp (projective) setting.
    pub fn sharp(direction: Direction) -> Self {
        Self {
            direction,
            sharpness: 1.0,
        }
    }

    pub fn direction(&self) -> &Direction {
        &self.direction
    }

    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }

    /// Sharpness 0 yields the trivial POVM {I/2, I/2}; the measurement model
    /// proper assumes 0 < η ≤ 1.
    pub fn is_degenerate(&self) -> bool {
        self.sharpness == 0.0
    }
}

/// Two-outcome POVM with effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryPovm {
    plus: ComplexMatrix,
    minus: ComplexMatrix,
}

impl BinaryPovm {
    pub fn new(plus: ComplexMatrix, minus: ComplexMatrix) -> Result<Self> {
        let sum = &plus + &minus;
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(2));
        if dev > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm {
                reason: format!("effects sum deviates from identity by {dev:.3e}"),
            });
        }
        for (name, effect) in [("plus", &plus), ("minus", &minus)] {
            let min = min_eigenvalue_hermitian(effect)?;
            if min < EFFECT_PSD_TOL {
                return Err(Error::InvalidPovm {
                    reason: format!("{name} effect has eigenvalue {min:.3e}"),
                });
            }
        }
        Ok(Self { plus, minus })
    }

    pub fn effect(&self, outcome: Outcome) -> &ComplexMatrix {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Minus => &self.minus,
        }
    }

    pub fn plus(&self) -> &ComplexMatrix {
        &self.plus
    }

    pub fn minus(&self) -> &ComplexMatrix {
        &self.minus
    }
}

/// Sharp measurement along `d`: two rank-1 orthogonal projectors.
pub fn projective_povm(d: &Direction) -> BinaryPovm {
    unsharp_povm(&Setting::sharp(*d))
}

/// Effects `½[I ± η d·σ]`; reduces to the projective POVM at η = 1.
pub fn unsharp_povm(s: &Setting) -> BinaryPovm {
    let identity = ComplexMatrix::identity(2);
    let scaled = bloch_operator(s.direction()).scale_re(s.sharpness());
    let plus = (&identity + &scaled).scale_re(0.5);
    let minus = (&identity - &scaled).scale_re(0.5);
    BinaryPovm { plus, minus }
}

fn weighted_sum(c1: f64, d1: &Direction, c2: f64, d2: &Direction) -> [f64; 3] {
    let a = d1.components();
    let b = d2.components();
    [
        c1 * a[0] + c2 * b[0],
        c1 * a[1] + c2 * b[1],
        c1 * a[2] + c2 * b[2],
    ]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `w·σ` for an arbitrary (not necessarily unit) 3-vector.
fn bloch_combination(w: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(w[2], 0.0), C64::new(w[0], -w[1])],
        vec![C64::new(w[0], w[1]), C64::new(-w[2], 0.0)],
    ])
}

/// `2 − (|η₁a + η₂a'| + |η₁a − η₂a'|)`; the joint measurement of the two
/// settings is admissible exactly when this is nonnegative.
pub fn busch_margin(s1: &Setting, s2: &Setting) -> f64 {
    let plus = norm3(weighted_sum(
        s1.sharpness(),
        s1.direction(),
        s2.sharpness(),
        s2.direction(),
    ));
    let minus = norm3(weighted_sum(
        s1.sharpness(),
        s1.direction(),
        -s2.sharpness(),
        s2.direction(),
    ));
    2.0 - (plus + minus)
}

/// Largest equal sharpness `η` for which the joint measurement of `a` and
/// `a'` remains admissible: `2 / (|a + a'| + |a − a'|)`, always in [√2/2, 1].
pub fn equal_sharpness_max(a: &Direction, a2: &Direction) -> f64 {
    let plus = norm3(weighted_sum(1.0, a, 1.0, a2));
    let minus = norm3(weighted_sum(1.0, a, -1.0, a2));
    2.0 / (plus + minus)
}

/// Four-outcome POVM jointly measuring two unsharp observables; the two
/// binary marginals recover the individual unsharp POVMs.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPovm {
    effects: [ComplexMatrix; 4],
    settings: (Setting, Setting),
}

impl JointPovm {
    fn index(mu: Outcome, nu: Outcome) -> usize {
        match (mu, nu) {
            (Outcome::Plus, Outcome::Plus) => 0,
            (Outcome::Plus, Outcome::Minus) => 1,
            (Outcome::Minus, Outcome::Plus) => 2,
            (Outcome::Minus, Outcome::Minus) => 3,
        }
    }

    /// The effect `G_{μν}` for joint outcomes (μ, ν).
    pub fn effect(&self, mu: Outcome, nu: Outcome) -> &ComplexMatrix {
        &self.effects[Self::index(mu, nu)]
    }

    /// Outcome pairs in the fixed enumeration order (+,+), (+,−), (−,+), (−,−).
    pub fn outcome_pairs() -> [(Outcome, Outcome); 4] {
        [
            (Outcome::Plus, Outcome::Plus),
            (Outcome::Plus, Outcome::Minus),
            (Outcome::Minus, Outcome::Plus),
            (Outcome::Minus, Outcome::Minus),
        ]
    }

    pub fn settings(&self) -> (&Setting, &Setting) {
        (&self.settings.0, &self.settings.1)
    }

    /// Marginal binary POVM for the first observable (sum over ν).
    pub fn first_marginal(&self) -> BinaryPovm {
        let plus =
            self.effect(Outcome::Plus, Outcome::Plus) + self.effect(Outcome::Plus, Outcome::Minus);
        let minus = self.effect(Outcome::Minus, Outcome::Plus)
            + self.effect(Outcome::Minus, Outcome::Minus);
        BinaryPovm { plus, minus }
    }

    /// Marginal binary POVM for the second observable (sum over μ).
    pub fn second_marginal(&self) -> BinaryPovm {
        let plus =
            self.effect(Outcome::Plus, Outcome::Plus) + self.effect(Outcome::Minus, Outcome::Plus);
        let minus = self.effect(Outcome::Plus, Outcome::Minus)
            + self.effect(Outcome::Minus, Outcome::Minus);
        BinaryPovm { plus, minus }
    }
}

/// Builds the joint observable of two settings, or fails with the Busch
/// margin when the pair is inadmissible.
pub fn joint_povm(s1: &Setting, s2: &Setting) -> Result<JointPovm> {
    let margin = busch_margin(s1, s2);
    if margin < ADMISSIBILITY_SLACK {
        return Err(Error::InadmissibleJointMeasurement { margin });
    }
    let gamma = s1.sharpness() * s2.sharpness() * s1.direction().dot(s2.direction());
    let identity = ComplexMatrix::identity(2);
    let mut effects = Vec::with_capacity(4);
    for (mu, nu) in JointPovm::outcome_pairs() {
        let w = weighted_sum(
            mu.value() * s1.sharpness(),
            s1.direction(),
            nu.value() * s2.sharpness(),
            s2.direction(),
        );
        let scalar = 1.0 + mu.value() * nu.value() * gamma;
        let effect = (&identity.scale_re(scalar) + &bloch_combination(w)).scale_re(0.25);
        effects.push(effect);
    }
    let povm = JointPovm {
        effects: effects.try_into().expect("exactly four effects"),
        settings: (*s1, *s2),
    };
    validate_joint(&povm)?;
    Ok(povm)
}

fn validate_joint(povm: &JointPovm) -> Result<()> {
    let sum = povm
        .effects
        .iter()
        .fold(ComplexMatrix::zeros(2, 2), |acc, e| &acc + e);
    let dev = sum.max_abs_diff(&ComplexMatrix::identity(2));
    if dev > COMPLETENESS_TOL {
        return Err(Error::InvalidPovm {
            reason: format!("joint effects sum deviates from identity by {dev:.3e}"),
        });
    }
    for (i, effect) in povm.effects.iter().enumerate() {
        let min = min_eigenvalue_hermitian(effect)?;
        if min < EFFECT_PSD_TOL {
            return Err(Error::InvalidPovm {
                reason: format!("joint effect {i} has eigenvalue {min:.3e}"),
            });
        }
    }
    let (s1, s2) = povm.settings();
    for (marginal, setting) in [(povm.first_marginal(), s1), (povm.second_marginal(), s2)] {
        let expected = unsharp_povm(setting);
        let dev = marginal
            .plus()
            .max_abs_diff(expected.plus())
            .max(marginal.minus().max_abs_diff(expected.minus()));
        if dev > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm {
                reason: format!("joint marginal deviates from unsharp POVM by {dev:.3e}"),
            });
        }
    }
    Ok(())
}

/// Residual of the unsharp-expectation identity
/// `tr[ρE_η(a)] − tr[ρE_η(−a)] = η tr[ρ a·σ]` on a single qubit; the
/// contract is that it never exceeds 1e-12.
pub fn verify_proportionality(rho: &DensityMatrix, s: &Setting) -> Result<f64> {
    if rho.n_parties() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let povm = unsharp_povm(s);
    let lhs = expectation(rho, povm.plus())? - expectation(rho, povm.minus())?;
    let rhs = s.sharpness() * expectation(rho, &bloch_operator(s.direction()))?;
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{random_direction, random_state, Purity, C64};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn setting(d: Direction, eta: f64) -> Setting {
        Setting::new(d, eta).unwrap()
    }

    #[test]
    fn projective_z_is_computational_basis() {
        let povm = projective_povm(&Direction::z_axis());
        assert_eq!(povm.plus().get(0, 0), C64::new(1.0, 0.0));
        assert_eq!(povm.plus().get(1, 1), C64::new(0.0, 0.0));
        assert_eq!(povm.minus().get(0, 0), C64::new(0.0, 0.0));
        assert_eq!(povm.minus().get(1, 1), C64::new(1.0, 0.0));
    }

    #[test]
    fn projective_x_effects() {
        let povm = projective_povm(&Direction::x_axis());
        let want_plus = ComplexMatrix::from_fn(2, 2, |_, _| C64::new(0.5, 0.0));
        let want_minus =
            ComplexMatrix::from_fn(2, 2, |i, j| C64::new(if i == j { 0.5 } else { -0.5 }, 0.0));
        assert!(povm.plus().max_abs_diff(&want_plus) < 1e-15);
        assert!(povm.minus().max_abs_diff(&want_minus) < 1e-15);
    }

    #[test]
    fn projective_effects_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let povm = projective_povm(&random_direction(&mut rng));
            let prod = povm.plus() * povm.minus();
            assert!(prod.max_abs_diff(&ComplexMatrix::zeros(2, 2)) < 1e-14);
        }
    }

    #[test]
    fn unsharp_limits() {
        let z = Direction::z_axis();
        let sharp = unsharp_povm(&setting(z, 1.0));
        assert!(sharp.plus().max_abs_diff(projective_povm(&z).plus()) == 0.0);

        let half = unsharp_povm(&setting(z, 0.5));
        assert_eq!(half.plus().get(0, 0).re, 0.75);
        assert_eq!(half.plus().get(1, 1).re, 0.25);
        assert_eq!(half.minus().get(0, 0).re, 0.25);
        assert_eq!(half.minus().get(1, 1).re, 0.75);

        let trivial = unsharp_povm(&setting(z, 0.0));
        let half_identity = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(trivial.plus().max_abs_diff(&half_identity) == 0.0);
        assert!(trivial.minus().max_abs_diff(&half_identity) == 0.0);
    }

    #[test]
    fn sharpness_range_enforced() {
        assert!(Setting::new(Direction::z_axis(), 1.2).is_err());
        assert!(Setting::new(Direction::z_axis(), -0.1).is_err());
        assert!(setting(Direction::z_axis(), 0.0).is_degenerate());
        assert!(!setting(Direction::z_axis(), 0.5).is_degenerate());
    }

    #[test]
    fn busch_margin_reference_values() {
        let x = Direction::x_axis();
        let y = Direction::y_axis();
        // boundary admissible: equal sharpness √2/2 on orthogonal directions
        let m = busch_margin(&setting(x, FRAC_1_SQRT_2), &setting(y, FRAC_1_SQRT_2));
        assert!(m.abs() < 1e-12, "margin = {m}");
        // identical sharp observables sit exactly on the boundary
        let m = busch_margin(&setting(x, 1.0), &setting(x, 1.0));
        assert!(m.abs() < 1e-15);
        // sharp orthogonal observables are far inadmissible
        let m = busch_margin(&setting(x, 1.0), &setting(y, 1.0));
        assert!((m - (2.0 - 2.0 * std::f64::consts::SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn busch_margin_symmetry_and_reflection() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let s1 = setting(random_direction(&mut rng), rng.random_range(0.0..1.0));
            let a2 = random_direction(&mut rng);
            let eta2 = rng.random_range(0.0..1.0);
            let s2 = setting(a2, eta2);
            let neg = setting(Direction::new(-a2.x(), -a2.y(), -a2.z()).unwrap(), eta2);
            let m12 = busch_margin(&s1, &s2);
            let m21 = busch_margin(&s2, &s1);
            let mneg = busch_margin(&s1, &neg);
            assert!((m12 - m21).abs() < 1e-12);
            assert!((m12 - mneg).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_sharpness_reference_values() {
        let x = Direction::x_axis();
        let y = Direction::y_axis();
        assert!((equal_sharpness_max(&x, &y) - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((equal_sharpness_max(&x, &x) - 1.0).abs() < 1e-12);
        // 60° apart: |a+a'| = 2cos30° = √3, |a−a'| = 2sin30° = 1
        let sixty =
            Direction::from_angles(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_3);
        let got = equal_sharpness_max(&x, &sixty);
        assert!((got - 2.0 / (3f64.sqrt() + 1.0)).abs() < 1e-12);
        assert!((got - 0.7320508075688772).abs() < 1e-12);
    }

    #[test]
    fn equal_sharpness_product_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = random_direction(&mut rng);
            let b = random_direction(&mut rng);
            let eta = equal_sharpness_max(&a, &b);
            assert!((FRAC_1_SQRT_2 - 1e-12..=1.0 + 1e-12).contains(&eta));
            let plus = norm3(weighted_sum(1.0, &a, 1.0, &b));
            let minus = norm3(weighted_sum(1.0, &a, -1.0, &b));
            assert!((eta * (plus + minus) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_povm_boundary_effect_is_singular() {
        let s1 = setting(Direction::x_axis(), FRAC_1_SQRT_2);
        let s2 = setting(Direction::y_axis(), FRAC_1_SQRT_2);
        let joint = joint_povm(&s1, &s2).unwrap();
        let gpp = joint.effect(Outcome::Plus, Outcome::Plus);
        // ¼[I + (x+y)/√2·σ]: entry (0,1) is ¼(1 − i)/√2, min eigenvalue 0
        let quarter_sqrt_half = 0.25 * FRAC_1_SQRT_2;
        assert!((gpp.get(0, 0).re - 0.25).abs() < 1e-15);
        assert!((gpp.get(0, 1) - C64::new(quarter_sqrt_half, -quarter_sqrt_half)).norm() < 1e-15);
        let min = min_eigenvalue_hermitian(gpp).unwrap();
        assert!(min.abs() < 1e-12, "min = {min}");
    }

    #[test]
    fn joint_povm_marginals_match_unsharp_povms() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let a = random_direction(&mut rng);
            let b = random_direction(&mut rng);
            let eta_max = equal_sharpness_max(&a, &b);
            let eta = rng.random_range(0.0..eta_max);
            let (s1, s2) = (setting(a, eta), setting(b, eta));
            let joint = joint_povm(&s1, &s2).unwrap();
            let first = joint.first_marginal();
            let second = joint.second_marginal();
            let want1 = unsharp_povm(&s1);
            let want2 = unsharp_povm(&s2);
            assert!(first.plus().max_abs_diff(want1.plus()) < 1e-12);
            assert!(first.minus().max_abs_diff(want1.minus()) < 1e-12);
            assert!(second.plus().max_abs_diff(want2.plus()) < 1e-12);
            assert!(second.minus().max_abs_diff(want2.minus()) < 1e-12);
        }
    }

    #[test]
    fn joint_povm_of_identical_sharp_settings_is_perfectly_correlated() {
        let s = setting(Direction::x_axis(), 1.0);
        let joint = joint_povm(&s, &s).unwrap();
        let proj = projective_povm(&Direction::x_axis());
        assert!(
            joint
                .effect(Outcome::Plus, Outcome::Plus)
                .max_abs_diff(proj.plus())
                < 1e-15
        );
        assert!(
            joint
                .effect(Outcome::Minus, Outcome::Minus)
                .max_abs_diff(proj.minus())
                < 1e-15
        );
        let zero = ComplexMatrix::zeros(2, 2);
        assert!(
            joint
                .effect(Outcome::Plus, Outcome::Minus)
                .max_abs_diff(&zero)
                < 1e-15
        );
        assert!(
            joint
                .effect(Outcome::Minus, Outcome::Plus)
                .max_abs_diff(&zero)
                < 1e-15
        );
    }

    #[test]
    fn inadmissible_pair_is_rejected_with_margin() {
        let s1 = setting(Direction::x_axis(), 1.0);
        let s2 = setting(Direction::y_axis(), 1.0);
        match joint_povm(&s1, &s2) {
            Err(Error::InadmissibleJointMeasurement { margin }) => {
                assert!((margin - (2.0 - 2.0 * std::f64::consts::SQRT_2)).abs() < 1e-12)
            }
            other => panic!("expected admissibility error, got {other:?}"),
        }
    }

    #[test]
    fn positivity_matches_busch_margin_on_a_quick_sweep() {
        // the acceptance suite runs the full 10⁴-sample version
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0usize;
        for _ in 0..2000 {
            let s1 = setting(random_direction(&mut rng), rng.random_range(0.0..1.0));
            let s2 = setting(random_direction(&mut rng), rng.random_range(0.0..1.0));
            let margin = busch_margin(&s1, &s2);
            if margin.abs() < 1e-8 {
                continue;
            }
            checked += 1;
            let positive = min_joint_effect_eigenvalue(&s1, &s2) >= -1e-12;
            assert_eq!(positive, margin >= 0.0, "margin = {margin}");
        }
        assert!(checked > 1500);
    }

    fn min_joint_effect_eigenvalue(s1: &Setting, s2: &Setting) -> f64 {
        // bypasses joint_povm's admissibility gate to probe the raw effects
        let gamma = s1.sharpness() * s2.sharpness() * s1.direction().dot(s2.direction());
        let identity = ComplexMatrix::identity(2);
        JointPovm::outcome_pairs()
            .iter()
            .map(|&(mu, nu)| {
                let w = weighted_sum(
                    mu.value() * s1.sharpness(),
                    s1.direction(),
                    nu.value() * s2.sharpness(),
                    s2.direction(),
                );
                let scalar = 1.0 + mu.value() * nu.value() * gamma;
                let m = (&identity.scale_re(scalar) + &bloch_combination(w)).scale_re(0.25);
                min_eigenvalue_hermitian(&m).unwrap()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn proportionality_reference_cases() {
        let mixed = DensityMatrix::new(1, ComplexMatrix::identity(2).scale_re(0.5)).unwrap();
        let s = setting(Direction::z_axis(), 0.7);
        assert!(verify_proportionality(&mixed, &s).unwrap() < 1e-15);

        let zero_state = DensityMatrix::new(
            1,
            ComplexMatrix::from_fn(2, 2, |i, j| {
                if i == 0 && j == 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        )
        .unwrap();
        let s = setting(Direction::z_axis(), 0.5);
        let povm = unsharp_povm(&s);
        let lhs = expectation(&zero_state, povm.plus()).unwrap()
            - expectation(&zero_state, povm.minus()).unwrap();
        assert!((lhs - 0.5).abs() < 1e-15);
        assert!(verify_proportionality(&zero_state, &s).unwrap() < 1e-15);
    }

    #[test]
    fn proportionality_residual_is_tiny_for_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for seed in 0..100 {
            let rho = random_state(1, Purity::Mixed, seed).unwrap();
            let s = setting(random_direction(&mut rng), rng.random_range(0.0..1.0));
            assert!(verify_proportionality(&rho, &s).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn proportionality_rejects_multiqubit_state() {
        let rho = crate::qcore::make_ghz(2, crate::qcore::GhzPhase::Plus).unwrap();
        let s = setting(Direction::z_axis(), 1.0);
        assert!(verify_proportionality(&rho, &s).is_err());
    }
}
