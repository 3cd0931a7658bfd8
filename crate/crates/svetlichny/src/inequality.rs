//! The N-party Svetlichny functional, its sign structure, the
//! joint-measurement variant, and the hybrid/quantum bounds.
//!
//! Setting tuples are packed into a `usize` with party 1 at the most
//! significant of the N bits, matching the qubit ordering of `qcore`. Bit 0
//! selects `setting0`, bit 1 selects `setting1`.

use crate::error::{Error, Result};
use crate::measure::{unsharp_povm, JointPovm, Outcome, Setting};
use crate::qcore::{
    bloch_operator, expectation, kron, permute_parties, ComplexMatrix, DensityMatrix, C64,
    MAX_PARTIES,
};

/// Slack above the hybrid bound before a value counts as a violation,
/// separating genuine violations from round-off at saturation.
pub const VIOLATION_SLACK: f64 = 1e-9;

const CORRELATOR_RANGE_TOL: f64 = 1e-12;

/// One party's two measurement choices, indexed by the setting bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartySettings {
    pub setting0: Setting,
    pub setting1: Setting,
}

impl PartySettings {
    pub fn new(setting0: Setting, setting1: Setting) -> Self {
        Self { setting0, setting1 }
    }

    pub fn sharp(d0: crate::qcore::Direction, d1: crate::qcore::Direction) -> Self {
        Self {
            setting0: Setting::sharp(d0),
            setting1: Setting::sharp(d1),
        }
    }

    pub fn setting(&self, bit: usize) -> &Setting {
        if bit == 0 {
            &self.setting0
        } else {
            &self.setting1
        }
    }

    /// The same pair with setting0 and setting1 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            setting0: self.setting1,
            setting1: self.setting0,
        }
    }
}

/// Per-party pairs of measurement settings for an N-party experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingsGrid {
    parties: Vec<PartySettings>,
}

impl SettingsGrid {
    pub fn new(parties: Vec<PartySettings>) -> Result<Self> {
        let n = parties.len();
        if !(2..=MAX_PARTIES).contains(&n) {
            return Err(Error::PartyCountOutOfRange {
                n,
                min: 2,
                max: MAX_PARTIES,
            });
        }
        Ok(Self { parties })
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn parties(&self) -> &[PartySettings] {
        &self.parties
    }

    pub fn party(&self, party: usize) -> &PartySettings {
        &self.parties[party - 1]
    }

    /// The setting chosen for 1-based `party` by the tuple's bit.
    pub fn chosen(&self, party: usize, tuple: usize) -> &Setting {
        let bit = (tuple >> (self.n_parties() - party)) & 1;
        self.party(party).setting(bit)
    }
}

/// Exact product-observable expectations for all 2^N setting tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTable {
    n: usize,
    values: Vec<f64>,
}

impl CorrelatorTable {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if !(2..=MAX_PARTIES).contains(&n) {
            return Err(Error::PartyCountOutOfRange {
                n,
                min: 2,
                max: MAX_PARTIES,
            });
        }
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: values.len(),
            });
        }
        for (tuple, v) in values.iter().enumerate() {
            if !v.is_finite() || v.abs() > 1.0 + CORRELATOR_RANGE_TOL {
                return Err(Error::InvalidConfig {
                    reason: format!("correlator {v} for tuple {tuple:#b} outside [-1, 1]"),
                });
            }
        }
        Ok(Self { n, values })
    }

    pub fn n_parties(&self) -> usize {
        self.n
    }

    pub fn get(&self, tuple: usize) -> f64 {
        self.values[tuple]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Tuple-indexed entries keyed by bit strings ("010" = party 1 chose
    /// setting 0, party 2 setting 1, party 3 setting 0).
    pub fn bitstring_entries(&self) -> Vec<(String, f64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(tuple, &v)| (format_tuple(tuple, self.n), v))
            .collect()
    }
}

/// Renders a setting tuple as a bit string with party 1 first.
pub fn format_tuple(tuple: usize, n: usize) -> String {
    (0..n)
        .map(|party| {
            if (tuple >> (n - 1 - party)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Svetlichny functional value together with both bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SvetlichnyResult {
    pub value: f64,
    pub hybrid_bound: f64,
    pub quantum_bound: f64,
    pub violates_hybrid: bool,
    pub table: CorrelatorTable,
}

/// Sign coefficient `(−1)^⌊k(k−1)/2⌋` where k is the popcount of the tuple;
/// the pattern +,+,−,− repeats with period 4 in k.
pub fn sign_v(tuple: usize) -> i8 {
    let k = tuple.count_ones() as i64;
    if (k * (k - 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Hybrid and quantum bounds `(2^(n−1), 2^(n−1)·√2)`.
pub fn bounds(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::PartyCountOutOfRange {
            n,
            min: 2,
            max: MAX_PARTIES,
        });
    }
    let hybrid = 2f64.powi(n as i32 - 1);
    Ok((hybrid, hybrid * std::f64::consts::SQRT_2))
}

/// Counts co-party tuples (x₂,…,x_N) by even/odd popcount, by enumeration.
/// Both counts come out to 2^(n−2).
pub fn parity_counts(n: usize) -> Result<(u64, u64)> {
    if !(2..=32).contains(&n) {
        return Err(Error::PartyCountOutOfRange { n, min: 2, max: 32 });
    }
    let mut even = 0u64;
    let mut odd = 0u64;
    for tuple in 0..(1usize << (n - 1)) {
        if tuple.count_ones() % 2 == 0 {
            even += 1;
        } else {
            odd += 1;
        }
    }
    Ok((even, odd))
}

/// The local observable `η d·σ` for one party's chosen setting.
fn setting_observable(s: &Setting) -> ComplexMatrix {
    bloch_operator(s.direction()).scale_re(s.sharpness())
}

/// Product-observable expectation for one setting tuple via the trace
/// formula `tr[ρ ⊗_i η_i(x_i) d_i(x_i)·σ]`.
pub fn correlator(rho: &DensityMatrix, grid: &SettingsGrid, tuple: usize) -> Result<f64> {
    let n = grid.n_parties();
    if rho.n_parties() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.n_parties(),
        });
    }
    let mut obs = setting_observable(grid.chosen(1, tuple));
    for party in 2..=n {
        obs = kron(&obs, &setting_observable(grid.chosen(party, tuple)));
    }
    expectation(rho, &obs)
}

/// All 2^N correlators at once.
///
/// Internally this contracts the state's Pauli correlation tensor
/// `T[j₁…j_N] = tr[ρ σ_{j₁}⊗…⊗σ_{j_N}]` against the per-party weighted
/// direction vectors, which is algebraically identical to the trace formula
/// (each observable is `Σ_j η d_j σ_j`) but costs O(3^N) per evaluation
/// instead of 2^N Kronecker builds.
pub fn correlator_table(rho: &DensityMatrix, grid: &SettingsGrid) -> Result<CorrelatorTable> {
    let n = grid.n_parties();
    if rho.n_parties() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.n_parties(),
        });
    }
    let tensor = pauli_correlation_tensor(rho);
    correlator_table_from_tensor(&tensor, grid)
}

/// Pauli correlation tensor of the state: 3^N real coefficients indexed
/// base-3 (x=0, y=1, z=2) with party 1 as the most significant digit.
pub(crate) fn pauli_correlation_tensor(rho: &DensityMatrix) -> Vec<f64> {
    let n = rho.n_parties();
    // layout: index = (a·2^k + b)·3^done + p, with k parties remaining and
    // `done` parties already contracted into the base-3 tail p
    let mut current: Vec<C64> = rho.matrix().entries().to_vec();
    let mut pow3_done = 1usize;
    for step in 0..n {
        let k = n - step;
        let half = 1usize << (k - 1);
        let mut next = vec![C64::new(0.0, 0.0); half * half * pow3_done * 3];
        for a in 0..half {
            for b in 0..half {
                for p in 0..pow3_done {
                    let at = |abit: usize, bbit: usize| {
                        current
                            [(((a << 1) | abit) * (half << 1) + ((b << 1) | bbit)) * pow3_done + p]
                    };
                    let x = at(0, 1) + at(1, 0);
                    let y = (at(0, 1) - at(1, 0)) * C64::new(0.0, 1.0);
                    let z = at(0, 0) - at(1, 1);
                    let base = (a * half + b) * pow3_done * 3;
                    next[base + p] = x;
                    next[base + pow3_done + p] = y;
                    next[base + 2 * pow3_done + p] = z;
                }
            }
        }
        current = next;
        pow3_done *= 3;
    }
    current
        .into_iter()
        .map(|z| {
            debug_assert!(z.im.abs() < 1e-10);
            z.re
        })
        .collect()
}

/// Contracts a Pauli tensor with the grid's weighted directions, producing
/// the full correlator table.
pub(crate) fn correlator_table_from_tensor(
    tensor: &[f64],
    grid: &SettingsGrid,
) -> Result<CorrelatorTable> {
    let n = grid.n_parties();
    debug_assert_eq!(tensor.len(), 3usize.pow(n as u32));
    // weights[party][setting bit] = η·d, the coefficient of σ_j
    let weights: Vec<[[f64; 3]; 2]> = grid
        .parties()
        .iter()
        .map(|p| {
            [0, 1].map(|bit| {
                let s = p.setting(bit);
                let d = s.direction().components();
                [
                    s.sharpness() * d[0],
                    s.sharpness() * d[1],
                    s.sharpness() * d[2],
                ]
            })
        })
        .collect();

    // layout: index = jrest·2^done + xdone; contract party N first so its
    // setting bit lands least significant
    let mut current: Vec<f64> = tensor.to_vec();
    let mut pow2_done = 1usize;
    for step in 0..n {
        let party = n - step;
        let w = &weights[party - 1];
        let third = current.len() / (3 * pow2_done);
        let mut next = vec![0.0f64; third * pow2_done * 2];
        for jrest in 0..third {
            for xdone in 0..pow2_done {
                let mut dot = [0.0f64; 2];
                for j in 0..3 {
                    let v = current[(jrest * 3 + j) * pow2_done + xdone];
                    dot[0] += w[0][j] * v;
                    dot[1] += w[1][j] * v;
                }
                let base = jrest * pow2_done * 2;
                next[base + xdone] = dot[0];
                next[base + pow2_done + xdone] = dot[1];
            }
        }
        current = next;
        pow2_done *= 2;
    }
    CorrelatorTable::new(n, current)
}

/// Assembles `S_N = |Σ_x v(x)·E(x)|` and the bounds from a correlator table.
pub fn svetlichny_value(table: &CorrelatorTable) -> SvetlichnyResult {
    let n = table.n_parties();
    let sum: f64 = table
        .values()
        .iter()
        .enumerate()
        .map(|(tuple, &e)| f64::from(sign_v(tuple)) * e)
        .sum();
    let value = sum.abs();
    let (hybrid_bound, quantum_bound) = bounds(n).expect("table has at least two parties");
    SvetlichnyResult {
        value,
        hybrid_bound,
        quantum_bound,
        violates_hybrid: value > hybrid_bound + VIOLATION_SLACK,
        table: table.clone(),
    }
}

/// Joint-measurement statistics for one co-party setting tuple: the two
/// first-party expectations and the agreement probabilities, all from the
/// exact outcome distribution of `G ⊗ (co-party effects)`.
pub(crate) struct JointTupleStats {
    /// E(A₁^J A₂…A_N): first-party outcome μ times the co-party product.
    pub e_joint: f64,
    /// E(A₁^J' A₂…A_N): first-party outcome ν times the co-party product.
    pub e_joint_prime: f64,
    /// P(μ = ν = product), P(μ = ν = −product) and the μ = −ν analogs.
    pub p_equal_match: f64,
    pub p_equal_mismatch: f64,
    pub p_unequal_match: f64,
    pub p_unequal_mismatch: f64,
}

impl JointTupleStats {
    pub fn p_equal(&self) -> f64 {
        self.p_equal_match + self.p_equal_mismatch
    }

    pub fn p_unequal(&self) -> f64 {
        self.p_unequal_match + self.p_unequal_mismatch
    }
}

/// Exhaustive outcome statistics for party 1 measuring `joint` while the
/// co-parties measure the settings picked by `co_tuple` from `grid_rest`.
pub(crate) fn joint_tuple_stats(
    rho: &DensityMatrix,
    joint: &JointPovm,
    grid_rest: &[PartySettings],
    co_tuple: usize,
) -> Result<JointTupleStats> {
    let n = grid_rest.len() + 1;
    if rho.n_parties() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.n_parties(),
        });
    }
    let co_bits = n - 1;
    let co_povms: Vec<_> = grid_rest
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let bit = (co_tuple >> (co_bits - 1 - i)) & 1;
            unsharp_povm(p.setting(bit))
        })
        .collect();

    let mut stats = JointTupleStats {
        e_joint: 0.0,
        e_joint_prime: 0.0,
        p_equal_match: 0.0,
        p_equal_mismatch: 0.0,
        p_unequal_match: 0.0,
        p_unequal_mismatch: 0.0,
    };
    for co_outcomes in 0..(1usize << co_bits) {
        let mut product = 1.0f64;
        let mut co_effect: Option<ComplexMatrix> = None;
        for (i, povm) in co_povms.iter().enumerate() {
            let outcome = if (co_outcomes >> (co_bits - 1 - i)) & 1 == 0 {
                Outcome::Plus
            } else {
                Outcome::Minus
            };
            product *= outcome.value();
            let effect = povm.effect(outcome);
            co_effect = Some(match co_effect {
                None => effect.clone(),
                Some(acc) => kron(&acc, effect),
            });
        }
        let co_effect = co_effect.expect("at least one co-party");
        for (mu, nu) in JointPovm::outcome_pairs() {
            let full = kron(joint.effect(mu, nu), &co_effect);
            let p = expectation(rho, &full)?;
            stats.e_joint += mu.value() * product * p;
            stats.e_joint_prime += nu.value() * product * p;
            match (mu == nu, mu.value() == product) {
                (true, true) => stats.p_equal_match += p,
                (true, false) => stats.p_equal_mismatch += p,
                (false, true) => stats.p_unequal_match += p,
                (false, false) => stats.p_unequal_mismatch += p,
            }
        }
    }
    Ok(stats)
}

/// `S_N^J`: the Svetlichny functional with party 1 performing the joint
/// measurement and parties 2..N measuring `grid_rest`. The result never
/// exceeds `2^(N−1)` beyond round-off.
pub fn svetlichny_joint_value(
    rho: &DensityMatrix,
    joint: &JointPovm,
    grid_rest: &[PartySettings],
) -> Result<f64> {
    let n = grid_rest.len() + 1;
    if n < 2 {
        return Err(Error::PartyCountOutOfRange {
            n,
            min: 2,
            max: MAX_PARTIES,
        });
    }
    let mut sum = 0.0f64;
    for co_tuple in 0..(1usize << (n - 1)) {
        let stats = joint_tuple_stats(rho, joint, grid_rest, co_tuple)?;
        let k_prime_sign = if co_tuple.count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        sum += f64::from(sign_v(co_tuple)) * (stats.e_joint + k_prime_sign * stats.e_joint_prime);
    }
    let value = sum.abs();
    debug_assert!(
        value <= 2f64.powi(n as i32 - 1) + VIOLATION_SLACK,
        "joint Svetlichny value {value} exceeds 2^(N-1)"
    );
    Ok(value)
}

/// Same as `svetlichny_joint_value` with the joint measurement on an
/// arbitrary 1-based party; the state is relabeled so that party becomes
/// party 1 while the co-parties keep their relative order.
pub fn svetlichny_joint_value_at(
    rho: &DensityMatrix,
    joint_party: usize,
    joint: &JointPovm,
    grid_rest: &[PartySettings],
) -> Result<f64> {
    let n = grid_rest.len() + 1;
    if joint_party == 0 || joint_party > n {
        return Err(Error::PartyIndexOutOfRange {
            index: joint_party,
            n_parties: n,
        });
    }
    let mut perm = vec![joint_party];
    perm.extend((1..=n).filter(|&p| p != joint_party));
    let relabeled = permute_parties(rho, &perm)?;
    svetlichny_joint_value(&relabeled, joint, grid_rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::joint_povm;
    use crate::qcore::{make_ghz, random_direction, random_state, Direction, GhzPhase, Purity};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_grid(n: usize, rng: &mut ChaCha8Rng, sharp: bool) -> SettingsGrid {
        let parties = (0..n)
            .map(|_| {
                let eta = |rng: &mut ChaCha8Rng| {
                    if sharp {
                        1.0
                    } else {
                        rng.random_range(0.0..1.0)
                    }
                };
                PartySettings::new(
                    Setting::new(random_direction(rng), eta(rng)).unwrap(),
                    Setting::new(random_direction(rng), eta(rng)).unwrap(),
                )
            })
            .collect();
        SettingsGrid::new(parties).unwrap()
    }

    fn equatorial_grid(phis: &[(f64, f64)]) -> SettingsGrid {
        let parties = phis
            .iter()
            .map(|&(p0, p1)| {
                PartySettings::sharp(
                    Direction::from_angles(std::f64::consts::FRAC_PI_2, p0),
                    Direction::from_angles(std::f64::consts::FRAC_PI_2, p1),
                )
            })
            .collect();
        SettingsGrid::new(parties).unwrap()
    }

    #[test]
    fn sign_depends_only_on_popcount_with_period_four() {
        for k in 0..12u32 {
            let tuple = (1usize << k) - 1;
            let expected = match k % 4 {
                0 | 1 => 1,
                _ => -1,
            };
            assert_eq!(sign_v(tuple), expected, "k = {k}");
            // scattered bits with the same popcount give the same sign
            let scattered = ((1usize << k) - 1) << 3;
            assert_eq!(sign_v(scattered), expected);
        }
    }

    #[test]
    fn sign_pattern_matches_three_party_functional() {
        // tuples ordered as ABC, ABC', AB'C, A'BC, AB'C', A'BC', A'B'C, A'B'C'
        let tuples = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];
        let expected = [1, 1, 1, 1, -1, -1, -1, -1];
        for (tuple, want) in tuples.iter().zip(expected) {
            assert_eq!(sign_v(*tuple), want, "tuple {tuple:#05b}");
        }
    }

    #[test]
    fn bounds_reference_values() {
        assert!(bounds(1).is_err());
        let (h, q) = bounds(3).unwrap();
        assert_eq!(h, 4.0);
        assert!((q - 4.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(bounds(2).unwrap().0, 2.0);
        assert_eq!(bounds(5).unwrap().0, 16.0);
        assert!((bounds(5).unwrap().1 - 16.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn parity_counts_split_evenly() {
        assert_eq!(parity_counts(3).unwrap(), (2, 2));
        assert_eq!(parity_counts(4).unwrap(), (4, 4));
        for n in 2..=10 {
            let (even, odd) = parity_counts(n).unwrap();
            assert_eq!(even, odd);
            assert_eq!(even + odd, 1 << (n - 1));
        }
        assert!(parity_counts(1).is_err());
    }

    #[test]
    fn ghz_equatorial_correlator_is_cosine_of_phase_sum() {
        // brute-force trace oracle at N = 2, 3, 4
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 2..=4 {
            let rho = make_ghz(n, GhzPhase::Plus).unwrap();
            let phis: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    (
                        rng.random_range(0.0..std::f64::consts::TAU),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect();
            let grid = equatorial_grid(&phis);
            for tuple in 0..(1usize << n) {
                let phase_sum: f64 = (0..n)
                    .map(|i| {
                        let bit = (tuple >> (n - 1 - i)) & 1;
                        if bit == 0 {
                            phis[i].0
                        } else {
                            phis[i].1
                        }
                    })
                    .sum();
                let got = correlator(&rho, &grid, tuple).unwrap();
                assert!(
                    (got - phase_sum.cos()).abs() < 1e-12,
                    "n={n} tuple={tuple:#b}: {got} vs {}",
                    phase_sum.cos()
                );
            }
        }
    }

    #[test]
    fn maximally_mixed_state_has_zero_correlators() {
        let dim = 8;
        let mixed = crate::qcore::DensityMatrix::new(
            3,
            ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let grid = random_grid(3, &mut rng, false);
        for tuple in 0..8 {
            assert!(correlator(&mixed, &grid, tuple).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn zero_sharpness_kills_the_correlator() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rho = random_state(3, Purity::Mixed, 77).unwrap();
        let mut parties = random_grid(3, &mut rng, false).parties().to_vec();
        parties[1] = PartySettings::new(
            Setting::new(*parties[1].setting0.direction(), 0.0).unwrap(),
            parties[1].setting1,
        );
        let grid = SettingsGrid::new(parties).unwrap();
        // tuples where party 2 picked setting 0 (bit 1 of the 3-bit tuple = 0)
        for tuple in [0b000, 0b001, 0b100, 0b101] {
            assert!(correlator(&rho, &grid, tuple).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn table_matches_per_tuple_trace_formula() {
        for (seed, n) in [(1u64, 2usize), (2, 3), (3, 4)] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_state(n, Purity::Mixed, seed).unwrap();
            let grid = random_grid(n, &mut rng, false);
            let table = correlator_table(&rho, &grid).unwrap();
            for tuple in 0..(1usize << n) {
                let direct = correlator(&rho, &grid, tuple).unwrap();
                assert!(
                    (table.get(tuple) - direct).abs() < 1e-12,
                    "n={n} tuple={tuple:#b}"
                );
            }
        }
    }

    #[test]
    fn table_is_linear_in_single_party_sharpness() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rho = random_state(3, Purity::Mixed, 5).unwrap();
        let base = random_grid(3, &mut rng, true);
        let t = 0.37;
        let scaled_party = PartySettings::new(
            Setting::new(*base.party(1).setting0.direction(), t).unwrap(),
            Setting::new(*base.party(1).setting1.direction(), t).unwrap(),
        );
        let mut parties = base.parties().to_vec();
        parties[0] = scaled_party;
        let scaled = SettingsGrid::new(parties).unwrap();
        let table = correlator_table(&rho, &base).unwrap();
        let table_scaled = correlator_table(&rho, &scaled).unwrap();
        for tuple in 0..8 {
            assert!((table_scaled.get(tuple) - t * table.get(tuple)).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_formula_equals_outcome_enumeration() {
        // Σ over all outcome strings of (product × probability), with the
        // probabilities built from explicit effect Kronecker products
        for (seed, n) in [(11u64, 2usize), (12, 3)] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_state(n, Purity::Mixed, seed + 100).unwrap();
            let grid = random_grid(n, &mut rng, false);
            for tuple in 0..(1usize << n) {
                let povms: Vec<_> = (1..=n)
                    .map(|p| unsharp_povm(grid.chosen(p, tuple)))
                    .collect();
                let mut enumerated = 0.0;
                for outcomes in 0..(1usize << n) {
                    let mut product = 1.0f64;
                    let mut effect: Option<ComplexMatrix> = None;
                    for (i, povm) in povms.iter().enumerate() {
                        let o = if (outcomes >> (n - 1 - i)) & 1 == 0 {
                            Outcome::Plus
                        } else {
                            Outcome::Minus
                        };
                        product *= o.value();
                        let e = povm.effect(o);
                        effect = Some(match effect {
                            None => e.clone(),
                            Some(acc) => kron(&acc, e),
                        });
                    }
                    let p = expectation(&rho, &effect.unwrap()).unwrap();
                    enumerated += product * p;
                }
                let direct = correlator(&rho, &grid, tuple).unwrap();
                assert!(
                    (enumerated - direct).abs() < 1e-12,
                    "n={n} tuple={tuple:#b}: {enumerated} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn svetlichny_value_of_zero_table_is_zero() {
        let table = CorrelatorTable::new(3, vec![0.0; 8]).unwrap();
        let result = svetlichny_value(&table);
        assert_eq!(result.value, 0.0);
        assert!(!result.violates_hybrid);
        assert_eq!(result.hybrid_bound, 4.0);
    }

    #[test]
    fn svetlichny_value_never_exceeds_two_to_the_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let values: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
            let table = CorrelatorTable::new(3, values).unwrap();
            assert!(svetlichny_value(&table).value <= 8.0);
        }
    }

    #[test]
    fn ghz_optimal_equatorial_settings_reach_the_quantum_bound() {
        // equatorial settings with φ(1) = φ(0) + π/2 per party and the
        // setting-0 azimuths summing to −π/4 saturate 2^(N−1)·√2
        for n in 2..=5 {
            let rho = make_ghz(n, GhzPhase::Plus).unwrap();
            let mut phis = vec![(0.0, std::f64::consts::FRAC_PI_2); n];
            phis[0] = (
                -std::f64::consts::FRAC_PI_4,
                -std::f64::consts::FRAC_PI_4 + std::f64::consts::FRAC_PI_2,
            );
            let grid = equatorial_grid(&phis);
            let table = correlator_table(&rho, &grid).unwrap();
            let result = svetlichny_value(&table);
            let (_, quantum) = bounds(n).unwrap();
            assert!(
                (result.value - quantum).abs() < 1e-12,
                "n={n}: {} vs {quantum}",
                result.value
            );
            assert!(result.violates_hybrid);
        }
    }

    #[test]
    fn relabeling_settings_on_every_party_preserves_the_value_at_n3() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for seed in 0..20 {
            let rho = random_state(3, Purity::Mixed, seed).unwrap();
            let grid = random_grid(3, &mut rng, true);
            let swapped =
                SettingsGrid::new(grid.parties().iter().map(|p| p.swapped()).collect()).unwrap();
            let original = svetlichny_value(&correlator_table(&rho, &grid).unwrap());
            let relabeled = svetlichny_value(&correlator_table(&rho, &swapped).unwrap());
            // the swapped table is the tuple complement of the original
            for tuple in 0..8usize {
                assert!(
                    (relabeled.table.get(tuple) - original.table.get(!tuple & 0b111)).abs() < 1e-12
                );
            }
            assert!(
                (original.value - relabeled.value).abs() < 1e-12,
                "seed {seed}: {} vs {}",
                original.value,
                relabeled.value
            );
        }
    }

    #[test]
    fn joint_value_scales_as_eta_times_sharp_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for seed in 0..25 {
            let n = 2 + (seed as usize % 3);
            let rho = random_state(n, Purity::Mixed, seed).unwrap();
            let a = random_direction(&mut rng);
            let a2 = random_direction(&mut rng);
            let eta = rng.random_range(0.05..1.0) * equal_sharpness_cap(&a, &a2);
            let joint = joint_povm(
                &Setting::new(a, eta).unwrap(),
                &Setting::new(a2, eta).unwrap(),
            )
            .unwrap();
            let grid_rest: Vec<PartySettings> = (1..n)
                .map(|_| {
                    PartySettings::sharp(random_direction(&mut rng), random_direction(&mut rng))
                })
                .collect();
            let joint_value = svetlichny_joint_value(&rho, &joint, &grid_rest).unwrap();

            let mut parties = vec![PartySettings::sharp(a, a2)];
            parties.extend(grid_rest.iter().cloned());
            let sharp_grid = SettingsGrid::new(parties).unwrap();
            let sharp = svetlichny_value(&correlator_table(&rho, &sharp_grid).unwrap());
            assert!(
                (joint_value - eta * sharp.value).abs() < 1e-10,
                "seed {seed}: {joint_value} vs {}",
                eta * sharp.value
            );
        }
    }

    fn equal_sharpness_cap(a: &Direction, a2: &Direction) -> f64 {
        crate::measure::equal_sharpness_max(a, a2)
    }

    #[test]
    fn joint_value_on_maximally_mixed_state_is_zero() {
        let mixed =
            crate::qcore::DensityMatrix::new(3, ComplexMatrix::identity(8).scale_re(1.0 / 8.0))
                .unwrap();
        let joint = joint_povm(
            &Setting::new(Direction::x_axis(), 0.5).unwrap(),
            &Setting::new(Direction::y_axis(), 0.5).unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let grid_rest = vec![
            PartySettings::sharp(random_direction(&mut rng), random_direction(&mut rng)),
            PartySettings::sharp(random_direction(&mut rng), random_direction(&mut rng)),
        ];
        let value = svetlichny_joint_value(&mixed, &joint, &grid_rest).unwrap();
        assert!(value.abs() < 1e-13);
    }

    #[test]
    fn joint_value_with_relabeled_party_matches_party_one() {
        // product state makes the permutation observable: ρ₁ ⊗ ρ₂ with the
        // joint party moved to slot 2
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let rho_a = random_state(1, Purity::Mixed, 1).unwrap();
        let rho_b = random_state(1, Purity::Mixed, 2).unwrap();
        let ab = crate::qcore::DensityMatrix::new(2, kron(rho_a.matrix(), rho_b.matrix())).unwrap();
        let ba = crate::qcore::DensityMatrix::new(2, kron(rho_b.matrix(), rho_a.matrix())).unwrap();
        let joint = joint_povm(
            &Setting::new(random_direction(&mut rng), 0.6).unwrap(),
            &Setting::new(random_direction(&mut rng), 0.6).unwrap(),
        )
        .unwrap();
        let rest = vec![PartySettings::sharp(
            random_direction(&mut rng),
            random_direction(&mut rng),
        )];
        let direct = svetlichny_joint_value(&ab, &joint, &rest).unwrap();
        let relabeled = svetlichny_joint_value_at(&ba, 2, &joint, &rest).unwrap();
        assert!((direct - relabeled).abs() < 1e-12);
    }

    #[test]
    fn settings_grid_rejects_single_party() {
        let p = PartySettings::sharp(Direction::x_axis(), Direction::y_axis());
        assert!(SettingsGrid::new(vec![p]).is_err());
    }

    #[test]
    fn correlator_table_validates_entries() {
        assert!(CorrelatorTable::new(2, vec![0.0; 3]).is_err());
        assert!(CorrelatorTable::new(2, vec![0.0, 0.5, -1.0, 1.5]).is_err());
        assert!(CorrelatorTable::new(2, vec![0.0, 0.5, -1.0, 1.0]).is_ok());
    }

    #[test]
    fn random_states_never_exceed_the_quantum_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let (_, quantum) = bounds(3).unwrap();
        for seed in 0..50 {
            let purity = if seed % 2 == 0 {
                Purity::Pure
            } else {
                Purity::Mixed
            };
            let rho = random_state(3, purity, 900 + seed).unwrap();
            let grid = random_grid(3, &mut rng, true);
            let value = svetlichny_value(&correlator_table(&rho, &grid).unwrap()).value;
            assert!(value <= quantum + 1e-6, "seed {seed}: {value} > {quantum}");
        }
    }
}
