//! Exact outcome distributions, Monte Carlo sampling, and numerical audits
//! of the no-signaling and derivation-chain identities.
//!
//! Audits always run on exact probabilities; Monte Carlo checks are opt-in
//! via a shots parameter. Sampling uses inverse-CDF over a fixed
//! lexicographic label order (party 1 slowest; single outcomes ordered
//! +1, −1; joint pairs ordered (+,+), (+,−), (−,+), (−,−)) driven by a
//! ChaCha8 stream, so identical seeds reproduce identical shot sequences on
//! every platform.

use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::inequality::{
    format_tuple, joint_tuple_stats, parity_counts, sign_v, CorrelatorTable, PartySettings,
};
use crate::measure::{BinaryPovm, JointPovm, Outcome};
use crate::qcore::{expectation, kron, ComplexMatrix, DensityMatrix};

const PMF_SUM_TOL: f64 = 1e-12;
const PROB_CLAMP: f64 = -1e-14;
const EXACT_TOL: f64 = 1e-12;
const SIGMA_FACTOR: f64 = 5.0;

/// One party's recorded outcome: a single ±1 value, or the (A_J, A_J') pair
/// produced by a joint measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartyOutcome {
    Single(Outcome),
    Joint(Outcome, Outcome),
}

impl PartyOutcome {
    /// The ±1 value of a single outcome; joint pairs have no single value.
    pub fn single_value(&self) -> Option<f64> {
        match self {
            PartyOutcome::Single(o) => Some(o.value()),
            PartyOutcome::Joint(..) => None,
        }
    }
}

/// A party's measurement for distribution building.
#[derive(Debug, Clone)]
pub enum PartyPovm {
    Binary(BinaryPovm),
    Joint(JointPovm),
}

impl PartyPovm {
    fn outcomes_and_effects(&self) -> Vec<(PartyOutcome, &ComplexMatrix)> {
        match self {
            PartyPovm::Binary(povm) => Outcome::BOTH
                .iter()
                .map(|&o| (PartyOutcome::Single(o), povm.effect(o)))
                .collect(),
            PartyPovm::Joint(povm) => JointPovm::outcome_pairs()
                .iter()
                .map(|&(mu, nu)| (PartyOutcome::Joint(mu, nu), povm.effect(mu, nu)))
                .collect(),
        }
    }
}

/// Exact probability mass function over joint outcome tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomePmf {
    labels: Vec<Vec<PartyOutcome>>,
    probs: Vec<f64>,
}

impl OutcomePmf {
    /// Validates normalization and clamps probabilities in [−1e-14, 0) to 0;
    /// anything more negative is rejected.
    pub fn new(labels: Vec<Vec<PartyOutcome>>, probs: Vec<f64>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: probs.len(),
            });
        }
        let mut clamped = probs;
        for p in &mut clamped {
            if *p < 0.0 {
                if *p < PROB_CLAMP {
                    return Err(Error::InvalidPovm {
                        reason: format!("outcome probability {p:.3e} below clamp threshold"),
                    });
                }
                *p = 0.0;
            }
        }
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > PMF_SUM_TOL {
            return Err(Error::InvalidPovm {
                reason: format!("outcome probabilities sum to {total}, expected 1"),
            });
        }
        Ok(Self {
            labels,
            probs: clamped,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Vec<PartyOutcome>] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// One sampled shot. `settings` carries each party's chosen setting bit,
/// `None` for a joint-measured party; `seed_info` names the generator
/// stream that produced the shot.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    pub settings: Vec<Option<u8>>,
    pub outcomes: Vec<PartyOutcome>,
    pub seed_info: String,
}

impl ShotRecord {
    pub fn with_settings(mut self, settings: Vec<Option<u8>>) -> Self {
        self.settings = settings;
        self
    }
}

/// One named audit comparison. For equality checks the slack is
/// `tol − |lhs − rhs|`; for one-sided checks `lhs ≤ rhs` it is
/// `rhs − lhs + tol`. Negative slack fails.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl AuditCheck {
    fn equality(name: String, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = tol - (lhs - rhs).abs();
        Self {
            name,
            lhs,
            rhs,
            slack,
            passed: slack >= 0.0,
        }
    }

    fn upper_bound(name: String, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs + tol;
        Self {
            name,
            lhs,
            rhs,
            slack,
            passed: slack >= 0.0,
        }
    }
}

/// A batch of audit checks; `overall` is the conjunction of all rows.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
    pub overall: bool,
}

impl AuditReport {
    fn from_checks(checks: Vec<AuditCheck>) -> Self {
        let overall = checks.iter().all(|c| c.passed);
        Self { checks, overall }
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Exact joint outcome distribution `P(o) = tr[ρ ⊗_i F_i(o_i)]` for one
/// POVM per party, enumerated in the fixed lexicographic label order.
pub fn outcome_distribution(rho: &DensityMatrix, povms: &[PartyPovm]) -> Result<OutcomePmf> {
    if povms.len() != rho.n_parties() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_parties(),
            found: povms.len(),
        });
    }
    let per_party: Vec<Vec<(PartyOutcome, &ComplexMatrix)>> =
        povms.iter().map(|p| p.outcomes_and_effects()).collect();
    let mut labels = Vec::new();
    let mut probs = Vec::new();
    let mut stack: Vec<usize> = vec![0; povms.len()];
    loop {
        let mut label = Vec::with_capacity(povms.len());
        let mut effect: Option<ComplexMatrix> = None;
        for (party, &choice) in stack.iter().enumerate() {
            let (outcome, e) = per_party[party][choice];
            label.push(outcome);
            effect = Some(match effect {
                None => e.clone(),
                Some(acc) => kron(&acc, e),
            });
        }
        probs.push(expectation(rho, &effect.expect("at least one party"))?);
        labels.push(label);

        // odometer increment, last party fastest
        let mut pos = povms.len();
        loop {
            if pos == 0 {
                return OutcomePmf::new(labels, probs);
            }
            pos -= 1;
            stack[pos] += 1;
            if stack[pos] < per_party[pos].len() {
                break;
            }
            stack[pos] = 0;
        }
    }
}

/// Splits a seed into independent per-task streams (splitmix64 step); used
/// for per-tuple and per-restart sub-seeds so parallel and serial runs
/// produce identical results.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// I.i.d. draws from the pmf by inverse-CDF walk over the fixed label order,
/// deterministic per seed. Settings are unset; callers stamp them.
pub fn sample_outcomes(pmf: &OutcomePmf, shots: u64, seed: u64) -> Vec<ShotRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_parties = pmf.labels.first().map_or(0, Vec::len);
    let seed_info = format!("chacha8:{seed}");
    (0..shots)
        .map(|_| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut chosen = pmf.len() - 1;
            for (i, &p) in pmf.probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    chosen = i;
                    break;
                }
            }
            ShotRecord {
                settings: vec![None; n_parties],
                outcomes: pmf.labels[chosen].clone(),
                seed_info: seed_info.clone(),
            }
        })
        .collect()
}

/// Per-tuple sample means of the outcome product plus standard errors
/// (sample standard deviation over √shots). Requires every record to carry
/// a full settings tuple and single outcomes, and every tuple to be covered.
pub fn empirical_correlators(
    samples: &[ShotRecord],
    n_parties: usize,
) -> Result<(CorrelatorTable, Vec<f64>)> {
    let tuples = 1usize << n_parties;
    let mut counts = vec![0u64; tuples];
    let mut sums = vec![0.0f64; tuples];
    for record in samples {
        if record.settings.len() != n_parties {
            return Err(Error::DimensionMismatch {
                expected: n_parties,
                found: record.settings.len(),
            });
        }
        let mut tuple = 0usize;
        for bit in &record.settings {
            let bit = bit.ok_or_else(|| {
                Error::invalid_config(
                    "empirical correlators need a full settings tuple on every shot",
                )
            })?;
            tuple = (tuple << 1) | usize::from(bit & 1);
        }
        let mut product = 1.0f64;
        for outcome in &record.outcomes {
            product *= outcome.single_value().ok_or_else(|| {
                Error::invalid_config("joint outcome pairs have no product correlator")
            })?;
        }
        counts[tuple] += 1;
        sums[tuple] += product;
    }
    let mut means = Vec::with_capacity(tuples);
    let mut errors = Vec::with_capacity(tuples);
    for tuple in 0..tuples {
        if counts[tuple] == 0 {
            return Err(Error::MissingSettingCoverage { tuple });
        }
        let m = counts[tuple] as f64;
        let mean = sums[tuple] / m;
        // products are ±1, so Σ(x−x̄)² = m(1 − x̄²)
        let variance = if counts[tuple] > 1 {
            (m * (1.0 - mean * mean)).max(0.0) / (m - 1.0)
        } else {
            0.0
        };
        means.push(mean.clamp(-1.0, 1.0));
        errors.push((variance / m).sqrt());
    }
    Ok((CorrelatorTable::new(n_parties, means)?, errors))
}

/// Plugs empirical correlators and their standard errors into the
/// Svetlichny sum: returns the estimate and its propagated standard error.
pub fn estimate_svetlichny(table: &CorrelatorTable, errors: &[f64]) -> (f64, f64) {
    let sum: f64 = table
        .values()
        .iter()
        .enumerate()
        .map(|(tuple, &e)| f64::from(sign_v(tuple)) * e)
        .sum();
    let variance: f64 = errors.iter().map(|se| se * se).sum();
    (sum.abs(), variance.sqrt())
}

/// Exact agreement probability of the joint party for one co-tuple.
pub(crate) fn joint_agreement_stats(
    rho: &DensityMatrix,
    joint: &JointPovm,
    grid_rest: &[PartySettings],
    co_tuple: usize,
) -> Result<f64> {
    Ok(joint_tuple_stats(rho, joint, grid_rest, co_tuple)?.p_equal())
}

/// Probability that the joint-measured party's two outcomes agree,
/// `(p_equal, p_unequal)`. Both are independent of the co-party POVMs.
pub fn agreement_probability(
    rho: &DensityMatrix,
    joint: &JointPovm,
    co_povms: &[BinaryPovm],
) -> Result<(f64, f64)> {
    let mut povms = vec![PartyPovm::Joint(joint.clone())];
    povms.extend(co_povms.iter().map(|p| PartyPovm::Binary(p.clone())));
    let pmf = outcome_distribution(rho, &povms)?;
    let mut p_equal = 0.0;
    for (label, &p) in pmf.labels().iter().zip(pmf.probs()) {
        if let PartyOutcome::Joint(mu, nu) = label[0] {
            if mu == nu {
                p_equal += p;
            }
        }
    }
    Ok((p_equal, 1.0 - p_equal))
}

/// Checks that the agreement probability of the joint party is identical
/// across all 2^(N−1) co-party setting tuples (exactly, to 1e-12), matches
/// the closed form ½(1 + η₁η₂ a·a'), and — when `shots` is given — that
/// empirical agreement rates stay within 5σ of the exact values.
pub fn audit_no_signaling(
    rho: &DensityMatrix,
    joint: &JointPovm,
    grid_rest: &[PartySettings],
    shots: Option<u64>,
    seed: u64,
) -> Result<AuditReport> {
    let co_bits = grid_rest.len();
    let co_tuples = 1usize << co_bits;
    let mut checks = Vec::new();

    let mut exact = Vec::with_capacity(co_tuples);
    for tuple in 0..co_tuples {
        let stats = joint_tuple_stats(rho, joint, grid_rest, tuple)?;
        exact.push(stats.p_equal());
    }
    for tuple in 1..co_tuples {
        checks.push(AuditCheck::equality(
            format!("agreement_invariant[{}]", format_tuple(tuple, co_bits)),
            exact[tuple],
            exact[0],
            EXACT_TOL,
        ));
    }
    let (s1, s2) = joint.settings();
    let gamma = s1.sharpness() * s2.sharpness() * s1.direction().dot(s2.direction());
    checks.push(AuditCheck::equality(
        "agreement_closed_form".into(),
        exact[0],
        0.5 * (1.0 + gamma),
        EXACT_TOL,
    ));

    if let Some(shots) = shots.filter(|&s| s > 0) {
        for (tuple, &p_exact) in exact.iter().enumerate() {
            let mut povms = vec![PartyPovm::Joint(joint.clone())];
            for (i, p) in grid_rest.iter().enumerate() {
                let bit = (tuple >> (co_bits - 1 - i)) & 1;
                povms.push(PartyPovm::Binary(crate::measure::unsharp_povm(
                    p.setting(bit),
                )));
            }
            let pmf = outcome_distribution(rho, &povms)?;
            let records = sample_outcomes(&pmf, shots, derive_seed(seed, tuple as u64));
            let agreeing = records
                .iter()
                .filter(|r| matches!(r.outcomes[0], PartyOutcome::Joint(mu, nu) if mu == nu))
                .count();
            let p_hat = agreeing as f64 / shots as f64;
            let sigma = (p_exact * (1.0 - p_exact) / shots as f64).sqrt();
            checks.push(AuditCheck::equality(
                format!("agreement_empirical[{}]", format_tuple(tuple, co_bits)),
                p_hat,
                p_exact,
                SIGMA_FACTOR * sigma + 1e-15,
            ));
        }
    }
    Ok(AuditReport::from_checks(checks))
}

/// Step-by-step audit of the three-party derivation: the expectation
/// decompositions, the dropped-term bounds, the assembled four-probability
/// bound, the no-signaling collapse, and the final `S₃^J ≤ 4`.
pub fn audit_chain_three(
    rho: &DensityMatrix,
    joint: &JointPovm,
    grid_rest: &[PartySettings],
) -> Result<AuditReport> {
    if grid_rest.len() != 2 {
        return Err(Error::PartyCountOutOfRange {
            n: grid_rest.len() + 1,
            min: 3,
            max: 3,
        });
    }
    audit_chain_n(rho, joint, grid_rest)
}

/// General N-party derivation-chain audit (N ≥ 3): per co-tuple
/// decomposition identities and agreement bounds, the even/odd parity
/// split, the no-signaling collapse, and the final `S_N^J ≤ 2^(N−1)`.
pub fn audit_chain_n(
    rho: &DensityMatrix,
    joint: &JointPovm,
    grid_rest: &[PartySettings],
) -> Result<AuditReport> {
    let n = grid_rest.len() + 1;
    if n < 3 {
        return Err(Error::PartyCountOutOfRange {
            n,
            min: 3,
            max: crate::qcore::MAX_PARTIES,
        });
    }
    let co_bits = n - 1;
    let co_tuples = 1usize << co_bits;
    let mut checks = Vec::new();
    let mut signed_sum = 0.0f64;
    let mut bound_sum = 0.0f64;
    let mut even_count = 0u64;
    let mut odd_count = 0u64;
    let mut p_equal_first = None;

    for tuple in 0..co_tuples {
        let bits = format_tuple(tuple, co_bits);
        let stats = joint_tuple_stats(rho, joint, grid_rest, tuple)?;
        let k_even = tuple.count_ones() % 2 == 0;
        if k_even {
            even_count += 1;
        } else {
            odd_count += 1;
        }

        // E combo and its exact decomposition into agreement probabilities
        let (combo, match_p, mismatch_p, p_rel) = if k_even {
            (
                stats.e_joint + stats.e_joint_prime,
                stats.p_equal_match,
                stats.p_equal_mismatch,
                stats.p_equal(),
            )
        } else {
            (
                stats.e_joint - stats.e_joint_prime,
                stats.p_unequal_match,
                stats.p_unequal_mismatch,
                stats.p_unequal(),
            )
        };
        checks.push(AuditCheck::equality(
            format!("decomposition[{bits}]"),
            combo,
            2.0 * (match_p - mismatch_p),
            EXACT_TOL,
        ));
        // dropping the negative probability term bounds the combo by 2P
        checks.push(AuditCheck::upper_bound(
            format!("agreement_bound_upper[{bits}]"),
            combo,
            2.0 * p_rel,
            EXACT_TOL,
        ));
        checks.push(AuditCheck::upper_bound(
            format!("agreement_bound_lower[{bits}]"),
            -combo,
            2.0 * p_rel,
            EXACT_TOL,
        ));

        let p_eq = stats.p_equal();
        match p_equal_first {
            None => p_equal_first = Some(p_eq),
            Some(first) => checks.push(AuditCheck::equality(
                format!("agreement_invariant[{bits}]"),
                p_eq,
                first,
                EXACT_TOL,
            )),
        }

        signed_sum += f64::from(sign_v(tuple)) * combo;
        bound_sum += 2.0 * p_rel;
    }

    let (expected_even, expected_odd) = parity_counts(n)?;
    checks.push(AuditCheck::equality(
        "parity_split_even".into(),
        even_count as f64,
        expected_even as f64,
        0.0,
    ));
    checks.push(AuditCheck::equality(
        "parity_split_odd".into(),
        odd_count as f64,
        expected_odd as f64,
        0.0,
    ));

    let joint_value = signed_sum.abs();
    checks.push(AuditCheck::upper_bound(
        "assembled_bound".into(),
        joint_value,
        bound_sum,
        EXACT_TOL,
    ));
    let hybrid = 2f64.powi(n as i32 - 1);
    // with no-signaling, Σ 2P collapses to 2^(N−2)·2·(p_eq + p_uneq) = 2^(N−1)
    checks.push(AuditCheck::equality(
        "no_signaling_collapse".into(),
        bound_sum,
        hybrid,
        EXACT_TOL * co_tuples as f64,
    ));
    checks.push(AuditCheck::upper_bound(
        "final_bound".into(),
        joint_value,
        hybrid,
        EXACT_TOL,
    ));
    Ok(AuditReport::from_checks(checks))
}

/// Writes shots as CSV. Plain grid shots use the header
/// `party_settings,outcomes,weight`; shots from a joint-measured party gain
/// the pair columns: `party_settings,aJ,aJp,outcomes,weight`. The settings
/// column is a bit string with `-` for the joint party; outcomes are
/// space-separated ±1 integers.
pub fn write_csv<W: Write>(records: &[ShotRecord], mut out: W) -> Result<()> {
    let has_joint = records.iter().any(|r| {
        r.outcomes
            .iter()
            .any(|o| matches!(o, PartyOutcome::Joint(..)))
    });
    if has_joint {
        writeln!(out, "party_settings,aJ,aJp,outcomes,weight")?;
    } else {
        writeln!(out, "party_settings,outcomes,weight")?;
    }
    for record in records {
        let settings: String = record
            .settings
            .iter()
            .map(|s| match s {
                Some(0) => '0',
                Some(_) => '1',
                None => '-',
            })
            .collect();
        let mut joint_pair: Option<(i8, i8)> = None;
        let singles: Vec<String> = record
            .outcomes
            .iter()
            .filter_map(|o| match o {
                PartyOutcome::Single(v) => Some(v.sign().to_string()),
                PartyOutcome::Joint(mu, nu) => {
                    joint_pair = Some((mu.sign(), nu.sign()));
                    None
                }
            })
            .collect();
        if has_joint {
            let (a, ap) = joint_pair.unwrap_or((0, 0));
            writeln!(out, "{settings},{a},{ap},{},1", singles.join(" "))?;
        } else {
            writeln!(out, "{settings},{},1", singles.join(" "))?;
        }
    }
    Ok(())
}

/// CSV rendering of shots as a string.
pub fn csv_string(records: &[ShotRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}
