//! N-qubit density matrices, measurement directions, and state constructors.
//!
//! Conventions: parties are numbered 1..=N and party 1 is the most
//! significant qubit of the computational-basis index. All values are
//! immutable after construction.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::eigen::min_eigenvalue_hermitian;
use crate::qcore::matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix};

/// Largest supported party count; dense 2^N storage stays tractable below it.
pub const MAX_PARTIES: usize = 12;

const TRACE_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;
const UNIT_TOL: f64 = 1e-9;

/// Unit vector on the Bloch sphere selecting a qubit observable `d·σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    /// Accepts only vectors whose norm is 1 within 1e-9.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitDirection { norm });
        }
        Ok(Self { x, y, z })
    }

    /// Rescales an arbitrary nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NonUnitDirection { norm });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Spherical parameterization, θ from +z, φ in the xy-plane.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn x_axis() -> Self {
        Self {
            x: 1.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn y_axis() -> Self {
        Self {
            x: 0.0,
            y: 1.0,
            z: 0.0,
        }
    }

    pub fn z_axis() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 1.0,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Polar and azimuthal angles recovering this direction via `from_angles`.
    pub fn to_angles(&self) -> (f64, f64) {
        let theta = self.z.clamp(-1.0, 1.0).acos();
        let phi = self.y.atan2(self.x).rem_euclid(std::f64::consts::TAU);
        (theta, phi)
    }
}

/// `d·σ`: Hermitian, traceless, eigenvalues exactly {+1, −1}.
pub fn bloch_operator(d: &Direction) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(d.z, 0.0), C64::new(d.x, -d.y)],
        vec![C64::new(d.x, d.y), C64::new(-d.z, 0.0)],
    ])
}

/// Relative sign between the two computational branches of a GHZ state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhzPhase {
    Plus,
    Minus,
}

/// Unit-trace, Hermitian, positive semidefinite operator on N qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_parties: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity, and positivity, then stores the
    /// Hermitized matrix so conjugate entry pairs are exact.
    pub fn new(n_parties: usize, matrix: ComplexMatrix) -> Result<Self> {
        if n_parties == 0 || n_parties > MAX_PARTIES {
            return Err(Error::PartyCountOutOfRange {
                n: n_parties,
                min: 1,
                max: MAX_PARTIES,
            });
        }
        let dim = 1usize << n_parties;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.rows(),
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("trace is {tr}, expected 1"),
            });
        }
        let mut matrix = matrix;
        matrix.hermitize();
        let min_eig = min_eigenvalue_hermitian(&matrix)?;
        if min_eig < PSD_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("smallest eigenvalue {min_eig:.3e} < 0"),
            });
        }
        Ok(Self { n_parties, matrix })
    }

    /// Constructor for matrices that are positive by construction (pure
    /// projectors, convex mixtures); skips the O(dim³) positivity check.
    pub(crate) fn trusted(n_parties: usize, mut matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), 1usize << n_parties);
        debug_assert!(matrix.hermitian_deviation() <= 1e-10);
        debug_assert!((matrix.trace().re - 1.0).abs() <= 1e-10);
        matrix.hermitize();
        Self { n_parties, matrix }
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_parties
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// tr(ρ²); equals 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// Pure-state density matrix of `(|0…0⟩ ± |1…1⟩)/√2`.
pub fn make_ghz(n: usize, phase: GhzPhase) -> Result<DensityMatrix> {
    if !(2..=MAX_PARTIES).contains(&n) {
        return Err(Error::PartyCountOutOfRange {
            n,
            min: 2,
            max: MAX_PARTIES,
        });
    }
    let dim = 1usize << n;
    let sign = match phase {
        GhzPhase::Plus => 0.5,
        GhzPhase::Minus => -0.5,
    };
    let mut m = ComplexMatrix::zeros(dim, dim);
    m.set(0, 0, C64::new(0.5, 0.0));
    m.set(dim - 1, dim - 1, C64::new(0.5, 0.0));
    m.set(0, dim - 1, C64::new(sign, 0.0));
    m.set(dim - 1, 0, C64::new(sign, 0.0));
    Ok(DensityMatrix::trusted(n, m))
}

/// Bit position of 1-based `party` inside a basis index of an N-party state.
#[inline]
pub(crate) fn party_bit(n_parties: usize, party: usize) -> usize {
    n_parties - party
}

/// Reduced density matrix over `keep` (1-based party indices, any order).
/// Kept parties appear in ascending original order in the output.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_parties();
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::InvalidDensityMatrix {
            reason: "duplicate party index in keep set".into(),
        });
    }
    for &p in &kept {
        if p == 0 || p > n {
            return Err(Error::PartyIndexOutOfRange {
                index: p,
                n_parties: n,
            });
        }
    }

    let k = kept.len();
    let dim = rho.dim();
    let out_dim = 1usize << k;
    // packs the kept parties' bits, smallest party index most significant
    let reduce = |idx: usize| -> usize {
        kept.iter().fold(0usize, |acc, &p| {
            (acc << 1) | ((idx >> party_bit(n, p)) & 1)
        })
    };
    let kept_mask: usize = kept.iter().map(|&p| 1usize << party_bit(n, p)).sum();
    let traced_mask = (dim - 1) & !kept_mask;

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for i in 0..dim {
        for j in 0..dim {
            if (i & traced_mask) != (j & traced_mask) {
                continue;
            }
            let (a, b) = (reduce(i), reduce(j));
            let v = out.get(a, b) + rho.matrix().get(i, j);
            out.set(a, b, v);
        }
    }
    Ok(DensityMatrix::trusted(k, out))
}

/// Relabels parties: output party `j` (1-based) carries what input party
/// `perm[j-1]` carried. `perm` must be a permutation of 1..=N.
pub fn permute_parties(rho: &DensityMatrix, perm: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_parties();
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n + 1];
    for &p in perm {
        if p == 0 || p > n || seen[p] {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("{perm:?} is not a permutation of 1..={n}"),
            });
        }
        seen[p] = true;
    }
    let remap = |idx: usize| -> usize {
        perm.iter().enumerate().fold(0usize, |acc, (new0, &old)| {
            acc | (((idx >> party_bit(n, old)) & 1) << party_bit(n, new0 + 1))
        })
    };
    let dim = rho.dim();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(remap(i), remap(j), rho.matrix().get(i, j));
        }
    }
    Ok(DensityMatrix::trusted(n, out))
}

/// Re tr(ρ·obs) for a Hermitian observable; the imaginary residual of the
/// trace must stay below 1e-12 and is asserted.
pub fn expectation(rho: &DensityMatrix, obs: &ComplexMatrix) -> Result<f64> {
    if obs.rows() != rho.dim() || obs.cols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: obs.rows(),
        });
    }
    let t = rho.matrix().trace_product(obs);
    assert!(
        t.im.abs() <= 1e-12,
        "expectation trace has imaginary part {:.3e}",
        t.im
    );
    Ok(t.re)
}

/// Pure vs mixed choice for `random_state`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purity {
    Pure,
    Mixed,
}

/// Deterministic random density matrix. Pure states are Gaussian vectors
/// normalized; mixed states are convex mixtures of 2^n random pure states
/// with uniform-simplex weights. The generator is ChaCha8 seeded from `seed`.
pub fn random_state(n: usize, purity: Purity, seed: u64) -> Result<DensityMatrix> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::PartyCountOutOfRange {
            n,
            min: 1,
            max: MAX_PARTIES,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n;
    match purity {
        Purity::Pure => {
            let psi = random_unit_vector(dim, &mut rng);
            Ok(DensityMatrix::trusted(n, projector(&psi)))
        }
        Purity::Mixed => {
            let weights = simplex_weights(dim, &mut rng);
            let mut m = ComplexMatrix::zeros(dim, dim);
            for w in weights {
                let psi = random_unit_vector(dim, &mut rng);
                m = &m + &projector(&psi).scale_re(w);
            }
            Ok(DensityMatrix::trusted(n, m))
        }
    }
}

fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| C64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

fn projector(psi: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(psi.len(), psi.len(), |i, j| psi[i] * psi[j].conj())
}

fn simplex_weights(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // i.i.d. Exp(1) normalized = uniform on the simplex
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|e| e / total).collect()
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u: f64 = loop {
        let u = rng.random::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// The three Pauli matrices in x, y, z order.
pub fn pauli_basis() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// Uniform direction on the sphere, handy for fuzzing sweeps.
pub fn random_direction(rng: &mut impl Rng) -> Direction {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    Direction::new(r * phi.cos(), r * phi.sin(), z).expect("norm is 1 up to rounding")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::{kron, kron_all, pauli_x, pauli_z};

    /// `σ_x^⊗n`, the all-party bit flip.
    fn bit_flip_all(n: usize) -> ComplexMatrix {
        let x = pauli_x();
        let mut out = x.clone();
        for _ in 1..n {
            out = kron(&out, &x);
        }
        out
    }

    #[test]
    fn ghz_two_party_matrix_entries() {
        let rho = make_ghz(2, GhzPhase::Plus).unwrap();
        let m = rho.matrix();
        for (i, j, want) in [
            (0, 0, 0.5),
            (0, 3, 0.5),
            (3, 0, 0.5),
            (3, 3, 0.5),
            (1, 1, 0.0),
            (0, 1, 0.0),
            (2, 3, 0.0),
        ] {
            assert_eq!(m.get(i, j), C64::new(want, 0.0), "entry ({i},{j})");
        }
    }

    #[test]
    fn ghz_three_party_minus_entries() {
        let rho = make_ghz(3, GhzPhase::Minus).unwrap();
        let m = rho.matrix();
        assert_eq!(m.get(0, 0), C64::new(0.5, 0.0));
        assert_eq!(m.get(7, 7), C64::new(0.5, 0.0));
        assert_eq!(m.get(0, 7), C64::new(-0.5, 0.0));
        assert_eq!(m.get(7, 0), C64::new(-0.5, 0.0));
    }

    #[test]
    fn ghz_states_are_pure() {
        for n in 2..=6 {
            let rho = make_ghz(n, GhzPhase::Plus).unwrap();
            assert!((rho.purity() - 1.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn ghz_rejects_single_party() {
        assert!(make_ghz(1, GhzPhase::Plus).is_err());
        assert!(make_ghz(MAX_PARTIES + 1, GhzPhase::Plus).is_err());
    }

    #[test]
    fn ghz_plus_invariant_under_global_bit_flip() {
        for n in 2..=4 {
            let rho = make_ghz(n, GhzPhase::Plus).unwrap();
            let flip = bit_flip_all(n);
            let conjugated = &(&flip * rho.matrix()) * &flip;
            assert!(conjugated.max_abs_diff(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn bloch_operator_axes() {
        assert!(bloch_operator(&Direction::z_axis()).max_abs_diff(&pauli_z()) == 0.0);
        assert!(bloch_operator(&Direction::x_axis()).max_abs_diff(&pauli_x()) == 0.0);
    }

    #[test]
    fn bloch_operator_eigenvalues_are_unit() {
        // oracle: roots of the characteristic polynomial λ² − (tr)λ + det,
        // with tr = 0 and det = −|d|² = −1 for unit d, so λ = ±1
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let d = random_direction(&mut rng);
            let m = bloch_operator(&d);
            let tr = m.trace().re;
            let det = (m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)).re;
            assert!(tr.abs() < 1e-12);
            let disc = (tr * tr / 4.0 - det).sqrt();
            let (lo, hi) = (tr / 2.0 - disc, tr / 2.0 + disc);
            assert!((hi - 1.0).abs() < 1e-9 && (lo + 1.0).abs() < 1e-9);
            // and d·σ squared is the identity
            let sq = &m * &m;
            assert!(sq.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        }
    }

    #[test]
    fn non_unit_direction_rejected() {
        assert!(Direction::new(1.0, 1.0, 0.0).is_err());
        assert!(Direction::new(0.0, 0.0, 0.0).is_err());
        assert!(Direction::normalized(2.0, 0.0, 0.0).is_ok());
        assert!(Direction::normalized(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn direction_angle_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let d = random_direction(&mut rng);
            let (theta, phi) = d.to_angles();
            let back = Direction::from_angles(theta, phi);
            for (a, b) in d.components().iter().zip(back.components()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_of_ghz_is_maximally_mixed() {
        // frozen from the direct basis summation: Σ_t ⟨a t|ρ|b t⟩ = δ_ab/2
        let rho = make_ghz(3, GhzPhase::Plus).unwrap();
        let reduced = partial_trace(&rho, &[1]).unwrap();
        let half_identity = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(reduced.matrix().max_abs_diff(&half_identity) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factor() {
        let rho1 = random_state(1, Purity::Mixed, 5).unwrap();
        let rho2 = random_state(1, Purity::Mixed, 6).unwrap();
        let prod = DensityMatrix::trusted(2, kron(rho1.matrix(), rho2.matrix()));
        let back1 = partial_trace(&prod, &[1]).unwrap();
        let back2 = partial_trace(&prod, &[2]).unwrap();
        assert!(back1.matrix().max_abs_diff(rho1.matrix()) < 1e-12);
        assert!(back2.matrix().max_abs_diff(rho2.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_and_composes() {
        let rho = random_state(4, Purity::Mixed, 9).unwrap();
        let joint = partial_trace(&rho, &[2, 4]).unwrap();
        assert!((joint.matrix().trace().re - 1.0).abs() < 1e-12);
        // one party at a time: trace out 1, then 3 (party 3 becomes party 2)
        let step1 = partial_trace(&rho, &[2, 3, 4]).unwrap();
        let step2 = partial_trace(&step1, &[1, 3]).unwrap();
        assert!(step2.matrix().max_abs_diff(joint.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let rho = make_ghz(2, GhzPhase::Plus).unwrap();
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[3]).is_err());
        assert!(partial_trace(&rho, &[0]).is_err());
    }

    #[test]
    fn expectation_basics() {
        let mixed = DensityMatrix::trusted(1, ComplexMatrix::identity(2).scale_re(0.5));
        assert_eq!(expectation(&mixed, &pauli_z()).unwrap(), 0.0);

        let zero_state = DensityMatrix::trusted(
            1,
            ComplexMatrix::from_fn(2, 2, |i, j| {
                if i == 0 && j == 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        );
        assert_eq!(expectation(&zero_state, &pauli_z()).unwrap(), 1.0);
    }

    #[test]
    fn ghz_xxx_expectation_is_one() {
        // oracle: full matrix product trace, a different code path than the
        // paired trace_product accumulation
        let rho = make_ghz(3, GhzPhase::Plus).unwrap();
        let xxx = kron_all([&pauli_x(), &pauli_x(), &pauli_x()]);
        let direct = (rho.matrix() * &xxx).trace();
        assert!((direct.re - 1.0).abs() < 1e-12 && direct.im.abs() < 1e-12);
        assert!((expectation(&rho, &xxx).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_of_identity_is_one() {
        for seed in 0..5 {
            let rho = random_state(2, Purity::Mixed, seed).unwrap();
            let id = ComplexMatrix::identity(4);
            assert!((expectation(&rho, &id).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let rho = make_ghz(2, GhzPhase::Plus).unwrap();
        assert!(expectation(&rho, &pauli_z()).is_err());
    }

    #[test]
    fn random_state_is_deterministic() {
        let a = random_state(3, Purity::Mixed, 42).unwrap();
        let b = random_state(3, Purity::Mixed, 42).unwrap();
        assert_eq!(a.matrix().entries(), b.matrix().entries());
        let c = random_state(3, Purity::Mixed, 43).unwrap();
        assert!(a.matrix().max_abs_diff(c.matrix()) > 1e-6);
    }

    #[test]
    fn random_state_invariants() {
        for seed in 0..8 {
            for (purity, n) in [(Purity::Pure, 3), (Purity::Mixed, 2)] {
                let rho = random_state(n, purity, seed).unwrap();
                let m = rho.matrix();
                assert!((m.trace().re - 1.0).abs() < 1e-12);
                assert!(m.hermitian_deviation() == 0.0);
                let min = min_eigenvalue_hermitian(m).unwrap();
                assert!(min > -1e-10, "seed {seed}: min eigenvalue {min}");
                match purity {
                    Purity::Pure => assert!((rho.purity() - 1.0).abs() < 1e-12),
                    Purity::Mixed => assert!(rho.purity() < 1.0 - 1e-6),
                }
            }
        }
    }

    #[test]
    fn random_single_qubit_mixed_state_stays_in_bloch_ball() {
        for seed in 0..20 {
            let rho = random_state(1, Purity::Mixed, seed).unwrap();
            let norm_sq: f64 = pauli_basis()
                .iter()
                .map(|p| expectation(&rho, p).unwrap().powi(2))
                .sum();
            assert!(norm_sq.sqrt() <= 1.0 + 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn validated_constructor_rejects_bad_input() {
        let dim_off = ComplexMatrix::identity(3);
        assert!(DensityMatrix::new(1, dim_off).is_err());

        let not_unit_trace = ComplexMatrix::identity(2);
        assert!(DensityMatrix::new(1, not_unit_trace).is_err());

        let not_psd = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                C64::new(0.0, 0.0)
            } else if i == 0 {
                C64::new(1.5, 0.0)
            } else {
                C64::new(-0.5, 0.0)
            }
        });
        assert!(matches!(
            DensityMatrix::new(1, not_psd),
            Err(Error::InvalidDensityMatrix { .. })
        ));

        let ok = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(DensityMatrix::new(1, ok).is_ok());
    }

    #[test]
    fn permute_parties_round_trip_and_swap() {
        let rho1 = random_state(1, Purity::Mixed, 1).unwrap();
        let rho2 = random_state(1, Purity::Mixed, 2).unwrap();
        let prod = DensityMatrix::trusted(2, kron(rho1.matrix(), rho2.matrix()));
        let swapped = permute_parties(&prod, &[2, 1]).unwrap();
        let expected = DensityMatrix::trusted(2, kron(rho2.matrix(), rho1.matrix()));
        assert!(swapped.matrix().max_abs_diff(expected.matrix()) < 1e-12);
        let back = permute_parties(&swapped, &[2, 1]).unwrap();
        assert!(back.matrix().max_abs_diff(prod.matrix()) < 1e-12);
    }
}
