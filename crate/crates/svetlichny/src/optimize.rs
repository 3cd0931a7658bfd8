//! Derivative-free maximization of the Svetlichny value over measurement
//! directions for a fixed state.
//!
//! The search space is the 4N vector of polar/azimuthal angles (two settings
//! per party), which keeps the problem unconstrained. Each restart runs a
//! Nelder–Mead simplex with adaptive coefficients from a random start, with
//! the simplex re-seeded at the incumbent a few times so the diameter can
//! reach the requested tolerance. Restarts derive independent sub-seeds, so
//! the best-over-restarts value is deterministic for a fixed (seed,
//! restarts, tol) and non-decreasing in the restart count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::inequality::{
    bounds, correlator_table, pauli_correlation_tensor, svetlichny_value, PartySettings,
    SettingsGrid,
};
use crate::measure::Setting;
use crate::qcore::{DensityMatrix, Direction};
use crate::simulate::derive_seed;

/// Default simplex-diameter tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default restart count, 8 per party.
pub fn default_restarts(n_parties: usize) -> usize {
    8 * n_parties
}

/// Angles parameterizing every party's two sharp measurement directions:
/// `[θ₀, φ₀, θ₁, φ₁]` per party, 4N values total. Stored canonically with
/// θ ∈ [0, π] and φ wrapped into [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct AngleVector {
    angles: Vec<f64>,
}

impl AngleVector {
    /// Canonicalizes arbitrary finite angles through the directions they
    /// describe, so equivalent parameterizations compare equal.
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if !angles.len().is_multiple_of(4) || angles.len() < 8 {
            return Err(Error::invalid_config(format!(
                "angle vector length {} is not 4N with N ≥ 2",
                angles.len()
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid_config("angle vector has non-finite entries"));
        }
        let canonical = angles
            .chunks_exact(2)
            .flat_map(|pair| {
                let (theta, phi) = Direction::from_angles(pair[0], pair[1]).to_angles();
                [theta, phi]
            })
            .collect();
        Ok(Self { angles: canonical })
    }

    pub fn n_parties(&self) -> usize {
        self.angles.len() / 4
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.angles
    }

    pub fn theta(&self, party: usize, setting: usize) -> f64 {
        self.angles[4 * (party - 1) + 2 * setting]
    }

    pub fn phi(&self, party: usize, setting: usize) -> f64 {
        self.angles[4 * (party - 1) + 2 * setting + 1]
    }

    /// The sharp settings grid these angles describe.
    pub fn to_grid(&self) -> SettingsGrid {
        grid_from_raw(&self.angles)
    }

    /// Reads the directions of a grid back into angles; sharpness is
    /// dropped (the objective is evaluated at η = 1).
    pub fn from_grid(grid: &SettingsGrid) -> Self {
        let angles = grid
            .parties()
            .iter()
            .flat_map(|p| {
                [p.setting0, p.setting1].into_iter().flat_map(|s| {
                    let (theta, phi) = s.direction().to_angles();
                    [theta, phi]
                })
            })
            .collect();
        Self { angles }
    }

    /// Uniformly random angles: θ ~ U[0, π], φ ~ U[0, 2π).
    pub fn random(n_parties: usize, rng: &mut impl Rng) -> Self {
        let angles = (0..4 * n_parties)
            .map(|i| {
                if i % 2 == 0 {
                    rng.random_range(0.0..std::f64::consts::PI)
                } else {
                    rng.random_range(0.0..std::f64::consts::TAU)
                }
            })
            .collect();
        Self { angles }
    }
}

fn grid_from_raw(angles: &[f64]) -> SettingsGrid {
    let parties: Vec<PartySettings> = angles
        .chunks_exact(4)
        .map(|chunk| {
            PartySettings::new(
                Setting::sharp(Direction::from_angles(chunk[0], chunk[1])),
                Setting::sharp(Direction::from_angles(chunk[2], chunk[3])),
            )
        })
        .collect();
    SettingsGrid::new(parties).expect("angle vector encodes at least two parties")
}

/// Result of a maximization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOutcome {
    pub best_value: f64,
    pub best_angles: AngleVector,
    pub restarts_used: usize,
    pub evaluations: u64,
    pub converged: bool,
}

/// `S_N` for the projective grid described by the angles (η = 1 everywhere);
/// the same correlator-table path the `inequality` module evaluates.
pub fn objective(rho: &DensityMatrix, angles: &AngleVector) -> Result<f64> {
    if angles.n_parties() != rho.n_parties() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_parties(),
            found: angles.n_parties(),
        });
    }
    let table = correlator_table(rho, &angles.to_grid())?;
    Ok(svetlichny_value(&table).value)
}

/// Best Svetlichny value over `restarts` random-start local searches.
pub fn maximize(
    rho: &DensityMatrix,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<OptimizeOutcome> {
    maximize_traced(rho, restarts, seed, tol).map(|(outcome, _)| outcome)
}

/// `maximize` plus the per-restart best values in restart order.
pub fn maximize_traced(
    rho: &DensityMatrix,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<(OptimizeOutcome, Vec<f64>)> {
    if restarts == 0 {
        return Err(Error::invalid_config("restarts must be at least 1"));
    }
    let n = rho.n_parties();
    let starts: Vec<AngleVector> = (0..restarts)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r as u64));
            AngleVector::random(n, &mut rng)
        })
        .collect();
    maximize_with_starts_traced(rho, &starts, tol)
}

/// Best Svetlichny value over local searches from the given starts; ties
/// between restarts break toward the earliest start.
pub fn maximize_with_starts(
    rho: &DensityMatrix,
    starts: &[AngleVector],
    tol: f64,
) -> Result<OptimizeOutcome> {
    maximize_with_starts_traced(rho, starts, tol).map(|(outcome, _)| outcome)
}

fn maximize_with_starts_traced(
    rho: &DensityMatrix,
    starts: &[AngleVector],
    tol: f64,
) -> Result<(OptimizeOutcome, Vec<f64>)> {
    if starts.is_empty() {
        return Err(Error::invalid_config("need at least one start"));
    }
    let n = rho.n_parties();
    if n < 2 {
        return Err(Error::PartyCountOutOfRange {
            n,
            min: 2,
            max: crate::qcore::MAX_PARTIES,
        });
    }
    for s in starts {
        if s.n_parties() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.n_parties(),
            });
        }
    }

    let tensor = pauli_correlation_tensor(rho);
    let mut evaluations = 0u64;
    let mut objective_neg = |x: &[f64]| -> f64 {
        evaluations += 1;
        let table = crate::inequality::correlator_table_from_tensor(&tensor, &grid_from_raw(x))
            .expect("grid from angles is always valid");
        -svetlichny_value(&table).value
    };

    let mut trace = Vec::with_capacity(starts.len());
    let mut best_value = f64::NEG_INFINITY;
    let mut best_x: Vec<f64> = starts[0].as_slice().to_vec();
    let mut best_converged = false;
    for start in starts {
        let (x, fx, converged) = polish(&mut objective_neg, start.as_slice(), tol);
        let value = -fx;
        trace.push(value);
        if value > best_value {
            best_value = value;
            best_x = x;
            best_converged = converged;
        }
    }
    let (_, quantum) = bounds(n)?;
    debug_assert!(
        best_value <= quantum + 1e-6,
        "optimizer value {best_value} exceeds the quantum bound {quantum}"
    );
    let outcome = OptimizeOutcome {
        best_value,
        best_angles: AngleVector::new(best_x)?,
        restarts_used: starts.len(),
        evaluations,
        converged: best_converged,
    };
    Ok((outcome, trace))
}

/// Runs Nelder–Mead repeatedly, re-seeding the simplex at the incumbent with
/// a smaller step until the simplex diameter drops below `tol`.
fn polish(f: &mut impl FnMut(&[f64]) -> f64, start: &[f64], tol: f64) -> (Vec<f64>, f64, bool) {
    let dim = start.len();
    let mut x = start.to_vec();
    let mut fx = f(&x);
    let mut step = 0.5;
    let mut converged = false;
    for _round in 0..8 {
        let (nx, nfx, diameter) = nelder_mead(f, &x, step, tol, 400 * dim);
        if nfx < fx {
            x = nx;
            fx = nfx;
        }
        if diameter < tol {
            converged = true;
            break;
        }
        step *= 0.25;
    }
    (x, fx, converged)
}

/// One Nelder–Mead run with Gao–Han adaptive coefficients. Returns the best
/// vertex, its value, and the final simplex diameter.
fn nelder_mead(
    f: &mut impl FnMut(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, f64) {
    let dim = start.len();
    let dimf = dim as f64;
    let alpha = 1.0;
    let gamma = 1.0 + 2.0 / dimf;
    let beta = 0.75 - 1.0 / (2.0 * dimf);
    let delta = 1.0 - 1.0 / dimf;

    // orthogonal initial simplex
    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    vertices.push(start.to_vec());
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += step;
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| f(v)).collect();

    let mut order: Vec<usize> = (0..=dim).collect();
    for _ in 0..max_iter {
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite objective"));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        let diameter = simplex_diameter(&vertices, best);
        if diameter < tol {
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0f64; dim];
        for &i in order.iter().take(dim) {
            for (c, xi) in centroid.iter_mut().zip(&vertices[i]) {
                *c += xi;
            }
        }
        for c in &mut centroid {
            *c /= dimf;
        }

        let blend = |from: &[f64], towards: &[f64], t: f64| -> Vec<f64> {
            from.iter()
                .zip(towards)
                .map(|(a, b)| a + t * (b - a))
                .collect()
        };
        // reflection of the worst vertex through the centroid
        let reflected = blend(&centroid, &vertices[worst], -alpha);
        let fr = f(&reflected);

        if fr < values[best] {
            let expanded = blend(&centroid, &vertices[worst], -gamma);
            let fe = f(&expanded);
            if fe < fr {
                vertices[worst] = expanded;
                values[worst] = fe;
            } else {
                vertices[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            vertices[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = if fr < values[worst] {
                blend(&centroid, &reflected, beta)
            } else {
                blend(&centroid, &vertices[worst], beta)
            };
            let fc = f(&contracted);
            if fc < values[worst].min(fr) {
                vertices[worst] = contracted;
                values[worst] = fc;
            } else {
                // shrink toward the best vertex
                let best_vertex = vertices[best].clone();
                for i in 0..=dim {
                    if i == best {
                        continue;
                    }
                    vertices[i] = blend(&best_vertex, &vertices[i], delta);
                    values[i] = f(&vertices[i]);
                }
            }
        }
    }

    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite objective"));
    let best = order[0];
    let diameter = simplex_diameter(&vertices, best);
    (vertices[best].clone(), values[best], diameter)
}

/// Largest Euclidean distance from any vertex to the best vertex.
fn simplex_diameter(vertices: &[Vec<f64>], best: usize) -> f64 {
    vertices
        .iter()
        .map(|v| {
            v.iter()
                .zip(&vertices[best])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Central-difference slopes of the objective in every angle coordinate.
pub fn gradient(rho: &DensityMatrix, angles: &AngleVector, h: f64) -> Result<Vec<f64>> {
    if h <= 0.0 {
        return Err(Error::invalid_config("step h must be positive"));
    }
    let tensor = pauli_correlation_tensor(rho);
    let eval = |x: &[f64]| -> Result<f64> {
        let table = crate::inequality::correlator_table_from_tensor(&tensor, &grid_from_raw(x))?;
        Ok(svetlichny_value(&table).value)
    };
    let base = angles.as_slice();
    let mut slopes = Vec::with_capacity(base.len());
    let mut probe = base.to_vec();
    for i in 0..base.len() {
        probe[i] = base[i] + h;
        let plus = eval(&probe)?;
        probe[i] = base[i] - h;
        let minus = eval(&probe)?;
        probe[i] = base[i];
        slopes.push((plus - minus) / (2.0 * h));
    }
    Ok(slopes)
}

/// Smoothness check: the largest coordinate-wise disagreement between
/// central-difference slopes at steps `h` and `h/2`. Shrinks as O(h²) on the
/// trigonometric objective.
pub fn finite_diff_check(rho: &DensityMatrix, angles: &AngleVector, h: f64) -> Result<f64> {
    let coarse = gradient(rho, angles, h)?;
    let fine = gradient(rho, angles, h / 2.0)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
