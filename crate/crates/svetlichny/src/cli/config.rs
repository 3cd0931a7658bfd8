//! Experiment configuration: a single JSON document describing the state,
//! per-party settings, optional joint measurement on party 1, shots, and
//! seed. Directions may be 3-vectors (normalized with a warning) or
//! (θ, φ) pairs in radians.

use std::fs;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::{PartySettings, SettingsGrid};
use crate::measure::{busch_margin, joint_povm, JointPovm, Setting};
use crate::qcore::{make_ghz, ComplexMatrix, DensityMatrix, Direction, GhzPhase, C64, MAX_PARTIES};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_parties: usize,
    /// "ghz+", "ghz-", "mixed", or a path to an amplitude file.
    pub state: String,
    pub parties: Vec<PartyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<JointConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartyConfig {
    pub setting0: SettingConfig,
    pub setting1: SettingConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SettingConfig {
    pub direction: DirectionSpec,
    #[serde(default = "default_sharpness")]
    pub sharpness: f64,
}

fn default_sharpness() -> f64 {
    1.0
}

/// A direction given either as a 3-vector or as spherical angles.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectionSpec {
    Vector([f64; 3]),
    Angles { theta: f64, phi: f64 },
}

impl DirectionSpec {
    pub fn from_direction(d: &Direction) -> Self {
        let (theta, phi) = d.to_angles();
        DirectionSpec::Angles { theta, phi }
    }

    /// Resolves to a unit direction, normalizing vectors and warning when
    /// the input was off the sphere.
    fn resolve(&self, context: &str, warnings: &mut Vec<String>) -> Result<Direction> {
        match self {
            DirectionSpec::Vector([x, y, z]) => match Direction::new(*x, *y, *z) {
                Ok(d) => Ok(d),
                Err(_) => {
                    let d = Direction::normalized(*x, *y, *z).map_err(|_| {
                        Error::invalid_config(format!(
                            "{context}: direction vector has zero length"
                        ))
                    })?;
                    warnings.push(format!(
                        "{context}: direction [{x}, {y}, {z}] normalized to unit length"
                    ));
                    Ok(d)
                }
            },
            DirectionSpec::Angles { theta, phi } => {
                if !theta.is_finite() || !phi.is_finite() {
                    return Err(Error::invalid_config(format!(
                        "{context}: non-finite angles"
                    )));
                }
                Ok(Direction::from_angles(*theta, *phi))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointConfig {
    pub eta1: f64,
    pub eta2: f64,
}

/// Everything a command needs, resolved and validated from a config.
#[derive(Debug)]
pub struct ResolvedExperiment {
    pub config: ExperimentConfig,
    pub rho: DensityMatrix,
    pub grid: SettingsGrid,
    /// Joint observable on party 1 plus its Busch margin, in joint mode.
    pub joint: Option<(JointPovm, f64)>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub seed_was_generated: bool,
    pub warnings: Vec<String>,
}

impl ResolvedExperiment {
    /// Parties 2..N as the co-party settings of a joint experiment.
    pub fn grid_rest(&self) -> Vec<PartySettings> {
        self.grid.parties()[1..].to_vec()
    }
}

impl ExperimentConfig {
    /// Reads a config from a path, or from stdin when the path is "-".
    pub fn load(path: &str) -> Result<Self> {
        let text = if path == "-" {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        } else {
            fs::read_to_string(path)?
        };
        Ok(serde_json::from_str(&text)?)
    }

    /// Validates the document and builds the state, grid, and joint POVM.
    pub fn resolve(self) -> Result<ResolvedExperiment> {
        let n = self.n_parties;
        if !(2..=MAX_PARTIES).contains(&n) {
            return Err(Error::PartyCountOutOfRange {
                n,
                min: 2,
                max: MAX_PARTIES,
            });
        }
        if self.parties.len() != n {
            return Err(Error::invalid_config(format!(
                "config lists {} parties but n_parties is {n}",
                self.parties.len()
            )));
        }
        let mut warnings = Vec::new();
        let rho = resolve_state(&self.state, n, &mut warnings)?;

        let mut parties = Vec::with_capacity(n);
        for (i, p) in self.parties.iter().enumerate() {
            let party = i + 1;
            let s0 = resolve_setting(
                &p.setting0,
                &format!("party {party} setting0"),
                &mut warnings,
            )?;
            let s1 = resolve_setting(
                &p.setting1,
                &format!("party {party} setting1"),
                &mut warnings,
            )?;
            parties.push(PartySettings::new(s0, s1));
        }
        let grid = SettingsGrid::new(parties)?;

        let joint = match &self.joint {
            None => None,
            Some(j) => {
                let p1 = grid.party(1);
                let s1 = Setting::new(*p1.setting0.direction(), j.eta1)?;
                let s2 = Setting::new(*p1.setting1.direction(), j.eta2)?;
                let margin = busch_margin(&s1, &s2);
                let povm = joint_povm(&s1, &s2)?;
                Some((povm, margin))
            }
        };

        let (seed, seed_was_generated) = match self.seed {
            Some(s) => (s, false),
            None => (rand::random::<u64>(), true),
        };
        Ok(ResolvedExperiment {
            shots: self.shots,
            config: self,
            rho,
            grid,
            joint,
            seed,
            seed_was_generated,
            warnings,
        })
    }
}

fn resolve_setting(
    s: &SettingConfig,
    context: &str,
    warnings: &mut Vec<String>,
) -> Result<Setting> {
    let direction = s.direction.resolve(context, warnings)?;
    let setting = Setting::new(direction, s.sharpness).map_err(|e| match e {
        Error::SharpnessOutOfRange { value } => {
            Error::invalid_config(format!("{context}: sharpness {value} outside [0, 1]"))
        }
        other => other,
    })?;
    if setting.is_degenerate() {
        warnings.push(format!(
            "{context}: sharpness 0 gives the trivial measurement"
        ));
    }
    Ok(setting)
}

/// "ghz+", "ghz-", "mixed", or an amplitude file with one `re im` pair per
/// line, 2^N lines, normalized on load (warning when off by more than 1e-6).
pub fn resolve_state(state: &str, n: usize, warnings: &mut Vec<String>) -> Result<DensityMatrix> {
    match state {
        "ghz+" => make_ghz(n, GhzPhase::Plus),
        "ghz-" => make_ghz(n, GhzPhase::Minus),
        "mixed" => {
            let dim = 1usize << n;
            Ok(DensityMatrix::trusted(
                n,
                ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
            ))
        }
        path => state_from_amplitude_file(path, n, warnings),
    }
}

fn state_from_amplitude_file(
    path: &str,
    n: usize,
    warnings: &mut Vec<String>,
) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid_config(format!("cannot read state file `{path}`: {e}")))?;
    let mut amplitudes = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let re: f64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_line_error(path, lineno))?;
        let im: f64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_line_error(path, lineno))?;
        if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
            return Err(parse_line_error(path, lineno));
        }
        amplitudes.push(C64::new(re, im));
    }
    let dim = 1usize << n;
    if amplitudes.len() != dim {
        return Err(Error::invalid_config(format!(
            "state file `{path}` has {} amplitudes, expected {dim}",
            amplitudes.len()
        )));
    }
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::invalid_config(format!(
            "state file `{path}` describes the zero vector"
        )));
    }
    if (norm - 1.0).abs() > 1e-6 {
        warnings.push(format!(
            "state file `{path}`: norm {norm:.9} renormalized to 1"
        ));
    }
    let psi: Vec<C64> = amplitudes.into_iter().map(|a| a / norm).collect();
    // the projector of a unit vector is already a valid density matrix
    let matrix = ComplexMatrix::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj());
    Ok(DensityMatrix::trusted(n, matrix))
}

fn parse_line_error(path: &str, lineno: usize) -> Error {
    Error::invalid_config(format!(
        "state file `{path}` line {}: expected `re im`",
        lineno + 1
    ))
}

/// Parses a `x,y,z` direction argument, normalizing with a warning.
pub fn parse_direction_arg(text: &str, warnings: &mut Vec<String>) -> Result<Direction> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::invalid_config(format!("cannot parse direction `{text}`")))?;
    if parts.len() != 3 {
        return Err(Error::invalid_config(format!(
            "direction `{text}` needs exactly three components"
        )));
    }
    DirectionSpec::Vector([parts[0], parts[1], parts[2]]).resolve("direction argument", warnings)
}
