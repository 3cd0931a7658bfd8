//! Machine-readable reports: one JSON document per command on stdout,
//! schema-versioned, echoing the configuration and seed.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::{CorrelatorTable, SvetlichnyResult};
use crate::optimize::OptimizeOutcome;
use crate::simulate::AuditReport;

use super::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub command: String,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_was_generated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ExperimentConfig>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlators: Option<CorrelatorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svetlichny: Option<SvetlichnyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint: Option<JointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharpness: Option<SharpnessReport>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            elapsed_ms: 0,
            seed: None,
            seed_was_generated: None,
            config: None,
            warnings: Vec::new(),
            bounds: None,
            correlators: None,
            svetlichny: None,
            joint: None,
            optimizer: None,
            sampling: None,
            audit: None,
            sharpness: None,
        }
    }

    /// Serializes to pretty JSON after checking that every number in the
    /// report is finite.
    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        ensure_finite(&value, "report")?;
        Ok(serde_json::to_string_pretty(&value)?)
    }
}

fn ensure_finite(value: &serde_json::Value, path: &str) -> Result<()> {
    match value {
        serde_json::Value::Number(n) => {
            // serde_json cannot represent non-finite floats; they arrive as
            // null instead, caught by the Null arm below
            let _ = n;
            Ok(())
        }
        serde_json::Value::Null => Err(Error::NonFiniteReportField {
            field: path.to_string(),
        }),
        serde_json::Value::Array(items) => items
            .iter()
            .enumerate()
            .try_for_each(|(i, v)| ensure_finite(v, &format!("{path}[{i}]"))),
        serde_json::Value::Object(map) => map
            .iter()
            .try_for_each(|(k, v)| ensure_finite(v, &format!("{path}.{k}"))),
        _ => Ok(()),
    }
}

#[derive(Debug, Serialize)]
pub struct BoundsReport {
    pub n_parties: usize,
    pub hybrid: f64,
    pub quantum: f64,
}

#[derive(Debug, Serialize)]
pub struct CorrelatorReport {
    pub n_parties: usize,
    /// Exact correlators keyed by setting bit string, party 1 first.
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_errors: Option<BTreeMap<String, f64>>,
}

impl CorrelatorReport {
    pub fn from_table(table: &CorrelatorTable) -> Self {
        CorrelatorReport {
            n_parties: table.n_parties(),
            values: table.bitstring_entries().into_iter().collect(),
            standard_errors: None,
        }
    }

    pub fn with_errors(table: &CorrelatorTable, errors: &[f64]) -> Self {
        let mut report = Self::from_table(table);
        report.standard_errors = Some(
            table
                .bitstring_entries()
                .iter()
                .zip(errors)
                .map(|((bits, _), &se)| (bits.clone(), se))
                .collect(),
        );
        report
    }
}

#[derive(Debug, Serialize)]
pub struct SvetlichnyReport {
    pub value: f64,
    pub hybrid_bound: f64,
    pub quantum_bound: f64,
    pub violates_hybrid: bool,
}

impl From<&SvetlichnyResult> for SvetlichnyReport {
    fn from(r: &SvetlichnyResult) -> Self {
        SvetlichnyReport {
            value: r.value,
            hybrid_bound: r.hybrid_bound,
            quantum_bound: r.quantum_bound,
            violates_hybrid: r.violates_hybrid,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct JointReport {
    /// S_N^J with party 1 jointly measured.
    pub value: f64,
    pub hybrid_bound: f64,
    pub busch_margin: f64,
    pub eta1: f64,
    pub eta2: f64,
}

#[derive(Debug, Serialize)]
pub struct OptimizerReport {
    pub best_value: f64,
    pub hybrid_bound: f64,
    pub quantum_bound: f64,
    /// Flat 4N angle vector [θ₀, φ₀, θ₁, φ₁] per party.
    pub best_angles: Vec<f64>,
    pub restarts_used: usize,
    pub evaluations: u64,
    pub converged: bool,
    /// Per-restart best values in restart order.
    pub restart_trace: Vec<f64>,
    /// Ready-to-run configuration reproducing `best_value` via `evaluate`.
    pub evaluate_config: ExperimentConfig,
}

#[derive(Debug, Serialize)]
pub struct SamplingReport {
    pub shots_per_tuple: u64,
    pub estimate: f64,
    pub standard_error: f64,
    pub exact: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
    /// Per-co-tuple empirical vs exact agreement rates, joint mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<BTreeMap<String, AgreementEntry>>,
}

#[derive(Debug, Serialize)]
pub struct AgreementEntry {
    pub empirical: f64,
    pub exact: f64,
}

#[derive(Debug, Serialize)]
pub struct AuditSection {
    pub overall: bool,
    pub checks: Vec<AuditCheckReport>,
}

#[derive(Debug, Serialize)]
pub struct AuditCheckReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl AuditSection {
    pub fn from_reports(reports: &[(&str, &AuditReport)]) -> Self {
        let mut checks = Vec::new();
        let mut overall = true;
        for (prefix, report) in reports {
            overall &= report.overall;
            for check in &report.checks {
                checks.push(AuditCheckReport {
                    name: format!("{prefix}.{}", check.name),
                    lhs: check.lhs,
                    rhs: check.rhs,
                    slack: check.slack,
                    passed: check.passed,
                });
            }
        }
        AuditSection { overall, checks }
    }
}

#[derive(Debug, Serialize)]
pub struct SharpnessReport {
    pub busch_margin: f64,
    pub equal_sharpness_max: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub admissible: bool,
}

pub fn optimizer_report(
    outcome: &OptimizeOutcome,
    restart_trace: Vec<f64>,
    state: &str,
    hybrid: f64,
    quantum: f64,
) -> OptimizerReport {
    let angles = outcome.best_angles.as_slice().to_vec();
    let n = outcome.best_angles.n_parties();
    let parties = (1..=n)
        .map(|party| super::config::PartyConfig {
            setting0: super::config::SettingConfig {
                direction: super::config::DirectionSpec::Angles {
                    theta: outcome.best_angles.theta(party, 0),
                    phi: outcome.best_angles.phi(party, 0),
                },
                sharpness: 1.0,
            },
            setting1: super::config::SettingConfig {
                direction: super::config::DirectionSpec::Angles {
                    theta: outcome.best_angles.theta(party, 1),
                    phi: outcome.best_angles.phi(party, 1),
                },
                sharpness: 1.0,
            },
        })
        .collect();
    OptimizerReport {
        best_value: outcome.best_value,
        hybrid_bound: hybrid,
        quantum_bound: quantum,
        best_angles: angles,
        restarts_used: outcome.restarts_used,
        evaluations: outcome.evaluations,
        converged: outcome.converged,
        restart_trace,
        evaluate_config: ExperimentConfig {
            n_parties: n,
            state: state.to_string(),
            parties,
            joint: None,
            shots: None,
            seed: None,
        },
    }
}
