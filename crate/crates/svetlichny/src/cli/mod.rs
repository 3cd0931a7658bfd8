//! Command-line interface: `bounds`, `evaluate`, `optimize`, `sample`,
//! `audit`, and `sharpness` subcommands, each emitting a JSON report on
//! stdout with diagnostics on stderr.
//!
//! Exit codes: 0 on success (and when every audit check passes), 1 for
//! usage/config errors, 2 when an audit ran and failed.

mod config;
mod report;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::inequality::{
    bounds, correlator_table, format_tuple, sign_v, svetlichny_joint_value, svetlichny_value,
};
use crate::measure::{busch_margin, equal_sharpness_max, unsharp_povm, Setting};
use crate::optimize::{default_restarts, maximize_traced, DEFAULT_TOL};
use crate::simulate::{
    audit_chain_n, audit_chain_three, audit_no_signaling, derive_seed, empirical_correlators,
    estimate_svetlichny, joint_agreement_stats, outcome_distribution, sample_outcomes, write_csv,
    PartyOutcome, PartyPovm, ShotRecord,
};

pub use config::{
    DirectionSpec, ExperimentConfig, JointConfig, PartyConfig, ResolvedExperiment, SettingConfig,
};
pub use report::Report;

#[derive(Parser)]
#[command(
    name = "svetlichny",
    version,
    about = "Svetlichny inequality simulation and optimization toolkit"
)]
struct Cli {
    /// Emit machine-readable JSON on stdout (always on).
    #[arg(long, global = true, default_value_t = true, hide_short_help = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the hybrid bound 2^(N-1) and quantum bound 2^(N-1)*sqrt(2)
    Bounds {
        /// Number of parties (at least 2)
        #[arg(long)]
        n: usize,
    },
    /// Evaluate the exact correlator table and Svetlichny value of a config
    Evaluate {
        /// Path to a JSON experiment config, or '-' for stdin
        #[arg(long)]
        config: String,
    },
    /// Maximize the Svetlichny value over measurement directions
    Optimize {
        /// Number of parties (at least 2)
        #[arg(long)]
        n: usize,
        /// State: ghz+, ghz-, mixed, or an amplitude file path
        #[arg(long, default_value = "ghz+")]
        state: String,
        /// Random restarts (default 8 per party)
        #[arg(long)]
        restarts: Option<usize>,
        /// Generator seed (drawn from entropy when omitted)
        #[arg(long)]
        seed: Option<u64>,
        /// Simplex diameter tolerance
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Sample measurement outcomes and report empirical correlators
    Sample {
        /// Path to a JSON experiment config, or '-' for stdin
        #[arg(long)]
        config: String,
        /// Shots per setting tuple (overrides the config)
        #[arg(long)]
        shots: Option<u64>,
        /// Generator seed (overrides the config)
        #[arg(long)]
        seed: Option<u64>,
        /// Also write one CSV row per shot to this path
        #[arg(long)]
        csv: Option<String>,
    },
    /// Run the no-signaling and derivation-chain audits
    Audit {
        /// Path to a JSON experiment config, or '-' for stdin
        #[arg(long)]
        config: String,
        /// Monte Carlo shots per check (exact-only when omitted)
        #[arg(long)]
        shots: Option<u64>,
        /// Generator seed (overrides the config)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Busch margin and equal-sharpness maximum for two directions
    Sharpness {
        /// First direction as x,y,z (normalized if needed)
        a: String,
        /// Second direction as x,y,z
        a2: String,
        /// Sharpness of the first measurement (default 1)
        #[arg(long)]
        eta1: Option<f64>,
        /// Sharpness of the second measurement (default 1)
        #[arg(long)]
        eta2: Option<f64>,
    },
}

/// Parses argv and runs a command; the process exit code follows the
/// 0/1/2 contract.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    let started = Instant::now();
    let (mut report, code) = match command {
        Command::Bounds { n } => (cmd_bounds(n)?, ExitCode::SUCCESS),
        Command::Evaluate { config } => (cmd_evaluate(&config)?, ExitCode::SUCCESS),
        Command::Optimize {
            n,
            state,
            restarts,
            seed,
            tol,
        } => (
            cmd_optimize(n, &state, restarts, seed, tol)?,
            ExitCode::SUCCESS,
        ),
        Command::Sample {
            config,
            shots,
            seed,
            csv,
        } => (
            cmd_sample(&config, shots, seed, csv.as_deref())?,
            ExitCode::SUCCESS,
        ),
        Command::Audit {
            config,
            shots,
            seed,
        } => {
            let report = cmd_audit(&config, shots, seed)?;
            let ok = report.audit.as_ref().is_some_and(|a| a.overall);
            (report, ExitCode::from(audit_exit_code(ok)))
        }
        Command::Sharpness { a, a2, eta1, eta2 } => {
            (cmd_sharpness(&a, &a2, eta1, eta2)?, ExitCode::SUCCESS)
        }
    };
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    println!("{}", report.to_json()?);
    Ok(code)
}

/// Audit runs succeed with 0 and fail with 2; other failures exit 1 before
/// reaching this point.
fn audit_exit_code(all_passed: bool) -> u8 {
    if all_passed {
        0
    } else {
        2
    }
}

fn cmd_bounds(n: usize) -> Result<Report> {
    let (hybrid, quantum) = bounds(n)?;
    let mut report = Report::new("bounds");
    report.bounds = Some(report::BoundsReport {
        n_parties: n,
        hybrid,
        quantum,
    });
    Ok(report)
}

fn cmd_evaluate(config_path: &str) -> Result<Report> {
    let resolved = ExperimentConfig::load(config_path)?.resolve()?;
    let mut report = Report::new("evaluate");
    report.seed = Some(resolved.seed);
    report.seed_was_generated = Some(resolved.seed_was_generated);
    report.warnings = resolved.warnings.clone();

    let table = correlator_table(&resolved.rho, &resolved.grid)?;
    let result = svetlichny_value(&table);
    report.correlators = Some(report::CorrelatorReport::from_table(&table));
    report.svetlichny = Some((&result).into());

    if let Some((joint, margin)) = &resolved.joint {
        let value = svetlichny_joint_value(&resolved.rho, joint, &resolved.grid_rest())?;
        let joint_cfg = resolved.config.joint.as_ref().expect("joint mode");
        report.joint = Some(report::JointReport {
            value,
            hybrid_bound: result.hybrid_bound,
            busch_margin: *margin,
            eta1: joint_cfg.eta1,
            eta2: joint_cfg.eta2,
        });
    }
    report.config = Some(resolved.config);
    Ok(report)
}

fn cmd_optimize(
    n: usize,
    state: &str,
    restarts: Option<usize>,
    seed: Option<u64>,
    tol: f64,
) -> Result<Report> {
    let mut warnings = Vec::new();
    let rho = config::resolve_state(state, n, &mut warnings)?;
    let restarts = restarts.unwrap_or_else(|| default_restarts(n));
    let (seed, seed_was_generated) = match seed {
        Some(s) => (s, false),
        None => (rand::random::<u64>(), true),
    };
    let (outcome, trace) = maximize_traced(&rho, restarts, seed, tol)?;
    let (hybrid, quantum) = bounds(n)?;

    let mut report = Report::new("optimize");
    report.seed = Some(seed);
    report.seed_was_generated = Some(seed_was_generated);
    report.warnings = warnings;
    report.bounds = Some(report::BoundsReport {
        n_parties: n,
        hybrid,
        quantum,
    });
    report.optimizer = Some(report::optimizer_report(
        &outcome, trace, state, hybrid, quantum,
    ));
    Ok(report)
}

fn cmd_sample(
    config_path: &str,
    shots_flag: Option<u64>,
    seed_flag: Option<u64>,
    csv_path: Option<&str>,
) -> Result<Report> {
    let mut resolved = ExperimentConfig::load(config_path)?.resolve()?;
    if let Some(seed) = seed_flag {
        resolved.seed = seed;
        resolved.seed_was_generated = false;
    }
    let shots = shots_flag
        .or(resolved.shots)
        .ok_or_else(|| Error::invalid_config("sample needs --shots or a shots field"))?;
    if shots == 0 {
        return Err(Error::invalid_config("shots must be at least 1"));
    }

    let mut report = Report::new("sample");
    report.seed = Some(resolved.seed);
    report.seed_was_generated = Some(resolved.seed_was_generated);
    report.warnings = resolved.warnings.clone();

    let sampling = match &resolved.joint {
        None => sample_grid(&resolved, shots, csv_path)?,
        Some(_) => sample_joint(&resolved, shots, csv_path)?,
    };
    report.sampling = Some(sampling);
    report.config = Some(resolved.config);
    Ok(report)
}

/// Samples every setting tuple of the plain grid and estimates S_N.
fn sample_grid(
    resolved: &ResolvedExperiment,
    shots: u64,
    csv_path: Option<&str>,
) -> Result<report::SamplingReport> {
    let n = resolved.grid.n_parties();
    let mut records: Vec<ShotRecord> = Vec::new();
    for tuple in 0..(1usize << n) {
        let povms: Vec<PartyPovm> = (1..=n)
            .map(|party| PartyPovm::Binary(unsharp_povm(resolved.grid.chosen(party, tuple))))
            .collect();
        let pmf = outcome_distribution(&resolved.rho, &povms)?;
        let settings: Vec<Option<u8>> = (0..n)
            .map(|party| Some(((tuple >> (n - 1 - party)) & 1) as u8))
            .collect();
        records.extend(
            sample_outcomes(&pmf, shots, derive_seed(resolved.seed, tuple as u64))
                .into_iter()
                .map(|r| r.with_settings(settings.clone())),
        );
    }
    let (table, errors) = empirical_correlators(&records, n)?;
    let (estimate, standard_error) = estimate_svetlichny(&table, &errors);
    let exact = svetlichny_value(&correlator_table(&resolved.rho, &resolved.grid)?).value;

    let csv_path = write_csv_if_requested(&records, csv_path)?;
    Ok(report::SamplingReport {
        shots_per_tuple: shots,
        estimate,
        standard_error,
        exact,
        csv_path,
        agreement: None,
    })
}

/// Samples the joint-measurement experiment per co-party tuple and
/// estimates S_N^J plus the agreement rates.
fn sample_joint(
    resolved: &ResolvedExperiment,
    shots: u64,
    csv_path: Option<&str>,
) -> Result<report::SamplingReport> {
    let (joint, _) = resolved.joint.as_ref().expect("joint mode");
    let grid_rest = resolved.grid_rest();
    let n = resolved.grid.n_parties();
    let co_bits = n - 1;

    let mut records: Vec<ShotRecord> = Vec::new();
    let mut signed_sum = 0.0f64;
    let mut variance = 0.0f64;
    let mut agreement = BTreeMap::new();
    for co_tuple in 0..(1usize << co_bits) {
        let mut povms = vec![PartyPovm::Joint(joint.clone())];
        for (i, p) in grid_rest.iter().enumerate() {
            let bit = (co_tuple >> (co_bits - 1 - i)) & 1;
            povms.push(PartyPovm::Binary(unsharp_povm(p.setting(bit))));
        }
        let pmf = outcome_distribution(&resolved.rho, &povms)?;
        let batch = sample_outcomes(&pmf, shots, derive_seed(resolved.seed, co_tuple as u64));
        let mut settings: Vec<Option<u8>> = vec![None];
        settings.extend((0..co_bits).map(|i| Some(((co_tuple >> (co_bits - 1 - i)) & 1) as u8)));

        // per-shot combo (μ + (−1)^k' ν) · Π co-outcomes feeds the S_N^J sum
        let k_sign = if co_tuple.count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let mut combo_sum = 0.0f64;
        let mut combo_sq = 0.0f64;
        let mut agree = 0u64;
        for record in &batch {
            let (mu, nu) = match record.outcomes[0] {
                PartyOutcome::Joint(mu, nu) => (mu, nu),
                PartyOutcome::Single(_) => unreachable!("party 1 is joint-measured"),
            };
            if mu == nu {
                agree += 1;
            }
            let product: f64 = record.outcomes[1..]
                .iter()
                .map(|o| o.single_value().expect("co-parties are binary"))
                .product();
            let combo = (mu.value() + k_sign * nu.value()) * product;
            combo_sum += combo;
            combo_sq += combo * combo;
        }
        let m = shots as f64;
        let mean = combo_sum / m;
        let var = if shots > 1 {
            ((combo_sq - m * mean * mean).max(0.0) / (m - 1.0)) / m
        } else {
            0.0
        };
        signed_sum += f64::from(sign_v(co_tuple)) * mean;
        variance += var;

        let exact_p_equal = joint_agreement_stats(&resolved.rho, joint, &grid_rest, co_tuple)?;
        agreement.insert(
            format_tuple(co_tuple, co_bits),
            report::AgreementEntry {
                empirical: agree as f64 / m,
                exact: exact_p_equal,
            },
        );
        records.extend(batch.into_iter().map(|r| r.with_settings(settings.clone())));
    }

    let exact = svetlichny_joint_value(&resolved.rho, joint, &grid_rest)?;
    let csv_path = write_csv_if_requested(&records, csv_path)?;
    Ok(report::SamplingReport {
        shots_per_tuple: shots,
        estimate: signed_sum.abs(),
        standard_error: variance.sqrt(),
        exact,
        csv_path,
        agreement: Some(agreement),
    })
}

fn write_csv_if_requested(
    records: &[ShotRecord],
    csv_path: Option<&str>,
) -> Result<Option<String>> {
    match csv_path {
        None => Ok(None),
        Some(path) => {
            let file = std::fs::File::create(path)?;
            write_csv(records, std::io::BufWriter::new(file))?;
            Ok(Some(path.to_string()))
        }
    }
}

fn cmd_audit(config_path: &str, shots: Option<u64>, seed_flag: Option<u64>) -> Result<Report> {
    let mut resolved = ExperimentConfig::load(config_path)?.resolve()?;
    if let Some(seed) = seed_flag {
        resolved.seed = seed;
        resolved.seed_was_generated = false;
    }
    let (joint, _) = resolved
        .joint
        .as_ref()
        .ok_or_else(|| Error::invalid_config("audit requires a joint measurement block"))?;
    let grid_rest = resolved.grid_rest();
    let shots = shots.or(resolved.shots);

    let no_signaling = audit_no_signaling(&resolved.rho, joint, &grid_rest, shots, resolved.seed)?;
    let mut sections = vec![("no_signaling", &no_signaling)];
    let n = resolved.grid.n_parties();
    let chain;
    if n == 3 {
        chain = audit_chain_three(&resolved.rho, joint, &grid_rest)?;
        sections.push(("chain_three", &chain));
    } else if n > 3 {
        chain = audit_chain_n(&resolved.rho, joint, &grid_rest)?;
        sections.push(("chain_n", &chain));
    }

    let mut report = Report::new("audit");
    report.seed = Some(resolved.seed);
    report.seed_was_generated = Some(resolved.seed_was_generated);
    report.warnings = resolved.warnings.clone();
    report.audit = Some(report::AuditSection::from_reports(&sections));
    report.config = Some(resolved.config);
    Ok(report)
}

fn cmd_sharpness(a: &str, a2: &str, eta1: Option<f64>, eta2: Option<f64>) -> Result<Report> {
    let mut warnings = Vec::new();
    let d1 = config::parse_direction_arg(a, &mut warnings)?;
    let d2 = config::parse_direction_arg(a2, &mut warnings)?;
    let eta1 = eta1.unwrap_or(1.0);
    let eta2 = eta2.unwrap_or(1.0);
    let s1 = Setting::new(d1, eta1)?;
    let s2 = Setting::new(d2, eta2)?;
    let margin = busch_margin(&s1, &s2);

    let mut report = Report::new("sharpness");
    report.warnings = warnings;
    report.sharpness = Some(report::SharpnessReport {
        busch_margin: margin,
        equal_sharpness_max: equal_sharpness_max(&d1, &d2),
        eta1,
        eta2,
        admissible: margin >= -1e-12,
    });
    Ok(report)
}
