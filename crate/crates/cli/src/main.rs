//! Batch front end: teach, evaluate, grad-check and sample.
//!
//! Exit codes encode the outcome class so shell pipelines can branch:
//! 0 success (teach: converged; grad-check: passed), 2 ran fine but the
//! outcome was negative (budget exhausted, gradient check failed), 3 config
//! error, 4 internal error.

mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use qteach::network::NetworkGenerators;
use qteach::sampling::{generate_training_pair, haar_random_state};
use qteach::trainer::{
    finite_difference_gradient, multi_restart, pair_fidelity_gradient, validation_stats,
    STREAM_GRAD_CHECK,
};
use qteach::{HermitianOperator, SeededRng, WeightVector};

use config::{load_config, resolve};
use report::{write_atomic, write_curve, write_report, RestartSummary, RunReport};

const EXIT_NEGATIVE_OUTCOME: u8 = 2;
const EXIT_CONFIG_ERROR: u8 = 3;
const EXIT_INTERNAL_ERROR: u8 = 4;

/// Deviation above which a gradient component fails the check.
const GRAD_CHECK_TOL: f64 = 1e-6;
const GRAD_CHECK_INSTANCES: usize = 5;
const GRAD_CHECK_FD_STEP: f64 = 1e-5;

#[derive(Parser)]
#[command(name = "qteach", version, about = "Teach a target gate to a qubit network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the coupling weights and write report.json plus curve.csv.
    Teach {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides [output].dir (default ".").
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the restart count in the config file.
        #[arg(long)]
        restarts: Option<u32>,
    },
    /// Score stored weights: exact average fidelity and validation stats.
    Evaluate {
        #[arg(long)]
        config: PathBuf,
        /// JSON weights file: a bare array or a teach report.
        #[arg(long)]
        weights: PathBuf,
    },
    /// Compare the analytic gradient against central finite differences.
    GradCheck {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Test hook: perturb one generator on the analytic side only, to
        /// demonstrate that the check catches discrepancies.
        #[arg(long, hide = true)]
        corrupt_direction: bool,
    },
    /// Write Haar-random pure states as CSV rows of amplitudes.
    Sample {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Output file (default samples.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Config(anyhow::Error),
    Internal(anyhow::Error),
}

type CmdResult = Result<u8, Failure>;

trait Classify<T> {
    fn or_config(self) -> Result<T, Failure>;
    fn or_internal(self) -> Result<T, Failure>;
}

impl<T> Classify<T> for anyhow::Result<T> {
    fn or_config(self) -> Result<T, Failure> {
        self.map_err(Failure::Config)
    }

    fn or_internal(self) -> Result<T, Failure> {
        self.map_err(Failure::Internal)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(err)) => {
            eprintln!("config error: {err:#}");
            ExitCode::from(EXIT_CONFIG_ERROR)
        }
        Err(Failure::Internal(err)) => {
            eprintln!("internal error: {err:#}");
            ExitCode::from(EXIT_INTERNAL_ERROR)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Teach {
            config,
            seed,
            out,
            restarts,
        } => cmd_teach(&config, seed, out, restarts),
        Command::Evaluate { config, weights } => cmd_evaluate(&config, &weights),
        Command::GradCheck {
            config,
            seed,
            corrupt_direction,
        } => cmd_grad_check(&config, seed, corrupt_direction),
        Command::Sample {
            qubits,
            count,
            seed,
            out,
        } => cmd_sample(qubits, count, seed, out),
    }
}

fn cmd_teach(
    config_path: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    restarts: Option<u32>,
) -> CmdResult {
    let mut config = load_config(config_path).or_config()?;
    if let Some(seed) = seed {
        config.train.seed = seed;
    }
    if let Some(restarts) = restarts {
        config.train.restarts = restarts;
    }
    if let Some(out) = out {
        config.output.dir = Some(out);
    }
    let resolved = resolve(config).or_config()?;

    let started = Instant::now();
    let outcome = multi_restart(
        &resolved.generators,
        &resolved.target,
        &resolved.ancilla,
        &resolved.train,
    )
    .map_err(|e| anyhow!(e))
    .or_internal()?;
    let validation = validation_stats(
        &resolved.generators,
        &outcome.best.weights,
        &resolved.target,
        &resolved.ancilla,
        resolved.config.validation_set_size,
        resolved.train.seed,
    )
    .map_err(|e| anyhow!(e))
    .or_internal()?;

    let report = RunReport {
        schema_version: config::SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        resolved_seed: resolved.train.seed,
        restarts: outcome.restarts.iter().map(RestartSummary::from).collect(),
        result: outcome.best.clone(),
        validation,
        config: resolved.config.clone(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };

    let dir = resolved
        .config
        .output
        .dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    let report_path = dir.join("report.json");
    let curve_path = dir.join("curve.csv");
    write_report(&report_path, &report).or_internal()?;
    write_curve(&curve_path, &outcome.best.learning_curve).or_internal()?;

    println!(
        "teach: {} after {} outer steps (restart {}), error {:.3e}, validation mean {:.6}",
        if outcome.best.converged {
            "converged"
        } else {
            "budget exhausted"
        },
        outcome.best.steps_used,
        outcome.best.restart_index,
        outcome.best.error,
        validation.mean_fidelity,
    );
    println!("report: {}", report_path.display());
    println!("curve:  {}", curve_path.display());

    Ok(if outcome.best.converged {
        0
    } else {
        EXIT_NEGATIVE_OUTCOME
    })
}

/// Accepts either a bare JSON array of weights or a full teach report.
fn load_weights(path: &Path) -> anyhow::Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read weights file {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse weights file {}", path.display()))?;
    let array = value
        .as_array()
        .or_else(|| value.pointer("/result/weights").and_then(|v| v.as_array()))
        .ok_or_else(|| anyhow!("weights file must be a JSON array or a teach report"))?;
    array
        .iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| anyhow!("weights must be numbers, got {v}"))
        })
        .collect()
}

fn cmd_evaluate(config_path: &Path, weights_path: &Path) -> CmdResult {
    let config = load_config(config_path).or_config()?;
    let resolved = resolve(config).or_config()?;
    let weights = load_weights(weights_path).or_config()?;
    if weights.len() != resolved.generators.count() {
        return Err(Failure::Config(anyhow!(
            "weights file has {} entries but the network has {} generators",
            weights.len(),
            resolved.generators.count()
        )));
    }
    let weights = WeightVector::new(weights).map_err(|e| anyhow!(e)).or_config()?;

    let exact = qteach::exact_average_fidelity(
        &resolved.generators,
        &weights,
        &resolved.target,
        &resolved.ancilla,
    )
    .map_err(|e| anyhow!(e))
    .or_internal()?;
    let validation = validation_stats(
        &resolved.generators,
        &weights,
        &resolved.target,
        &resolved.ancilla,
        resolved.config.validation_set_size,
        resolved.train.seed,
    )
    .map_err(|e| anyhow!(e))
    .or_internal()?;

    let summary = serde_json::json!({
        "exact_average_fidelity": exact,
        "error": 1.0 - exact,
        "validation": validation,
    });
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    Ok(0)
}

/// Clone of the generator set with one term perturbed; Hermitian, so the
/// corruption survives construction and only the gradient values drift.
fn corrupt_generators(gens: &NetworkGenerators) -> anyhow::Result<NetworkGenerators> {
    let mut terms: Vec<HermitianOperator> = gens.terms().to_vec();
    let first = terms
        .first()
        .ok_or_else(|| anyhow!("network has no generators to corrupt"))?;
    let mut matrix = first.matrix().clone();
    matrix[(0, 0)] += qteach::linalg::C64::new(0.1, 0.0);
    terms[0] = HermitianOperator::new(matrix)?;
    Ok(NetworkGenerators::with_terms(gens.network().clone(), terms)?)
}

fn cmd_grad_check(config_path: &Path, seed: Option<u64>, corrupt: bool) -> CmdResult {
    let mut config = load_config(config_path).or_config()?;
    if let Some(seed) = seed {
        config.train.seed = seed;
    }
    let resolved = resolve(config).or_config()?;
    let gens = &resolved.generators;
    let analytic_gens = if corrupt {
        corrupt_generators(gens).or_internal()?
    } else {
        gens.clone()
    };

    let mut rng = SeededRng::with_stream(resolved.train.seed, STREAM_GRAD_CHECK);
    let count = gens.count();
    let register_qubits = resolved.network.register_size();
    let mut max_deviation = vec![0.0f64; count];
    for _ in 0..GRAD_CHECK_INSTANCES {
        let weights = WeightVector::new(
            (0..count)
                .map(|_| rng.uniform(-std::f64::consts::PI, std::f64::consts::PI))
                .collect(),
        )
        .map_err(|e| anyhow!(e))
        .or_internal()?;
        let pair = generate_training_pair(&resolved.target, register_qubits, &mut rng)
            .map_err(|e| anyhow!(e))
            .or_internal()?;
        let analytic = pair_fidelity_gradient(&analytic_gens, &weights, &pair, &resolved.ancilla)
            .map_err(|e| anyhow!(e))
            .or_internal()?;
        let fd = finite_difference_gradient(
            gens,
            &weights,
            &pair,
            &resolved.ancilla,
            GRAD_CHECK_FD_STEP,
        )
        .map_err(|e| anyhow!(e))
        .or_internal()?;
        for k in 0..count {
            max_deviation[k] = max_deviation[k].max((analytic[k] - fd[k]).abs());
        }
    }

    println!("component  max_deviation  status");
    let mut all_pass = true;
    for (k, dev) in max_deviation.iter().enumerate() {
        let pass = *dev <= GRAD_CHECK_TOL;
        all_pass &= pass;
        println!(
            "{k:9}  {dev:13.3e}  {}",
            if pass { "pass" } else { "FAIL" }
        );
    }
    let overall = max_deviation.iter().copied().fold(0.0, f64::max);
    println!(
        "gradient check {} (max deviation {overall:.3e}, tolerance {GRAD_CHECK_TOL:.0e})",
        if all_pass { "passed" } else { "FAILED" }
    );
    Ok(if all_pass { 0 } else { EXIT_NEGATIVE_OUTCOME })
}

fn cmd_sample(qubits: usize, count: usize, seed: u64, out: Option<PathBuf>) -> CmdResult {
    if count == 0 {
        return Err(Failure::Config(anyhow!("count must be at least 1")));
    }
    if qubits == 0 {
        return Err(Failure::Config(anyhow!("qubits must be at least 1")));
    }
    let mut rng = SeededRng::new(seed);
    let dim = 1usize << qubits;
    let mut csv = String::new();
    for k in 0..dim {
        if k > 0 {
            csv.push(',');
        }
        csv.push_str(&format!("a{k}_re,a{k}_im"));
    }
    csv.push('\n');
    for _ in 0..count {
        let state = haar_random_state(qubits, &mut rng)
            .map_err(|e| anyhow!(e))
            .or_internal()?;
        let amplitudes = state.amplitudes();
        for k in 0..dim {
            if k > 0 {
                csv.push(',');
            }
            csv.push_str(&format!("{},{}", amplitudes[k].re, amplitudes[k].im));
        }
        csv.push('\n');
    }
    let path = out.unwrap_or_else(|| PathBuf::from("samples.csv"));
    write_atomic(&path, csv.as_bytes()).or_internal()?;
    println!("wrote {count} states to {}", path.display());
    Ok(0)
}
