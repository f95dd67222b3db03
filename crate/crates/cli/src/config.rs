//! Experiment configuration: a single TOML file describing the network, the
//! target gate, the ancilla preparation and the training run.
//!
//! Top-level scalars (`schema_version`, `validation_set_size`) must appear
//! before the first table header. Complex numbers are `[re, im]` pairs.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};

use qteach::linalg::{C64, CMatrix};
use qteach::network::{CouplingModel, EdgeCoupling, PauliAxis, QubitNetwork};
use qteach::trainer::{TrainConfig, WeightInit};
use qteach::{AncillaPrep, NamedGate, NetworkGenerators, UnitaryMatrix};

pub const SCHEMA_VERSION: u32 = 1;

fn default_validation_size() -> usize {
    200
}

fn default_decay() -> f64 {
    0.5
}

fn default_inner_steps() -> u32 {
    1
}

fn default_target_error() -> f64 {
    1e-3
}

fn default_restarts() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default = "default_validation_size")]
    pub validation_set_size: usize,
    pub network: NetworkSection,
    pub target: TargetSection,
    #[serde(default)]
    pub ancilla: AncillaSection,
    pub train: TrainSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub num_qubits: usize,
    pub register: Vec<usize>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    /// One of `ising_zz`, `exchange_xy`, `heisenberg`, `custom`.
    pub model: String,
    /// `(site, axis)` pairs, e.g. `[[0, "Z"], [1, "Z"]]`.
    #[serde(default)]
    pub local_fields: Vec<(usize, String)>,
    /// Restricts the allowed field axes; defaults to X, Y and Z.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_axes: Option<Vec<String>>,
    /// Pauli pairs for `model = "custom"`, e.g. `[["X", "X"], ["Z", "Z"]]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_pauli: Option<Vec<[String; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    /// Named gate; mutually exclusive with `matrix`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    /// Qubit count for width-generic gates (QFT).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
    /// Explicit row-major unitary as `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AncillaSection {
    /// `"zeros"` or a bitstring with one bit per ancilla qubit.
    pub state: String,
}

impl Default for AncillaSection {
    fn default() -> Self {
        Self {
            state: "zeros".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    pub kappa0: f64,
    #[serde(default = "default_decay")]
    pub decay_exponent: f64,
    #[serde(default = "default_inner_steps")]
    pub inner_steps: u32,
    pub max_outer_steps: u64,
    #[serde(default = "default_target_error")]
    pub target_error: f64,
    #[serde(default = "default_restarts")]
    pub restarts: u32,
    pub seed: u64,
    /// Uniform init half-width; defaults to pi.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_amplitude: Option<f64>,
    /// Explicit starting weights; overrides `init_amplitude`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_bounds: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// Everything a command needs, resolved from a validated config.
pub struct ResolvedExperiment {
    /// The config as run, with CLI overrides folded in; echoed into reports.
    pub config: ExperimentConfig,
    pub network: QubitNetwork,
    pub generators: NetworkGenerators,
    pub target: UnitaryMatrix,
    pub ancilla: AncillaPrep,
    pub train: TrainConfig,
}

pub fn load_config(path: &Path) -> anyhow::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let config: ExperimentConfig = toml::from_str(&text)
        .with_context(|| format!("cannot parse config file {}", path.display()))?;
    if config.schema_version != SCHEMA_VERSION {
        bail!(
            "config schema_version {} is not the supported version {SCHEMA_VERSION}",
            config.schema_version
        );
    }
    Ok(config)
}

fn parse_axis(name: &str) -> anyhow::Result<PauliAxis> {
    match name.to_ascii_uppercase().as_str() {
        "X" => Ok(PauliAxis::X),
        "Y" => Ok(PauliAxis::Y),
        "Z" => Ok(PauliAxis::Z),
        other => bail!("unknown Pauli axis '{other}' (expected X, Y or Z)"),
    }
}

fn resolve_network(section: &NetworkSection) -> anyhow::Result<QubitNetwork> {
    let edge_coupling = match section.model.to_ascii_lowercase().as_str() {
        "ising_zz" => EdgeCoupling::IsingZZ,
        "exchange_xy" => EdgeCoupling::ExchangeXY,
        "heisenberg" => EdgeCoupling::Heisenberg,
        "custom" => {
            let pairs = section
                .custom_pauli
                .as_ref()
                .ok_or_else(|| anyhow!("network.custom_pauli is required for model = \"custom\""))?;
            let mut parsed = Vec::with_capacity(pairs.len());
            for [a, b] in pairs {
                parsed.push((parse_axis(a)?, parse_axis(b)?));
            }
            EdgeCoupling::CustomPauli(parsed)
        }
        other => bail!(
            "unknown network.model '{other}' (expected ising_zz, exchange_xy, heisenberg or custom)"
        ),
    };
    let mut model = CouplingModel::new(edge_coupling);
    if let Some(axes) = &section.field_axes {
        let parsed: anyhow::Result<Vec<PauliAxis>> = axes.iter().map(|a| parse_axis(a)).collect();
        model = model.with_field_axes(parsed?);
    }
    let field_sites = section
        .local_fields
        .iter()
        .map(|(site, axis)| Ok((*site, parse_axis(axis)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(QubitNetwork {
        num_qubits: section.num_qubits,
        register: section.register.clone(),
        edges: section.edges.iter().map(|&[a, b]| (a, b)).collect(),
        field_sites,
        model,
    })
}

fn resolve_target(section: &TargetSection, register_qubits: usize) -> anyhow::Result<UnitaryMatrix> {
    match (&section.gate, &section.matrix) {
        (Some(_), Some(_)) => bail!("target.gate and target.matrix are mutually exclusive"),
        (None, None) => bail!("target needs either a gate name or an explicit matrix"),
        (Some(name), None) => {
            let gate = NamedGate::parse(name, section.qubits.or(Some(register_qubits)))
                .context("invalid target.gate")?;
            if gate.num_qubits() != register_qubits {
                bail!(
                    "target gate {} acts on {} qubits but the register has {}",
                    gate.kind().name(),
                    gate.num_qubits(),
                    register_qubits
                );
            }
            Ok(gate.build())
        }
        (None, Some(rows)) => {
            let dim = 1usize << register_qubits;
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                bail!(
                    "target.matrix must be {dim} x {dim} for a {register_qubits}-qubit register"
                );
            }
            let matrix = CMatrix::from_fn(dim, dim, |i, j| {
                C64::new(rows[i][j][0], rows[i][j][1])
            });
            UnitaryMatrix::new(matrix).context("target.matrix failed the unitarity check")
        }
    }
}

fn resolve_ancilla(section: &AncillaSection, num_ancillas: usize) -> anyhow::Result<AncillaPrep> {
    if section.state.eq_ignore_ascii_case("zeros") {
        return Ok(AncillaPrep::zeros(num_ancillas));
    }
    if section.state.len() != num_ancillas
        || !section.state.chars().all(|c| c == '0' || c == '1')
    {
        bail!(
            "ancilla.state must be \"zeros\" or a bitstring of length {num_ancillas}, got '{}'",
            section.state
        );
    }
    let index = section
        .state
        .chars()
        .fold(0usize, |acc, c| (acc << 1) | usize::from(c == '1'));
    AncillaPrep::basis(num_ancillas, index).map_err(|e| anyhow!(e))
}

fn resolve_train(section: &TrainSection) -> anyhow::Result<TrainConfig> {
    let weight_init = match (&section.initial_weights, section.init_amplitude) {
        (Some(values), _) => WeightInit::Given(values.clone()),
        (None, Some(amplitude)) => WeightInit::Uniform { amplitude },
        (None, None) => WeightInit::default(),
    };
    Ok(TrainConfig {
        kappa0: section.kappa0,
        decay_exponent: section.decay_exponent,
        inner_steps: section.inner_steps,
        max_outer_steps: section.max_outer_steps,
        target_error: section.target_error,
        weight_init,
        restarts: section.restarts,
        box_bounds: section
            .box_bounds
            .as_ref()
            .map(|b| b.iter().map(|&[lo, hi]| (lo, hi)).collect()),
        seed: section.seed,
    })
}

/// Validates the config and builds every derived object, reporting the first
/// problem with its field path.
pub fn resolve(config: ExperimentConfig) -> anyhow::Result<ResolvedExperiment> {
    if config.validation_set_size == 0 {
        bail!("validation_set_size must be at least 1");
    }
    let network = resolve_network(&config.network).context("in [network]")?;
    let report = network.validate();
    if !report.is_valid() {
        bail!("in [network]: invalid network:\n{report}");
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    let generators = network.generators().map_err(|e| anyhow!(e))?;
    let target =
        resolve_target(&config.target, network.register_size()).context("in [target]")?;
    let ancilla = resolve_ancilla(&config.ancilla, network.num_ancillas()).context("in [ancilla]")?;
    let train = resolve_train(&config.train).context("in [train]")?;
    train
        .validate(generators.count())
        .map_err(|e| anyhow!(e))
        .context("in [train]")?;
    Ok(ResolvedExperiment {
        config,
        network,
        generators,
        target,
        ancilla,
        train,
    })
}
