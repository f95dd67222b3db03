//! The register channel: evolve the full network for unit time, trace out
//! the ancillas, and score the register against the target gate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    self, clamp_unit_interval, compensated_sum, expm_hamiltonian, C64, CMatrix, CVector,
    DensityMatrix, PureState, UnitaryMatrix,
};
use crate::network::{NetworkGenerators, WeightVector};
use crate::sampling::TrainingPair;

/// Fixed evolution time; rescaling time is the same as rescaling weights.
pub const EVOLUTION_TIME: f64 = 1.0;

/// Fixed preparation of the ancilla qubits. Zero ancillas (a one-dimensional
/// state) is valid and makes the channel unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaPrep {
    state: PureState,
}

impl AncillaPrep {
    pub fn new(state: PureState) -> Self {
        Self { state }
    }

    /// All ancillas in `|0...0>`, the default preparation.
    pub fn zeros(num_qubits: usize) -> Self {
        Self {
            state: PureState::basis(num_qubits, 0).expect("index 0 is always in range"),
        }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        Ok(Self {
            state: PureState::basis(num_qubits, index)?,
        })
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn num_qubits(&self) -> usize {
        self.state.num_qubits()
    }
}

/// Kraus operators with verified completeness `sum_a K_a^H K_a = I`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let dim = match operators.first() {
            Some(k) => k.nrows(),
            None => return Err(Error::EmptyBatch),
        };
        let mut completeness = CMatrix::zeros(dim, dim);
        for k in &operators {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator",
                    expected: dim,
                    got: k.nrows().max(k.ncols()),
                });
            }
            completeness += k.adjoint() * k;
        }
        let deviation = (completeness - CMatrix::identity(dim, dim)).norm();
        if deviation > linalg::UNITARY_TOL {
            return Err(Error::KrausIncomplete { deviation });
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    /// Applies the channel to a pure input: `sum_a K_a |psi><psi| K_a^H`.
    pub fn apply_to_pure(&self, input: &PureState) -> Result<DensityMatrix> {
        if input.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "Kraus application",
                expected: self.dim(),
                got: input.dim(),
            });
        }
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for k in &self.operators {
            let v = k * input.amplitudes();
            out += &v * v.adjoint();
        }
        DensityMatrix::new(out)
    }
}

/// Index arithmetic placing register and ancilla qubits at their network
/// positions: register qubit `k` sits at network qubit `register[k]`,
/// ancilla qubit `p` at the `p`-th non-register network qubit.
#[derive(Debug, Clone)]
pub(crate) struct RegisterEmbedding {
    register_offsets: Vec<usize>,
    ancilla_offsets: Vec<usize>,
}

impl RegisterEmbedding {
    pub(crate) fn new(gens: &NetworkGenerators) -> Self {
        let net = gens.network();
        Self {
            register_offsets: linalg_basis_offsets(net.num_qubits, &net.register),
            ancilla_offsets: linalg_basis_offsets(net.num_qubits, &net.ancillas()),
        }
    }

    pub(crate) fn register_dim(&self) -> usize {
        self.register_offsets.len()
    }

    pub(crate) fn ancilla_dim(&self) -> usize {
        self.ancilla_offsets.len()
    }

    pub(crate) fn full_index(&self, reg: usize, anc: usize) -> usize {
        self.register_offsets[reg] | self.ancilla_offsets[anc]
    }

    /// `|input> (x) |alpha>` with each factor routed to its network qubits.
    pub(crate) fn prepare(&self, input: &PureState, ancilla: &PureState) -> CVector {
        let mut eta = CVector::zeros(self.register_dim() * self.ancilla_dim());
        for r in 0..self.register_dim() {
            for a in 0..self.ancilla_dim() {
                eta[self.full_index(r, a)] = input.amplitudes()[r] * ancilla.amplitudes()[a];
            }
        }
        eta
    }
}

fn linalg_basis_offsets(num_qubits: usize, positions: &[usize]) -> Vec<usize> {
    crate::linalg::basis_offsets(num_qubits, positions)
}

/// The channel `E_w` for one fixed `(network, weights, ancilla)` triple.
///
/// Construction performs the one eigendecomposition and exponential that all
/// per-input evaluations share.
#[derive(Debug, Clone)]
pub struct RegisterChannel {
    unitary: UnitaryMatrix,
    embedding: RegisterEmbedding,
    ancilla: AncillaPrep,
    register: Vec<usize>,
}

impl RegisterChannel {
    pub fn new(gens: &NetworkGenerators, weights: &WeightVector, ancilla: &AncillaPrep) -> Result<Self> {
        let net = gens.network();
        if ancilla.num_qubits() != net.num_ancillas() {
            return Err(Error::DimensionMismatch {
                context: "ancilla preparation",
                expected: net.num_ancillas(),
                got: ancilla.num_qubits(),
            });
        }
        let hamiltonian = gens.hamiltonian(weights)?;
        let unitary = expm_hamiltonian(&hamiltonian, EVOLUTION_TIME);
        Ok(Self {
            unitary,
            embedding: RegisterEmbedding::new(gens),
            ancilla: ancilla.clone(),
            register: net.register.clone(),
        })
    }

    pub fn register_dim(&self) -> usize {
        self.embedding.register_dim()
    }

    /// The full-network evolution operator `e^{-i H(w)}`.
    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.unitary
    }

    /// Steps (i)-(iv): embed `input (x) alpha`, evolve for unit time, trace
    /// out the ancillas.
    pub fn evolve_register(&self, input: &PureState) -> Result<DensityMatrix> {
        if input.dim() != self.register_dim() {
            return Err(Error::DimensionMismatch {
                context: "register input",
                expected: self.register_dim(),
                got: input.dim(),
            });
        }
        let eta_0 = self.embedding.prepare(input, self.ancilla.state());
        let eta_t = PureState::new(self.unitary.matrix() * eta_0)?;
        eta_t.partial_trace(&self.register)
    }

    /// `K_a = (I (x) <a|) e^{-iH(w)} (I (x) |alpha>)` over the ancilla
    /// computational basis.
    pub fn kraus_operators(&self) -> Result<KrausSet> {
        let d_reg = self.register_dim();
        let d_anc = self.embedding.ancilla_dim();
        let alpha = self.ancilla.state().amplitudes();
        let u = self.unitary.matrix();
        let mut operators = Vec::with_capacity(d_anc);
        for a in 0..d_anc {
            let mut k = CMatrix::zeros(d_reg, d_reg);
            for row in 0..d_reg {
                for col in 0..d_reg {
                    let mut acc = C64::new(0.0, 0.0);
                    for ap in 0..d_anc {
                        acc += u[(self.embedding.full_index(row, a), self.embedding.full_index(col, ap))]
                            * alpha[ap];
                    }
                    k[(row, col)] = acc;
                }
            }
            operators.push(k);
        }
        KrausSet::new(operators)
    }

    /// Fidelity between the pair's expected output and the channel's actual
    /// output for its input.
    pub fn pair_fidelity(&self, pair: &TrainingPair) -> Result<f64> {
        let out = self.evolve_register(&pair.input)?;
        linalg::fidelity(&pair.target_output, &out)
    }

    /// Haar-average fidelity against `target` through the entanglement
    /// fidelity: `F_avg = (d F_e + 1) / (d + 1)` with
    /// `F_e = sum_a |tr(target^H K_a)|^2 / d^2`.
    pub fn exact_average_fidelity(&self, target: &UnitaryMatrix) -> Result<f64> {
        let d = self.register_dim();
        if target.dim() != d {
            return Err(Error::DimensionMismatch {
                context: "target gate",
                expected: d,
                got: target.dim(),
            });
        }
        let kraus = self.kraus_operators()?;
        let mut entanglement = 0.0;
        for k in kraus.operators() {
            let overlap = (target.matrix().adjoint() * k).trace();
            entanglement += overlap.norm_sqr();
        }
        entanglement /= (d * d) as f64;
        clamp_unit_interval((d as f64 * entanglement + 1.0) / (d as f64 + 1.0))
    }
}

/// One-shot form of [`RegisterChannel::evolve_register`].
pub fn evolve_register(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    input: &PureState,
    ancilla: &AncillaPrep,
) -> Result<DensityMatrix> {
    RegisterChannel::new(gens, weights, ancilla)?.evolve_register(input)
}

/// One-shot form of [`RegisterChannel::kraus_operators`].
pub fn kraus_operators(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    ancilla: &AncillaPrep,
) -> Result<KrausSet> {
    RegisterChannel::new(gens, weights, ancilla)?.kraus_operators()
}

/// One-shot form of [`RegisterChannel::pair_fidelity`].
pub fn pair_fidelity(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    pair: &TrainingPair,
    ancilla: &AncillaPrep,
) -> Result<f64> {
    RegisterChannel::new(gens, weights, ancilla)?.pair_fidelity(pair)
}

/// Per-pair fidelities, evaluated in parallel but returned in input order.
pub fn pair_fidelities(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    pairs: &[TrainingPair],
    ancilla: &AncillaPrep,
) -> Result<Vec<f64>> {
    if pairs.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let channel = RegisterChannel::new(gens, weights, ancilla)?;
    pairs
        .par_iter()
        .map(|pair| channel.pair_fidelity(pair))
        .collect()
}

/// Arithmetic mean of the pair fidelities; the compensated reduction makes
/// the result independent of evaluation order.
pub fn batch_fidelity(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    pairs: &[TrainingPair],
    ancilla: &AncillaPrep,
) -> Result<f64> {
    let fidelities = pair_fidelities(gens, weights, pairs, ancilla)?;
    Ok(compensated_sum(&fidelities) / fidelities.len() as f64)
}

/// One-shot form of [`RegisterChannel::exact_average_fidelity`].
pub fn exact_average_fidelity(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    target: &UnitaryMatrix,
    ancilla: &AncillaPrep,
) -> Result<f64> {
    RegisterChannel::new(gens, weights, ancilla)?.exact_average_fidelity(target)
}
