//! Teaches a quantum gate to a qubit network.
//!
//! A network of pairwise-coupled qubits evolves freely under a
//! time-independent Hamiltonian `H(w) = sum_k w_k h_k` whose generator terms
//! are fixed by the network topology and coupling model, while the weights
//! `w` are trainable. This crate optimizes the weights by online stochastic
//! gradient ascent on the fidelity between the target gate's action and the
//! register's reduced dynamics, so that after unit time the network
//! implements the target unitary on a designated register subset, with any
//! remaining qubits acting as ancillas.
//!
//! Module map:
//! - [`linalg`]: dense complex linear algebra (matrix exponentials and their
//!   directional derivatives, partial trace, fidelity).
//! - [`network`]: network topology, coupling models, Hamiltonian assembly.
//! - [`sampling`]: seeded Haar-measure sampling and training pairs.
//! - [`channel`]: the register channel, its Kraus form, and exact/sampled
//!   average fidelities.
//! - [`trainer`]: analytic fidelity gradient, the stochastic ascent loop and
//!   multi-restart orchestration.
//! - [`gates`]: standard target gates.

pub mod channel;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod network;
pub mod sampling;
pub mod trainer;

pub use channel::{
    batch_fidelity, evolve_register, exact_average_fidelity, kraus_operators, pair_fidelities,
    pair_fidelity, AncillaPrep, KrausSet, RegisterChannel,
};
pub use error::{Error, Result};
pub use gates::{build_gate, GateKind, NamedGate};
pub use linalg::{
    expm_directional_derivative, expm_hamiltonian, fidelity, hermitian_eig, kron, DensityMatrix,
    HermitianOperator, PureState, SpectralDecomposition, UnitaryMatrix,
};
pub use network::{
    CouplingModel, EdgeCoupling, NetworkGenerators, PauliAxis, QubitNetwork, ValidationReport,
    WeightVector,
};
pub use sampling::{
    generate_training_pair, haar_random_state, haar_random_unitary, SeededRng, TrainingPair,
};
pub use trainer::{
    finite_difference_gradient, learning_rate, multi_restart, pair_fidelity_gradient, sgd_train,
    validation_stats, CurvePoint, MultiRestartResult, TrainConfig, TrainResult, TrainState,
    ValidationStats, WeightInit,
};
