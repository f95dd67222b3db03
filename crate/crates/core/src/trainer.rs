//! Online stochastic gradient ascent on the pair fidelity.
//!
//! Each outer step draws one fresh Haar-random training pair, applies `L`
//! ascent updates `w <- w + kappa * grad` with the analytic gradient, then
//! decays the learning rate as `kappa_0 * s^(-eta)`. Convergence is judged
//! on the exact average fidelity at fixed checkpoints, never on the noisy
//! per-pair estimate, and the best checkpointed weights are returned.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{AncillaPrep, RegisterChannel, RegisterEmbedding};
use crate::error::{Error, Result};
use crate::linalg::{
    compensated_sum, divided_difference_matrix, hermitian_eig, C64, CMatrix, CVector,
    UnitaryMatrix,
};
use crate::network::{NetworkGenerators, WeightVector};
use crate::sampling::{generate_training_pair, SeededRng, TrainingPair};

/// Exact average fidelity is evaluated every this many outer steps.
pub const CHECKPOINT_INTERVAL: u64 = 50;

/// RNG stream for the held-out validation set.
pub const STREAM_VALIDATION: u64 = 1;
/// RNG stream for gradient-check instances.
pub const STREAM_GRAD_CHECK: u64 = 2;
/// Restart `r` draws from stream `STREAM_RESTART_BASE + r`.
pub const STREAM_RESTART_BASE: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WeightInit {
    /// Independent uniform draws from `(-amplitude, amplitude)`.
    Uniform { amplitude: f64 },
    /// Explicit starting point.
    Given(Vec<f64>),
}

impl Default for WeightInit {
    fn default() -> Self {
        // one period of e^{-iH} along each commuting weight direction
        WeightInit::Uniform {
            amplitude: std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Initial learning rate, `kappa(1)`.
    pub kappa0: f64,
    /// `kappa(s) = kappa0 * s^(-decay_exponent)`.
    pub decay_exponent: f64,
    /// Ascent updates per sampled state (the algorithm's `L`).
    pub inner_steps: u32,
    /// Outer-step budget; exhaustion is not an error.
    pub max_outer_steps: u64,
    /// Convergence threshold on `1 - exact_average_fidelity`.
    pub target_error: f64,
    pub weight_init: WeightInit,
    pub restarts: u32,
    /// Optional per-weight `[lo, hi]` projection after every update.
    pub box_bounds: Option<Vec<(f64, f64)>>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            kappa0: 0.5,
            decay_exponent: 0.5,
            inner_steps: 1,
            max_outer_steps: 100_000,
            target_error: 1e-3,
            weight_init: WeightInit::default(),
            restarts: 1,
            box_bounds: None,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self, weight_count: usize) -> Result<()> {
        if !(self.kappa0 > 0.0 && self.kappa0.is_finite()) {
            return Err(Error::InvalidConfig("kappa0 must be positive".into()));
        }
        if !(self.decay_exponent >= 0.0 && self.decay_exponent.is_finite()) {
            return Err(Error::InvalidConfig(
                "decay_exponent must be nonnegative".into(),
            ));
        }
        if self.inner_steps < 1 {
            return Err(Error::InvalidConfig("inner_steps must be at least 1".into()));
        }
        if !(self.target_error > 0.0 && self.target_error < 1.0) {
            return Err(Error::InvalidConfig(
                "target_error must lie strictly between 0 and 1".into(),
            ));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if let WeightInit::Given(values) = &self.weight_init {
            if values.len() != weight_count {
                return Err(Error::WeightCountMismatch {
                    expected: weight_count,
                    got: values.len(),
                });
            }
            WeightVector::new(values.clone())?;
        }
        if let Some(bounds) = &self.box_bounds {
            if bounds.len() != weight_count {
                return Err(Error::WeightCountMismatch {
                    expected: weight_count,
                    got: bounds.len(),
                });
            }
            for &(lo, hi) in bounds {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::InvalidConfig(format!(
                        "box bound [{lo}, {hi}] is not a valid interval"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One checkpoint of the learning curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub step: u64,
    pub exact_fidelity: f64,
    pub learning_rate: f64,
}

/// Mutable state of a single training run.
#[derive(Debug, Clone)]
pub struct TrainState {
    /// Outer-step counter `s`; the learning rate at step `s >= 1` equals
    /// `kappa0 * s^(-decay_exponent)`.
    pub step: u64,
    pub weights: Vec<f64>,
    pub learning_rate: f64,
    pub best_weights: Vec<f64>,
    pub best_fidelity: f64,
    pub curve: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub weights: WeightVector,
    pub exact_fidelity: f64,
    /// `1 - exact_fidelity`.
    pub error: f64,
    /// Whether `error < target_error` was reached within budget.
    pub converged: bool,
    /// Outer steps executed (sampled states).
    pub steps_used: u64,
    /// Total weight updates; equals `inner_steps * steps_used`.
    pub weight_updates: u64,
    pub learning_curve: Vec<CurvePoint>,
    pub seed: u64,
    pub restart_index: u32,
}

/// `kappa(s) = kappa0 * s^(-decay_exponent)` for `s >= 1`.
pub fn learning_rate(config: &TrainConfig, step: u64) -> Result<f64> {
    if step == 0 {
        return Err(Error::ZeroStep);
    }
    Ok(config.kappa0 * (step as f64).powf(-config.decay_exponent))
}

/// Shared buffers for repeated analytic gradient evaluations.
pub(crate) struct GradientWorkspace<'a> {
    gens: &'a NetworkGenerators,
    embedding: RegisterEmbedding,
}

impl<'a> GradientWorkspace<'a> {
    pub(crate) fn new(gens: &'a NetworkGenerators) -> Self {
        Self {
            gens,
            embedding: RegisterEmbedding::new(gens),
        }
    }

    /// Analytic gradient of the single-pair fidelity.
    ///
    /// With `T = target * input`, `eta_0 = input (x) alpha` and
    /// `eta_t = e^{-iH(w)} eta_0`, component `k` is
    /// `2 Re sum_a <T,a|eta_t>^* <T,a| (d_k e^{-iH(w)}) |eta_0>`,
    /// where `d_k` is the spectral divided-difference derivative along
    /// generator `h_k`. Rearranged so the eigendecomposition is done once:
    /// the whole sum collapses to `2 Re tr(B h_k)` for a single matrix `B`.
    pub(crate) fn gradient(
        &self,
        weights: &WeightVector,
        pair: &TrainingPair,
        ancilla: &AncillaPrep,
    ) -> Result<Vec<f64>> {
        let net = self.gens.network();
        if pair.input.dim() != 1usize << net.register_size() {
            return Err(Error::DimensionMismatch {
                context: "gradient pair",
                expected: 1usize << net.register_size(),
                got: pair.input.dim(),
            });
        }
        if ancilla.num_qubits() != net.num_ancillas() {
            return Err(Error::DimensionMismatch {
                context: "gradient ancilla",
                expected: net.num_ancillas(),
                got: ancilla.num_qubits(),
            });
        }
        let hamiltonian = self.gens.hamiltonian(weights)?;
        let eig = hermitian_eig(&hamiltonian);
        let v = eig.eigenvectors();
        let dim = self.gens.dim();

        let eta_0 = self.embedding.prepare(&pair.input, ancilla.state());
        let y = v.adjoint() * &eta_0;
        let phases = CVector::from_iterator(
            dim,
            eig.eigenvalues().iter().map(|&l| (-C64::i() * l).exp()),
        );
        let eta_t = v * y.component_mul(&phases);

        // chi = sum_a <T,a|eta_t> |T,a>
        let t_amp = pair.target_output.amplitudes();
        let d_reg = self.embedding.register_dim();
        let d_anc = self.embedding.ancilla_dim();
        let mut chi = CVector::zeros(dim);
        for a in 0..d_anc {
            let mut coeff = C64::new(0.0, 0.0);
            for r in 0..d_reg {
                coeff += t_amp[r].conj() * eta_t[self.embedding.full_index(r, a)];
            }
            for r in 0..d_reg {
                chi[self.embedding.full_index(r, a)] += coeff * t_amp[r];
            }
        }

        // grad_k = 2 Re <chi| V (Gamma . V^H h_k V) V^H |eta_0>
        //        = 2 Re tr(B h_k),  B = V A^T V^H,  A_mn = conj(x_m) Gamma_mn y_n
        let x = v.adjoint() * chi;
        let gamma = divided_difference_matrix(eig.eigenvalues(), crate::channel::EVOLUTION_TIME);
        let a_mat = CMatrix::from_fn(dim, dim, |m, n| x[m].conj() * gamma[(m, n)] * y[n]);
        let b = v * a_mat.transpose() * v.adjoint();

        let gradient = self
            .gens
            .terms()
            .iter()
            .map(|term| {
                let h_k = term.matrix();
                let mut trace = C64::new(0.0, 0.0);
                for i in 0..dim {
                    for j in 0..dim {
                        trace += b[(i, j)] * h_k[(j, i)];
                    }
                }
                2.0 * trace.re
            })
            .collect();
        Ok(gradient)
    }
}

/// Analytic gradient of the single-pair fidelity with respect to the
/// weights; one eigendecomposition per call.
pub fn pair_fidelity_gradient(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    pair: &TrainingPair,
    ancilla: &AncillaPrep,
) -> Result<Vec<f64>> {
    GradientWorkspace::new(gens).gradient(weights, pair, ancilla)
}

/// Central finite differences of the pair fidelity; the oracle the analytic
/// gradient is checked against.
pub fn finite_difference_gradient(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    pair: &TrainingPair,
    ancilla: &AncillaPrep,
    step: f64,
) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidConfig(
            "finite difference step must be positive".into(),
        ));
    }
    let base = weights.as_slice();
    (0..base.len())
        .map(|k| {
            let mut plus = base.to_vec();
            let mut minus = base.to_vec();
            plus[k] += step;
            minus[k] -= step;
            let f_plus =
                crate::channel::pair_fidelity(gens, &WeightVector::new(plus)?, pair, ancilla)?;
            let f_minus =
                crate::channel::pair_fidelity(gens, &WeightVector::new(minus)?, pair, ancilla)?;
            Ok((f_plus - f_minus) / (2.0 * step))
        })
        .collect()
}

fn project_to_box(weights: &mut [f64], bounds: Option<&Vec<(f64, f64)>>) {
    if let Some(bounds) = bounds {
        for (w, &(lo, hi)) in weights.iter_mut().zip(bounds) {
            *w = w.clamp(lo, hi);
        }
    }
}

fn initial_weights(config: &TrainConfig, count: usize, rng: &mut SeededRng) -> Vec<f64> {
    match &config.weight_init {
        WeightInit::Uniform { amplitude } => {
            (0..count).map(|_| rng.uniform(-amplitude, *amplitude)).collect()
        }
        WeightInit::Given(values) => values.clone(),
    }
}

fn run_restart(
    gens: &NetworkGenerators,
    target: &UnitaryMatrix,
    ancilla: &AncillaPrep,
    config: &TrainConfig,
    restart_index: u32,
) -> Result<TrainResult> {
    let count = gens.count();
    config.validate(count)?;
    let register_dim = 1usize << gens.network().register_size();
    if target.dim() != register_dim {
        return Err(Error::DimensionMismatch {
            context: "training target",
            expected: register_dim,
            got: target.dim(),
        });
    }

    let mut rng = SeededRng::with_stream(
        config.seed,
        STREAM_RESTART_BASE + u64::from(restart_index),
    );
    let mut weights = initial_weights(config, count, &mut rng);
    project_to_box(&mut weights, config.box_bounds.as_ref());

    let exact = |w: &[f64]| -> Result<f64> {
        let channel = RegisterChannel::new(gens, &WeightVector::new(w.to_vec())?, ancilla)?;
        channel.exact_average_fidelity(target)
    };

    let f0 = exact(&weights)?;
    let mut state = TrainState {
        step: 0,
        weights: weights.clone(),
        learning_rate: config.kappa0,
        best_weights: weights,
        best_fidelity: f0,
        curve: vec![CurvePoint {
            step: 0,
            exact_fidelity: f0,
            learning_rate: config.kappa0,
        }],
    };
    let mut updates: u64 = 0;
    let workspace = GradientWorkspace::new(gens);
    let register_qubits = gens.network().register_size();

    if 1.0 - state.best_fidelity >= config.target_error {
        while state.step < config.max_outer_steps {
            state.step += 1;
            let pair = generate_training_pair(target, register_qubits, &mut rng)?;
            state.learning_rate = learning_rate(config, state.step)?;
            for _ in 0..config.inner_steps {
                let grad = workspace.gradient(
                    &WeightVector::new(state.weights.clone())?,
                    &pair,
                    ancilla,
                )?;
                for (w, g) in state.weights.iter_mut().zip(&grad) {
                    *w += state.learning_rate * g;
                }
                project_to_box(&mut state.weights, config.box_bounds.as_ref());
                updates += 1;
            }
            if state.step % CHECKPOINT_INTERVAL == 0 || state.step == config.max_outer_steps {
                let f = exact(&state.weights)?;
                state.curve.push(CurvePoint {
                    step: state.step,
                    exact_fidelity: f,
                    learning_rate: state.learning_rate,
                });
                if f > state.best_fidelity {
                    state.best_fidelity = f;
                    state.best_weights = state.weights.clone();
                }
                if 1.0 - state.best_fidelity < config.target_error {
                    break;
                }
            }
        }
    }

    let error = 1.0 - state.best_fidelity;
    Ok(TrainResult {
        weights: WeightVector::new(state.best_weights)?,
        exact_fidelity: state.best_fidelity,
        error,
        converged: error < config.target_error,
        steps_used: state.step,
        weight_updates: updates,
        learning_curve: state.curve,
        seed: config.seed,
        restart_index,
    })
}

/// A single run of the online stochastic gradient ascent loop
/// (restart index 0).
pub fn sgd_train(
    gens: &NetworkGenerators,
    target: &UnitaryMatrix,
    ancilla: &AncillaPrep,
    config: &TrainConfig,
) -> Result<TrainResult> {
    run_restart(gens, target, ancilla, config, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiRestartResult {
    /// The restart with the highest exact fidelity; ties go to the lowest
    /// restart index.
    pub best: TrainResult,
    /// Every restart's result, index order, curves included.
    pub restarts: Vec<TrainResult>,
}

/// Independent restarts on derived RNG streams, evaluated in parallel with a
/// deterministic winner.
pub fn multi_restart(
    gens: &NetworkGenerators,
    target: &UnitaryMatrix,
    ancilla: &AncillaPrep,
    config: &TrainConfig,
) -> Result<MultiRestartResult> {
    config.validate(gens.count())?;
    let results: Vec<TrainResult> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(gens, target, ancilla, config, r))
        .collect::<Result<_>>()?;
    let best = results
        .iter()
        .max_by(|a, b| {
            a.exact_fidelity
                .total_cmp(&b.exact_fidelity)
                // prefer the lower restart index on exact ties
                .then(b.restart_index.cmp(&a.restart_index))
        })
        .expect("restarts >= 1")
        .clone();
    Ok(MultiRestartResult {
        best,
        restarts: results,
    })
}

/// Mean and minimum pair fidelity over the seeded held-out validation set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationStats {
    pub size: usize,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
}

/// Evaluates weights on the validation stream derived from `seed`; the set
/// is disjoint from every training stream.
pub fn validation_stats(
    gens: &NetworkGenerators,
    weights: &WeightVector,
    target: &UnitaryMatrix,
    ancilla: &AncillaPrep,
    size: usize,
    seed: u64,
) -> Result<ValidationStats> {
    if size == 0 {
        return Err(Error::EmptyBatch);
    }
    let mut rng = SeededRng::with_stream(seed, STREAM_VALIDATION);
    let register_qubits = gens.network().register_size();
    let pairs: Vec<TrainingPair> = (0..size)
        .map(|_| generate_training_pair(target, register_qubits, &mut rng))
        .collect::<Result<_>>()?;
    let fidelities = crate::channel::pair_fidelities(gens, weights, &pairs, ancilla)?;
    let mean = compensated_sum(&fidelities) / size as f64;
    let min = fidelities.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ValidationStats {
        size,
        mean_fidelity: mean,
        min_fidelity: min,
    })
}
