//! Haar-measure sampling and training-pair generation.
//!
//! All randomness flows through [`SeededRng`], a ChaCha stream cipher RNG:
//! a `(seed, stream)` pair fully determines the sample sequence, so parallel
//! components draw from independently derived streams instead of sharing one
//! generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{C64, CMatrix, CVector, PureState, UnitaryMatrix};

/// Deterministic RNG identified by a `(seed, stream)` pair.
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
    seed: u64,
    stream: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent stream derived from the same seed; streams never overlap.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner, seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn uniform(&mut self, low: f64, high: f64) -> f64 {
        self.inner.random_range(low..high)
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        let re: f64 = self.standard_normal();
        let im: f64 = self.standard_normal();
        C64::new(re, im) / C64::new(std::f64::consts::SQRT_2, 0.0)
    }
}

/// Pure state drawn from the Haar measure: independent standard complex
/// Gaussian amplitudes, normalized.
pub fn haar_random_state(num_qubits: usize, rng: &mut SeededRng) -> Result<PureState> {
    if num_qubits == 0 {
        return Err(Error::QubitOutOfRange {
            index: 0,
            num_qubits: 0,
        });
    }
    let dim = 1usize << num_qubits;
    loop {
        let amplitudes = CVector::from_fn(dim, |_, _| rng.complex_gaussian());
        // a zero draw has probability zero but would poison the normalization
        if amplitudes.norm() > 1e-6 {
            return PureState::normalized(amplitudes);
        }
    }
}

/// Haar-random unitary: complex Ginibre matrix, QR decomposition, R-diagonal
/// phases folded into Q.
pub fn haar_random_unitary(dim: usize, rng: &mut SeededRng) -> Result<UnitaryMatrix> {
    if dim < 2 {
        return Err(Error::DimensionMismatch {
            context: "haar_random_unitary",
            expected: 2,
            got: dim,
        });
    }
    let ginibre = CMatrix::from_fn(dim, dim, |_, _| rng.complex_gaussian());
    let qr = ginibre.qr();
    let r_diag: Vec<C64> = (0..dim).map(|i| qr.r()[(i, i)]).collect();
    let mut q = qr.q();
    for (col, r) in r_diag.iter().enumerate() {
        let phase = if r.norm() > 0.0 { r / r.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, col)] *= phase;
        }
    }
    UnitaryMatrix::new(q)
}

/// One supervised example: a Haar-random input and the target's action on it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingPair {
    pub input: PureState,
    pub target_output: PureState,
}

impl TrainingPair {
    pub fn new(input: PureState, target_output: PureState) -> Result<Self> {
        if input.dim() != target_output.dim() {
            return Err(Error::DimensionMismatch {
                context: "training pair",
                expected: input.dim(),
                got: target_output.dim(),
            });
        }
        Ok(Self { input, target_output })
    }
}

/// Draws a Haar-random input on `num_qubits` qubits and pairs it with
/// `target` applied to it.
pub fn generate_training_pair(
    target: &UnitaryMatrix,
    num_qubits: usize,
    rng: &mut SeededRng,
) -> Result<TrainingPair> {
    let dim = 1usize << num_qubits;
    if target.dim() != dim {
        return Err(Error::DimensionMismatch {
            context: "training pair target",
            expected: dim,
            got: target.dim(),
        });
    }
    let input = haar_random_state(num_qubits, rng)?;
    let target_output = target.apply(&input)?;
    TrainingPair::new(input, target_output)
}
