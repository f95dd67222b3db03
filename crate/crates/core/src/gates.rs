//! Standard target gates.
//!
//! Conventions, aligned with the repo-wide bit ordering (qubit 0 is the most
//! significant basis-index bit):
//! - CNOT, CZ: qubit 0 controls, qubit 1 is the target.
//! - TOFFOLI: qubits 0 and 1 control, qubit 2 is the target.
//! - FREDKIN: qubit 0 controls a swap of qubits 1 and 2.
//! - QFT(n): entry `(j, k)` is `omega^{jk} / sqrt(2^n)` with
//!   `omega = e^{2 pi i / 2^n}`.
//!
//! Gates are stored as their textbook matrices with no global-phase
//! normalization; downstream comparisons are phase-insensitive.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{C64, CMatrix, UnitaryMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    T,
    Cnot,
    Cz,
    Swap,
    Iswap,
    Toffoli,
    Fredkin,
    Qft,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::Iswap => "ISWAP",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Fredkin => "FREDKIN",
            GateKind::Qft => "QFT",
        }
    }

    /// Fixed arity, or `None` for QFT which takes any width.
    pub fn fixed_arity(self) -> Option<usize> {
        match self {
            GateKind::X | GateKind::Y | GateKind::Z | GateKind::H | GateKind::S | GateKind::T => {
                Some(1)
            }
            GateKind::Cnot | GateKind::Cz | GateKind::Swap | GateKind::Iswap => Some(2),
            GateKind::Toffoli | GateKind::Fredkin => Some(3),
            GateKind::Qft => None,
        }
    }
}

/// A gate name plus the qubit count it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NamedGate {
    kind: GateKind,
    num_qubits: usize,
}

impl NamedGate {
    pub fn new(kind: GateKind, num_qubits: usize) -> Result<Self> {
        match kind.fixed_arity() {
            Some(expected) if expected != num_qubits => Err(Error::GateArityMismatch {
                gate: kind.name(),
                expected,
                got: num_qubits,
            }),
            _ if num_qubits == 0 => Err(Error::GateArityMismatch {
                gate: kind.name(),
                expected: 1,
                got: 0,
            }),
            _ => Ok(Self { kind, num_qubits }),
        }
    }

    /// Parses a case-insensitive gate name. Fixed-arity gates may omit
    /// `num_qubits`; QFT requires it.
    pub fn parse(name: &str, num_qubits: Option<usize>) -> Result<Self> {
        let kind = match name.to_ascii_uppercase().as_str() {
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "T" => GateKind::T,
            "CNOT" | "CX" => GateKind::Cnot,
            "CZ" => GateKind::Cz,
            "SWAP" => GateKind::Swap,
            "ISWAP" => GateKind::Iswap,
            "TOFFOLI" | "CCNOT" | "CCX" => GateKind::Toffoli,
            "FREDKIN" | "CSWAP" => GateKind::Fredkin,
            "QFT" => GateKind::Qft,
            other => {
                return Err(Error::InvalidConfig(format!("unknown gate name '{other}'")));
            }
        };
        let num_qubits = match (kind.fixed_arity(), num_qubits) {
            (_, Some(n)) => n,
            (Some(n), None) => n,
            (None, None) => {
                return Err(Error::InvalidConfig(
                    "QFT needs an explicit qubit count".into(),
                ));
            }
        };
        Self::new(kind, num_qubits)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn build(&self) -> UnitaryMatrix {
        build_gate(self)
    }
}

/// Builds the gate's matrix in the repo bit-ordering.
pub fn build_gate(gate: &NamedGate) -> UnitaryMatrix {
    let c = C64::new;
    let matrix = match gate.kind {
        GateKind::X => CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        GateKind::Y => CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        GateKind::Z => CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        GateKind::H => {
            let h = FRAC_1_SQRT_2;
            CMatrix::from_row_slice(2, 2, &[c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)])
        }
        GateKind::S => CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]),
        GateKind::T => CMatrix::from_row_slice(
            2,
            2,
            &[
                c(1., 0.),
                c(0., 0.),
                c(0., 0.),
                c(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            ],
        ),
        GateKind::Cnot => permutation_matrix(&[0, 1, 3, 2]),
        GateKind::Cz => {
            let mut m = CMatrix::identity(4, 4);
            m[(3, 3)] = c(-1., 0.);
            m
        }
        GateKind::Swap => permutation_matrix(&[0, 2, 1, 3]),
        GateKind::Iswap => {
            let mut m = CMatrix::zeros(4, 4);
            m[(0, 0)] = c(1., 0.);
            m[(3, 3)] = c(1., 0.);
            m[(1, 2)] = c(0., 1.);
            m[(2, 1)] = c(0., 1.);
            m
        }
        GateKind::Toffoli => permutation_matrix(&[0, 1, 2, 3, 4, 5, 7, 6]),
        GateKind::Fredkin => permutation_matrix(&[0, 1, 2, 3, 4, 6, 5, 7]),
        GateKind::Qft => {
            let dim = 1usize << gate.num_qubits;
            let scale = 1.0 / (dim as f64).sqrt();
            CMatrix::from_fn(dim, dim, |j, k| {
                let angle = 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
                C64::new(angle.cos() * scale, angle.sin() * scale)
            })
        }
    };
    UnitaryMatrix::new(matrix).expect("named gates are unitary by construction")
}

/// Matrix sending basis state `j` to `image[j]`.
fn permutation_matrix(image: &[usize]) -> CMatrix {
    let dim = image.len();
    let mut m = CMatrix::zeros(dim, dim);
    for (j, &i) in image.iter().enumerate() {
        m[(i, j)] = C64::new(1.0, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gate(kind: GateKind) -> UnitaryMatrix {
        let n = kind.fixed_arity().unwrap();
        NamedGate::new(kind, n).unwrap().build()
    }

    #[test]
    fn qft_of_one_qubit_is_hadamard() {
        let qft = NamedGate::new(GateKind::Qft, 1).unwrap().build();
        let h = gate(GateKind::H);
        assert!((qft.matrix() - h.matrix()).norm() < 1e-15);
    }

    #[test]
    fn toffoli_swaps_basis_states_six_and_seven() {
        let t = gate(GateKind::Toffoli);
        assert_abs_diff_eq!(t.matrix()[(7, 6)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.matrix()[(6, 7)].re, 1.0, epsilon = 1e-15);
        for j in 0..6 {
            assert_abs_diff_eq!(t.matrix()[(j, j)].re, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn fredkin_maps_101_to_110() {
        let f = gate(GateKind::Fredkin);
        assert_abs_diff_eq!(f.matrix()[(6, 5)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn involutions_square_to_identity() {
        for kind in [
            GateKind::X,
            GateKind::Cnot,
            GateKind::Cz,
            GateKind::Swap,
            GateKind::Toffoli,
            GateKind::Fredkin,
        ] {
            let u = gate(kind);
            let dim = u.dim();
            let sq = u.matrix() * u.matrix();
            assert!(
                (sq - CMatrix::identity(dim, dim)).norm() < 1e-12,
                "{} is not an involution",
                kind.name()
            );
        }
    }

    #[test]
    fn qft_is_unitary_and_maps_zero_to_uniform() {
        for n in 1..=4 {
            let qft = NamedGate::new(GateKind::Qft, n).unwrap().build();
            let dim = 1usize << n;
            let dev = (qft.matrix() * qft.matrix().adjoint() - CMatrix::identity(dim, dim)).norm();
            assert!(dev < 1e-12);
            let amp = 1.0 / (dim as f64).sqrt();
            for row in 0..dim {
                assert_abs_diff_eq!(qft.matrix()[(row, 0)].re, amp, epsilon = 1e-15);
                assert_abs_diff_eq!(qft.matrix()[(row, 0)].im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn arity_is_enforced() {
        assert!(matches!(
            NamedGate::new(GateKind::Toffoli, 2),
            Err(Error::GateArityMismatch {
                gate: "TOFFOLI",
                expected: 3,
                got: 2
            })
        ));
        assert!(NamedGate::parse("qft", None).is_err());
        assert!(NamedGate::parse("nonsense", None).is_err());
        assert_eq!(
            NamedGate::parse("cnot", None).unwrap(),
            NamedGate::new(GateKind::Cnot, 2).unwrap()
        );
    }
}
