//! Hermitian operators, unitaries, spectral decompositions and the matrix
//! exponential with its directional derivative.

use super::state::check_hermitian;
use super::{qubit_count, C64, CMatrix, CVector, DEGENERACY_TOL, HERMITIAN_TOL, UNITARY_TOL};
use crate::error::{Error, Result};

/// Hermitian matrix on `n` qubits; the generator of time evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
    num_qubits: usize,
}

impl HermitianOperator {
    /// Requires `|A - A^H|` entrywise within [`HERMITIAN_TOL`]; the error
    /// names the entry with the largest asymmetry.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let num_qubits = qubit_count(matrix.nrows())?;
        check_hermitian(&matrix, HERMITIAN_TOL)?;
        Ok(Self { matrix, num_qubits })
    }

    pub fn zero(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            matrix: CMatrix::zeros(dim, dim),
            num_qubits,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

/// Matrix with `U^H U = I` within [`UNITARY_TOL`] (Frobenius norm).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let dim = matrix.nrows();
        let deviation = (matrix.adjoint() * &matrix - CMatrix::identity(dim, dim)).norm();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Applies the unitary to a pure state.
    pub fn apply(&self, state: &super::PureState) -> Result<super::PureState> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                context: "unitary application",
                expected: self.dim(),
                got: state.dim(),
            });
        }
        super::PureState::new(&self.matrix * state.amplitudes())
    }
}

/// Eigendecomposition of a Hermitian operator: real ascending eigenvalues
/// and a unitary matrix of eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(lambda) V^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let lambda = CMatrix::from_diagonal(&CVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&l| C64::new(l, 0.0)),
        ));
        &self.eigenvectors * lambda * self.eigenvectors.adjoint()
    }

    /// `V diag(f(lambda)) V^H` for a scalar function of the eigenvalues.
    fn map_eigenvalues(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let lambda = CMatrix::from_diagonal(&CVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&l| f(l)),
        ));
        &self.eigenvectors * lambda * self.eigenvectors.adjoint()
    }
}

/// Spectral decomposition with eigenvalues sorted ascending.
pub fn hermitian_eig(h: &HermitianOperator) -> SpectralDecomposition {
    // project onto the exactly Hermitian part; the input is within
    // HERMITIAN_TOL of it by construction
    let sym = (h.matrix() + h.matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let columns: Vec<CVector> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    SpectralDecomposition {
        eigenvalues,
        eigenvectors: CMatrix::from_columns(&columns),
    }
}

/// `e^{-i t H}` through the spectral decomposition.
pub fn expm_hamiltonian(h: &HermitianOperator, t: f64) -> UnitaryMatrix {
    let eig = hermitian_eig(h);
    let matrix = eig.map_eigenvalues(|l| (-C64::i() * (t * l)).exp());
    UnitaryMatrix::new(matrix).expect("spectral exponential of a Hermitian matrix is unitary")
}

/// Divided-difference (Daleckii-Krein) coefficient matrix for
/// `f(x) = e^{-i t x}` over an eigenvalue list.
pub(crate) fn divided_difference_matrix(eigenvalues: &[f64], t: f64) -> CMatrix {
    let dim = eigenvalues.len();
    CMatrix::from_fn(dim, dim, |m, n| {
        let (lm, ln) = (eigenvalues[m], eigenvalues[n]);
        if (lm - ln).abs() > DEGENERACY_TOL {
            let em = (-C64::i() * (t * lm)).exp();
            let en = (-C64::i() * (t * ln)).exp();
            (em - en) / C64::new(lm - ln, 0.0)
        } else {
            -C64::i() * C64::new(t, 0.0) * (-C64::i() * (t * lm)).exp()
        }
    })
}

/// Directional derivative `d/ds e^{-i t (H + s D)}` at `s = 0`.
///
/// Computed as `V [ Gamma . (V^H D V) ] V^H` on the spectral decomposition
/// of `H`, where `.` is the Hadamard product and `Gamma` the divided
/// differences of `e^{-i t x}`.
pub fn expm_directional_derivative(
    h: &HermitianOperator,
    direction: &HermitianOperator,
    t: f64,
) -> Result<CMatrix> {
    if h.dim() != direction.dim() {
        return Err(Error::DimensionMismatch {
            context: "directional derivative",
            expected: h.dim(),
            got: direction.dim(),
        });
    }
    let eig = hermitian_eig(h);
    let gamma = divided_difference_matrix(eig.eigenvalues(), t);
    let rotated = eig.eigenvectors().adjoint() * direction.matrix() * eig.eigenvectors();
    Ok(eig.eigenvectors() * rotated.component_mul(&gamma) * eig.eigenvectors().adjoint())
}
