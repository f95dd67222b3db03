//! Pure states and density matrices.

use nalgebra::DVector;
use num_complex::Complex;

use super::{qubit_count, C64, CMatrix, CVector, HERMITIAN_TOL, NORM_TOL, PSD_TOL, TRACE_TOL};
use crate::error::{Error, Result};

/// Unit-norm vector in a `2^n`-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    num_qubits: usize,
}

impl PureState {
    /// Wraps an amplitude vector, requiring unit norm within [`NORM_TOL`]
    /// and a power-of-two length.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let num_qubits = qubit_count(amplitudes.len())?;
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes, num_qubits })
    }

    /// Normalizes an arbitrary nonzero vector into a state.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Self::new(amplitudes / Complex::new(norm, 0.0))
    }

    /// Computational basis state `|index>` on `num_qubits` qubits.
    ///
    /// `num_qubits = 0` yields the trivial one-dimensional state, which is
    /// the identity element of the tensor product.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::QubitOutOfRange { index, num_qubits });
        }
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[index] = Complex::new(1.0, 0.0);
        Ok(Self { amplitudes, num_qubits })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "inner product",
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Tensor product `|self> (x) |other>`; `self` occupies the more
    /// significant bits per the repo-wide ordering.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        PureState {
            amplitudes: DVector::from_column_slice(amplitudes.as_slice()),
            num_qubits: self.num_qubits + other.num_qubits,
        }
    }

    /// Reduced density matrix on the kept qubits; `keep[m]` becomes qubit
    /// `m` of the output.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (keep_offsets, traced_offsets) = trace_offsets(self.num_qubits, keep)?;
        let kept_dim = keep_offsets.len();
        let mut reduced = CMatrix::zeros(kept_dim, kept_dim);
        for row in 0..kept_dim {
            for col in 0..kept_dim {
                let mut acc = C64::new(0.0, 0.0);
                for &t in &traced_offsets {
                    acc += self.amplitudes[keep_offsets[row] | t]
                        * self.amplitudes[keep_offsets[col] | t].conj();
                }
                reduced[(row, col)] = acc;
            }
        }
        DensityMatrix::new(reduced)
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    num_qubits: usize,
}

impl DensityMatrix {
    /// Validates all three invariants: Hermiticity within [`HERMITIAN_TOL`]
    /// (entrywise), unit trace within [`TRACE_TOL`], and eigenvalues no
    /// lower than `-`[`PSD_TOL`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let num_qubits = qubit_count(matrix.nrows())?;
        check_hermitian(&matrix, HERMITIAN_TOL)?;
        let trace_deviation = (matrix.trace() - C64::new(1.0, 0.0)).norm();
        if trace_deviation > TRACE_TOL {
            return Err(Error::TraceNotOne {
                deviation: trace_deviation,
            });
        }
        let eigenvalues = matrix.clone().symmetric_eigenvalues();
        if let Some(lowest) = eigenvalues.iter().copied().reduce(f64::min) {
            if lowest < -PSD_TOL {
                return Err(Error::NotPositiveSemidefinite { eigenvalue: lowest });
            }
        }
        Ok(Self { matrix, num_qubits })
    }

    /// Projector `|psi><psi|`, exactly trace-normalized.
    pub fn from_pure(state: &PureState) -> Self {
        let psi = state.amplitudes();
        let mut matrix = psi * psi.adjoint();
        let trace = matrix.trace().re;
        matrix /= C64::new(trace, 0.0);
        Self {
            matrix,
            num_qubits: state.num_qubits(),
        }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let matrix = CMatrix::identity(dim, dim) / C64::new(dim as f64, 0.0);
        Self { matrix, num_qubits }
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

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Spectrum of the state, ascending; the `p_j` of its mixture form.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Reduced density matrix on the kept qubits.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (keep_offsets, traced_offsets) = trace_offsets(self.num_qubits, keep)?;
        let kept_dim = keep_offsets.len();
        let mut reduced = CMatrix::zeros(kept_dim, kept_dim);
        for row in 0..kept_dim {
            for col in 0..kept_dim {
                let mut acc = C64::new(0.0, 0.0);
                for &t in &traced_offsets {
                    acc += self.matrix[(keep_offsets[row] | t, keep_offsets[col] | t)];
                }
                reduced[(row, col)] = acc;
            }
        }
        DensityMatrix::new(reduced)
    }
}

pub(crate) fn check_hermitian(matrix: &CMatrix, tol: f64) -> Result<()> {
    let mut max_asymmetry = 0.0;
    let mut location = (0, 0);
    for row in 0..matrix.nrows() {
        for col in row..matrix.ncols() {
            let asym = (matrix[(row, col)] - matrix[(col, row)].conj()).norm();
            if asym > max_asymmetry {
                max_asymmetry = asym;
                location = (row, col);
            }
        }
    }
    if max_asymmetry > tol {
        return Err(Error::NotHermitian {
            row: location.0,
            col: location.1,
            max_asymmetry,
        });
    }
    Ok(())
}

/// Precomputes basis-index contributions for a subset of qubits.
///
/// `positions[m]` is the network index of local qubit `m` (MSB-first on both
/// sides). Entry `r` of the result is the full-space index contribution of
/// the local basis state `|r>`.
pub(crate) fn basis_offsets(num_qubits: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|r| {
            let mut full = 0usize;
            for (m, &q) in positions.iter().enumerate() {
                let bit = (r >> (k - 1 - m)) & 1;
                full |= bit << (num_qubits - 1 - q);
            }
            full
        })
        .collect()
}

/// Validates a keep list and returns (kept, traced) index offset tables.
fn trace_offsets(num_qubits: usize, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut seen = vec![false; num_qubits];
    for &q in keep {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits,
            });
        }
        if seen[q] {
            return Err(Error::DuplicateQubit { index: q });
        }
        seen[q] = true;
    }
    let traced: Vec<usize> = (0..num_qubits).filter(|&q| !seen[q]).collect();
    Ok((
        basis_offsets(num_qubits, keep),
        basis_offsets(num_qubits, &traced),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{haar_random_state, SeededRng};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_non_power_of_two_length() {
        let v = CVector::from_element(3, c(1.0 / 3f64.sqrt(), 0.));
        assert!(matches!(PureState::new(v), Err(Error::NotPowerOfTwo { len: 3 })));
    }

    #[test]
    fn rejects_unnormalized_vector() {
        let v = CVector::from_element(2, c(1.0, 0.));
        assert!(matches!(PureState::new(v), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn zero_qubit_state_is_allowed() {
        let s = PureState::basis(0, 0).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.num_qubits(), 0);
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factor() {
        let mut rng = SeededRng::new(5);
        let psi = haar_random_state(2, &mut rng).unwrap();
        let alpha = haar_random_state(1, &mut rng).unwrap();
        let full = psi.tensor(&alpha);
        let reduced = full.partial_trace(&[0, 1]).unwrap();
        let expected = DensityMatrix::from_pure(&psi);
        assert!((reduced.matrix() - expected.matrix()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let x = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(CVector::from_column_slice(&[
            c(x, 0.),
            c(0., 0.),
            c(0., 0.),
            c(x, 0.),
        ]))
        .unwrap();
        let reduced = bell.partial_trace(&[0]).unwrap();
        assert!((reduced.matrix() - DensityMatrix::maximally_mixed(1).matrix()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_matches_basis_sum_oracle() {
        // keep {0, 2} of a random 3-qubit state; the oracle sums
        // (I (x) <a|) |eta><eta| (I (x) |a>) over the traced qubit's basis.
        let mut rng = SeededRng::new(17);
        let eta = haar_random_state(3, &mut rng).unwrap();
        let reduced = eta.partial_trace(&[0, 2]).unwrap();

        // qubit 1 is traced out; bit positions from the MSB: q0 q1 q2
        let amp = eta.amplitudes();
        let mut oracle = CMatrix::zeros(4, 4);
        for a in 0..2usize {
            // projector row r of kept space: bits (q0, q2) of r
            let mut bra = CMatrix::zeros(4, 8);
            for r in 0..4usize {
                let q0 = (r >> 1) & 1;
                let q2 = r & 1;
                let full = (q0 << 2) | (a << 1) | q2;
                bra[(r, full)] = c(1., 0.);
            }
            let rho_full = amp * amp.adjoint();
            oracle += &bra * rho_full * bra.adjoint();
        }
        assert!(super::super::max_abs_entry(&(reduced.matrix() - &oracle)) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = SeededRng::new(23);
        let eta = haar_random_state(3, &mut rng).unwrap();
        for keep in [&[0usize][..], &[1], &[0, 2], &[2, 1]] {
            let reduced = eta.partial_trace(keep).unwrap();
            assert_abs_diff_eq!(reduced.trace().re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(reduced.trace().im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let psi = PureState::basis(2, 0).unwrap();
        assert!(matches!(psi.partial_trace(&[]), Err(Error::EmptyKeepSet)));
        assert!(matches!(
            psi.partial_trace(&[2]),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            psi.partial_trace(&[0, 0]),
            Err(Error::DuplicateQubit { index: 0 })
        ));
    }

    #[test]
    fn schmidt_spectra_of_complementary_cuts_agree() {
        let mut rng = SeededRng::new(31);
        let eta = haar_random_state(3, &mut rng).unwrap();
        let left = eta.partial_trace(&[0]).unwrap();
        let right = eta.partial_trace(&[1, 2]).unwrap();
        let lv = left.eigenvalues();
        let rv = right.eigenvalues();
        // the 4-dim side has two extra zero eigenvalues
        let nonzero: Vec<f64> = rv.into_iter().filter(|v| v.abs() > 1e-10).collect();
        assert_eq!(nonzero.len(), lv.len());
        for (a, b) in lv.iter().zip(nonzero.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        // non-Hermitian
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.), c(0.3, 0.), c(0.1, 0.), c(0.5, 0.)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));
        // wrong trace
        let m = CMatrix::identity(2, 2);
        assert!(matches!(DensityMatrix::new(m), Err(Error::TraceNotOne { .. })));
        // not PSD
        let m = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.), c(0., 0.), c(0., 0.), c(-0.5, 0.)]);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn hermitian_diagnostic_names_the_worst_entry() {
        let mut m = CMatrix::identity(3, 3);
        m[(0, 2)] = c(0.25, 0.);
        let err = check_hermitian(&m, 1e-12).unwrap_err();
        match err {
            Error::NotHermitian { row, col, max_asymmetry } => {
                assert_eq!((row, col), (0, 2));
                assert!((max_asymmetry - 0.25).abs() < 1e-12);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
