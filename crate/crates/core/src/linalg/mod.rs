//! Dense complex linear algebra for multi-qubit systems.
//!
//! Everything here works on plain `nalgebra` dynamic matrices over
//! `Complex<f64>`. The bit-ordering convention is fixed repo-wide:
//! **qubit 0 is the most significant bit of the basis index**, so
//! `kron(a, b)` puts `a` on the lower-numbered qubits.

mod operator;
mod state;

pub use operator::{
    expm_directional_derivative, expm_hamiltonian, hermitian_eig, HermitianOperator,
    SpectralDecomposition, UnitaryMatrix,
};
pub(crate) use operator::divided_difference_matrix;
pub use state::{DensityMatrix, PureState};
pub(crate) use state::basis_offsets;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Unit-norm tolerance for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Entrywise Hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix may undershoot zero by this much.
pub const PSD_TOL: f64 = 1e-10;
/// Frobenius-norm tolerance on U^H U - I.
pub const UNITARY_TOL: f64 = 1e-10;
/// Eigenvalue gaps below this are treated as degenerate in divided differences.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Fidelity values may overshoot [0, 1] by at most this before being an error.
pub const FIDELITY_OVERSHOOT_TOL: f64 = 1e-10;

/// Kronecker product. The left factor occupies the more significant bits of
/// the basis index, matching the repo-wide qubit ordering.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entry magnitude; the entrywise counterpart of the Frobenius norm.
pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Number of qubits for a dimension that must be a power of two.
pub(crate) fn qubit_count(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len: dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Fidelity `<psi| rho |psi>` between a pure target and a mixed state.
///
/// The value is clamped into `[0, 1]` when the overshoot is within
/// [`FIDELITY_OVERSHOOT_TOL`]; a larger overshoot signals a non-physical
/// input and is an error.
pub fn fidelity(target: &PureState, state: &DensityMatrix) -> Result<f64> {
    if target.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity",
            expected: target.dim(),
            got: state.dim(),
        });
    }
    let psi = target.amplitudes();
    let value = (psi.adjoint() * state.matrix() * psi)[(0, 0)].re;
    clamp_unit_interval(value)
}

/// Clamps a value that is mathematically in `[0, 1]`, rejecting anything
/// that overshoots by more than [`FIDELITY_OVERSHOOT_TOL`].
pub(crate) fn clamp_unit_interval(value: f64) -> Result<f64> {
    if !(-FIDELITY_OVERSHOOT_TOL..=1.0 + FIDELITY_OVERSHOOT_TOL).contains(&value) {
        return Err(Error::NonPhysicalFidelity { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Compensated (Neumaier) sum; the result does not depend on how callers
/// might have produced the slice in parallel, only on its order.
pub(crate) fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SeededRng;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    pub(crate) fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    pub(crate) fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    fn random_matrix(dim: usize, rng: &mut SeededRng) -> CMatrix {
        CMatrix::from_fn(dim, dim, |_, _| c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4, 4));
    }

    #[test]
    fn kron_x_z_maps_00_to_10() {
        let m = kron(&pauli_x(), &pauli_z());
        // column 0 of X (x) Z must be the basis state |10> = index 2
        for row in 0..4 {
            let expected = if row == 2 { c(1., 0.) } else { c(0., 0.) };
            assert_eq!(m[(row, 0)], expected);
        }
    }

    #[test]
    fn kron_mixed_product_property() {
        let mut rng = SeededRng::new(7);
        for _ in 0..5 {
            let (a, b, cc, d) = (
                random_matrix(2, &mut rng),
                random_matrix(2, &mut rng),
                random_matrix(2, &mut rng),
                random_matrix(2, &mut rng),
            );
            let lhs = kron(&a, &b) * kron(&cc, &d);
            let rhs = kron(&(&a * &cc), &(&b * &d));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn fidelity_of_state_with_itself_is_one() {
        let psi = PureState::basis(2, 3).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        assert_abs_diff_eq!(fidelity(&psi, &rho).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_of_orthogonal_states_is_zero() {
        let psi = PureState::basis(1, 0).unwrap();
        let phi = PureState::basis(1, 1).unwrap();
        let rho = DensityMatrix::from_pure(&phi);
        assert_abs_diff_eq!(fidelity(&psi, &rho).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_against_maximally_mixed_is_half() {
        let mut rng = SeededRng::new(3);
        let psi = crate::sampling::haar_random_state(1, &mut rng).unwrap();
        let rho = DensityMatrix::maximally_mixed(1);
        assert_abs_diff_eq!(fidelity(&psi, &rho).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_rejects_dimension_mismatch() {
        let psi = PureState::basis(1, 0).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(fidelity(&psi, &rho).is_err());
    }

    #[test]
    fn fidelity_is_linear_in_the_density_matrix() {
        let mut rng = SeededRng::new(11);
        let psi = crate::sampling::haar_random_state(2, &mut rng).unwrap();
        let rho1 = DensityMatrix::from_pure(&crate::sampling::haar_random_state(2, &mut rng).unwrap());
        let rho2 = DensityMatrix::from_pure(&crate::sampling::haar_random_state(2, &mut rng).unwrap());
        let p = 0.3;
        let mix = DensityMatrix::new(rho1.matrix() * c(p, 0.) + rho2.matrix() * c(1.0 - p, 0.)).unwrap();
        let lhs = fidelity(&psi, &mix).unwrap();
        let rhs = p * fidelity(&psi, &rho1).unwrap() + (1.0 - p) * fidelity(&psi, &rho2).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn compensated_sum_matches_exact_small_case() {
        assert_eq!(compensated_sum(&[1.0, 2.0, 3.0]), 6.0);
        let tiny = vec![0.1f64; 10];
        assert_abs_diff_eq!(compensated_sum(&tiny), 1.0, epsilon = 1e-15);
    }
}
