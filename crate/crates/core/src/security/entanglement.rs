use crate::error::{QkdError, Result};
use crate::qmath::{eig_hermitian, eigvals_hermitian, pauli, DensityMatrix};
use crate::Real;

use super::{reduced_ab_state, v_matrix_one_param};

/// Wootters concurrence of a two-qubit state.
///
/// The spin flip is `σ_y ⊗ σ_y` applied with complex conjugation in the
/// storage basis. The square roots of the eigenvalues of `ρ ρ̃` are taken as
/// the eigenvalues of the Hermitian `√(√ρ ρ̃ √ρ)`.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        return Err(QkdError::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let yy = pauli::sigma_y::<T>().tensor(&pauli::sigma_y());
    let flipped = yy.matmul(&rho.as_operator().conj())?.matmul(&yy)?;
    let sqrt_rho = eig_hermitian(rho.as_operator())?.map_spectrum(|l| l.max(T::zero()).sqrt());
    let mut m = sqrt_rho.matmul(&flipped)?.matmul(&sqrt_rho)?;
    // Restore exact hermiticity lost to rounding.
    m = (&m + &m.adjoint()).scale_real(T::lit(0.5));
    let lambdas: Vec<T> = eigvals_hermitian(&m)?.into_iter().map(|l| l.max(T::zero()).sqrt()).collect();
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(T::zero()))
}

/// Smallest eigenvalue of the partial transpose over Bob's qubit.
pub fn min_partial_transpose_eigenvalue<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let pt = rho.as_operator().partial_transpose_right(2, 2)?;
    Ok(eigvals_hermitian(&pt)?.last().copied().unwrap_or_else(T::zero))
}

/// Peres–Horodecki test of the one-parameter reduced state; exact for two qubits.
pub fn separability_check<T: Real>(c: T, epsilon: T) -> Result<bool> {
    let rho = reduced_ab_state(&v_matrix_one_param(c, epsilon)?)?;
    Ok(min_partial_transpose_eigenvalue(&rho)? >= -T::check_tol())
}
