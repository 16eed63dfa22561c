use super::{eigvals_hermitian, DensityMatrix};
use crate::error::{QkdError, Result};
use crate::scalar::xlog2x;
use crate::Real;

/// Von Neumann entropy in bits. Eigenvalues at or below the cutoff
/// (1e-12 for `f64`) are dropped.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let values = eigvals_hermitian(rho.as_operator())?;
    Ok(entropy_of_spectrum(&values))
}

pub(crate) fn entropy_of_spectrum<T: Real>(values: &[T]) -> T {
    let cutoff = T::entropy_cutoff();
    let s: T = values.iter().filter(|&&l| l > cutoff).map(|&l| -xlog2x(l)).sum();
    s.max(T::zero())
}

/// Holevo quantity `χ = S(Σ pᵢρᵢ) − Σ pᵢ S(ρᵢ)` in bits.
pub fn holevo<T: Real>(states: &[DensityMatrix<T>], priors: &[T]) -> Result<T> {
    if states.is_empty() {
        return Err(QkdError::InvalidPriors("no states".into()));
    }
    if states.len() != priors.len() {
        return Err(QkdError::InvalidPriors(format!("{} priors for {} states", priors.len(), states.len())));
    }
    let dim = states[0].dim();
    if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
        return Err(QkdError::DimensionMismatch { expected: dim, got: bad.dim() });
    }
    if priors.iter().any(|p| !(*p >= T::zero())) {
        return Err(QkdError::InvalidPriors("negative or NaN prior".into()));
    }
    let total: T = priors.iter().copied().sum();
    if (total - T::one()).abs() > T::check_tol() * T::lit(1e-2) {
        return Err(QkdError::InvalidPriors(format!("priors sum to {total}")));
    }

    let average = states.iter().zip(priors).map(|(s, &p)| s.as_operator().scale_real(p)).sum::<super::Operator<T>>();
    let s_avg = entropy_of_spectrum(&eigvals_hermitian(&average)?);
    let mut s_cond = T::zero();
    for (s, &p) in states.iter().zip(priors) {
        if p > T::zero() {
            s_cond = s_cond + p * von_neumann_entropy(s)?;
        }
    }
    Ok((s_avg - s_cond).max(T::zero()))
}
