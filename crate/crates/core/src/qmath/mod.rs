//! Dense complex linear algebra for the handful of small Hilbert spaces the
//! protocol lives in (dimensions 2 to 16).

mod eigen;
mod entropy;
mod haar;
mod ket;
mod operator;

pub use eigen::{eig_hermitian, eigvals_hermitian, EigenDecomposition};
pub use entropy::{holevo, von_neumann_entropy};
pub use haar::haar_random_su2;
pub use ket::Ket;
pub use operator::{pauli, Operator};

use crate::error::{QkdError, Result};
use crate::Real;

/// A ket or an operator, for the kind-checked [`tensor`].
#[derive(Clone, Debug, PartialEq)]
pub enum QObj<T> {
    Ket(Ket<T>),
    Operator(Operator<T>),
}

/// Kronecker product of two objects of the same kind.
pub fn tensor<T: Real>(a: &QObj<T>, b: &QObj<T>) -> Result<QObj<T>> {
    match (a, b) {
        (QObj::Ket(x), QObj::Ket(y)) => Ok(QObj::Ket(x.tensor(y))),
        (QObj::Operator(x), QObj::Operator(y)) => Ok(QObj::Operator(x.tensor(y))),
        _ => Err(QkdError::KindMismatch),
    }
}

/// Hermitian, positive-semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    op: Operator<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity, unit trace and `λ_min ≥ −tol`.
    pub fn new(op: Operator<T>) -> Result<Self> {
        let tol = T::check_tol();
        let dev = op.hermiticity_deviation();
        if !(dev <= tol) {
            return Err(QkdError::InvalidDensityMatrix(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = op.trace();
        if (tr.re - T::one()).abs() > tol * T::lit(1e-2) || tr.im.abs() > tol {
            return Err(QkdError::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let min = eigvals_hermitian(&op)?.last().copied().unwrap_or_else(T::zero);
        if min < -tol {
            return Err(QkdError::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { op })
    }

    /// Divides a positive operator by its trace.
    pub fn from_unnormalized(op: Operator<T>) -> Result<Self> {
        let tr = op.trace().re;
        if !(tr > T::zero()) {
            return Err(QkdError::InvalidDensityMatrix(format!("non-positive trace {tr}")));
        }
        Self::new(op.scale_real(T::one() / tr))
    }

    /// Wraps without validation; callers guarantee the invariants.
    pub(crate) fn new_unchecked(op: Operator<T>) -> Self {
        Self { op }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { op: Operator::identity(dim).scale_real(T::one() / T::from_usize(dim).unwrap()) }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn into_operator(self) -> Operator<T> {
        self.op
    }

    /// `tr(ρ M)`, real part.
    pub fn expectation(&self, m: &Operator<T>) -> Result<T> {
        Ok(self.op.matmul(m)?.trace().re)
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        eigvals_hermitian(&self.op)
    }
}
