use thiserror::Error;

#[derive(Debug, Error)]
pub enum QkdError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operand kind mismatch: cannot combine a ket with an operator")]
    KindMismatch,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid prior distribution: {0}")]
    InvalidPriors(String),

    #[error("noise parameter epsilon = {0} is outside [0, 1]")]
    EpsilonOutOfRange(f64),

    #[error("ancilla parameter c = {c} is outside [0, 2 epsilon] = [0, {max}]")]
    COutOfRange { c: f64, max: f64 },

    #[error("ancilla constraints violated: normalization residual {normalization:e}, singlet residual {singlet:e}")]
    ConstraintViolation { normalization: f64, singlet: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("record is empty")]
    EmptyRecord,

    #[error("record sides have different lengths ({alice} vs {bob})")]
    RecordLengthMismatch { alice: usize, bob: usize },

    #[error("invalid trine letter {0:?}")]
    InvalidLetter(String),

    #[error("no sign change of chi* - I on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = QkdError> = std::result::Result<T, E>;

pub(crate) fn check_epsilon<T: crate::Real>(epsilon: T) -> Result<()> {
    if epsilon.is_nan() || epsilon < T::zero() || epsilon > T::one() {
        return Err(QkdError::EpsilonOutOfRange(epsilon.as_f64()));
    }
    Ok(())
}
