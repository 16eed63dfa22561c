//! Double-trine quantum key distribution with reference-frame-free qubits.
//!
//! * [`qmath`]: small dense complex linear algebra, entropy and Holevo χ.
//! * [`trine`]: trine kets, the RFF operators `W_i`, the trine POM.
//! * [`channel`]: noisy common-source state and seeded transmission records.
//! * [`keygen`]: the two-way dual-key (bit key + trit key) dialogue and its rates.
//! * [`security`]: Eve's ancilla families, conditioned states and noise thresholds.
//! * [`curves`]: ε sweeps and the CSV/JSON report formats.
//! * [`verify`]: the structural self-check suite.
//!
//! All numerics are generic over [`Real`] (`f64` and `f32`); the `*64`
//! aliases below name the `f64` instantiations used by the CLI.

// `!(x <= tol)` style guards are there to reject NaN; index loops mirror the matrix formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod channel;
pub mod curves;
pub mod error;
pub mod keygen;
pub mod qmath;
mod scalar;
pub mod search;
pub mod security;
pub mod trine;
pub mod verify;

pub use error::{QkdError, Result};
pub use keygen::KeyCase;
pub use scalar::Real;
pub use security::Side;
pub use trine::TrineLetter;

pub type Ket64 = qmath::Ket<f64>;
pub type Operator64 = qmath::Operator<f64>;
pub type DensityMatrix64 = qmath::DensityMatrix<f64>;
pub type AncillaFamily64 = security::AncillaFamily<f64>;
pub type GeneralVParams64 = security::GeneralVParams<f64>;
pub type JointTable64 = trine::JointTable<f64>;

pub type Ket32 = qmath::Ket<f32>;
pub type Operator32 = qmath::Operator<f32>;
pub type DensityMatrix32 = qmath::DensityMatrix<f32>;
