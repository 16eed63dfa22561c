//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the linear algebra and the security analysis
/// are written against.
///
/// The associated tolerances scale the structural checks (hermiticity,
/// trace, Gram constraints) to the precision of the type, so the same code
/// validates `f64` at ~1e-10 and `f32` at ~1e-4.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Tolerance used when validating inputs (hermiticity, unit trace, constraints).
    const CHECK_TOL: f64;
    /// Eigenvalues at or below this are dropped before `λ log λ`.
    const ENTROPY_CUTOFF: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn check_tol() -> Self {
        Self::lit(Self::CHECK_TOL)
    }

    #[inline]
    fn entropy_cutoff() -> Self {
        Self::lit(Self::ENTROPY_CUTOFF)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const CHECK_TOL: f64 = 1e-10;
    const ENTROPY_CUTOFF: f64 = 1e-12;
}

impl Real for f32 {
    const CHECK_TOL: f64 = 1e-4;
    const ENTROPY_CUTOFF: f64 = 1e-6;
}

/// `x log₂ x` with the convention `0 log 0 = 0`.
pub fn xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}
