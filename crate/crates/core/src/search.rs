//! Scalar maximization and root bracketing used by the threshold solver.

use crate::Real;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_max<T: Real, E>(
    mut f: impl FnMut(T) -> Result<T, E>,
    mut a: T,
    mut b: T,
    tol: T,
) -> Result<(T, T), E> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Bisection on a bracket where `f(lo) < 0 < f(hi)`; returns the final
/// `(lo, hi)` with `hi − lo < tol`.
pub fn bisect_sign_change<T: Real, E>(
    mut f: impl FnMut(T) -> Result<T, E>,
    mut lo: T,
    mut hi: T,
    tol: T,
) -> Result<(T, T), E> {
    let two = T::lit(2.0);
    while hi - lo >= tol {
        let mid = (lo + hi) / two;
        if f(mid)? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}
