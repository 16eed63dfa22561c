use serde::{Deserialize, Serialize};

use crate::error::{check_epsilon, QkdError, Result};
use crate::keygen::{mutual_information, KeyCase};
use crate::qmath::holevo;
use crate::search::{bisect_sign_change, golden_section_max};
use crate::trine::TrineLetter;
use crate::Real;

use super::conditioned::{conditioned_state, Hypothesis};
use super::{v_matrix_one_param, AncillaFamily, Side};

/// Coarse grid intervals before golden-section refinement of `c`.
pub const C_GRID_INTERVALS: usize = 64;
/// Golden-section stopping width in `c`.
pub const C_TOL: f64 = 1e-6;
/// Bracket and tolerance for the threshold bisection in `ε`.
pub const THRESHOLD_BRACKET: (f64, f64) = (0.01, 0.5);
pub const THRESHOLD_TOL: f64 = 1e-4;

/// Hypotheses Eve must tell apart: `jk` vs `kj` after Bob announces `{j, k}`,
/// or the three trit letters.
pub fn hypothesis_set(case: KeyCase, bit_pair: (TrineLetter, TrineLetter)) -> Vec<Hypothesis> {
    match case {
        KeyCase::Bit => vec![Hypothesis::Bit(bit_pair.0, bit_pair.1), Hypothesis::Bit(bit_pair.1, bit_pair.0)],
        KeyCase::Trit => TrineLetter::ALL.iter().map(|&j| Hypothesis::Trit(j)).collect(),
    }
}

/// Holevo bound on Eve's information about one key symbol, with uniform
/// priors over `hypotheses`.
pub fn holevo_for_hypotheses<T: Real>(family: &AncillaFamily<T>, hypotheses: &[Hypothesis], side: Side) -> Result<T> {
    let states =
        hypotheses.iter().map(|&h| conditioned_state(family, h, side).map(|s| s.state)).collect::<Result<Vec<_>>>()?;
    let prior = T::one() / T::from_usize(states.len()).unwrap();
    holevo(&states, &vec![prior; states.len()])
}

/// Same as [`holevo_for_hypotheses`] but with priors taken from the
/// unnormalized traces of the conditioned states.
pub fn holevo_with_trace_priors<T: Real>(
    family: &AncillaFamily<T>,
    hypotheses: &[Hypothesis],
    side: Side,
) -> Result<(T, Vec<T>)> {
    let conditioned = hypotheses.iter().map(|&h| conditioned_state(family, h, side)).collect::<Result<Vec<_>>>()?;
    let total: T = conditioned.iter().map(|s| s.weight).sum();
    let priors: Vec<T> = conditioned.iter().map(|s| s.weight / total).collect();
    let states: Vec<_> = conditioned.into_iter().map(|s| s.state).collect();
    Ok((holevo(&states, &priors)?, priors))
}

/// Eve's Holevo bound for an arbitrary ancilla family.
pub fn eve_holevo_family<T: Real>(family: &AncillaFamily<T>, case: KeyCase, side: Side) -> Result<T> {
    holevo_for_hypotheses(family, &hypothesis_set(case, (TrineLetter::A, TrineLetter::B)), side)
}

/// Eve's Holevo bound for the one-parameter family `V(c)` at noise `ε`.
pub fn eve_holevo<T: Real>(c: T, epsilon: T, case: KeyCase, side: Side) -> Result<T> {
    eve_holevo_family(&v_matrix_one_param(c, epsilon)?, case, side)
}

/// Maximizes [`eve_holevo`] over `c ∈ [0, 2ε]`: a 65-point grid, then
/// golden-section refinement around the best grid point. Returns `(c*, χ*)`.
pub fn optimize_c<T: Real>(epsilon: T, case: KeyCase, side: Side) -> Result<(T, T)> {
    check_epsilon(epsilon)?;
    let c_max = T::lit(2.0) * epsilon;
    let chi = |c: T| eve_holevo(c.max(T::zero()).min(c_max), epsilon, case, side);
    if c_max == T::zero() {
        return Ok((T::zero(), chi(T::zero())?));
    }
    let n = C_GRID_INTERVALS;
    let step = c_max / T::from_usize(n).unwrap();
    let mut best = (0usize, T::neg_infinity());
    for i in 0..=n {
        let value = chi(step * T::from_usize(i).unwrap())?;
        if value > best.1 {
            best = (i, value);
        }
    }
    let (i, grid_value) = best;
    let lo = step * T::from_usize(i.saturating_sub(1)).unwrap();
    let hi = (step * T::from_usize(i + 1).unwrap()).min(c_max);
    let (c_ref, v_ref) = golden_section_max(chi, lo, hi, T::lit(C_TOL))?;
    Ok(if v_ref >= grid_value { (c_ref, v_ref) } else { (step * T::from_usize(i).unwrap(), grid_value) })
}

/// Noise level at which Eve's optimized bound meets Alice–Bob information.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub case: KeyCase,
    pub side: Side,
    pub epsilon_star: f64,
    /// `I_case(ε*)`, equal to `χ*(ε*)` at the crossing.
    pub info: f64,
    pub c_star: f64,
}

/// `χ*(ε) − I_case(ε)`: negative while a key can be distilled.
pub fn security_margin<T: Real>(epsilon: T, case: KeyCase, side: Side) -> Result<T> {
    Ok(optimize_c(epsilon, case, side)?.1 - mutual_information(epsilon, case)?)
}

/// Bisection for `χ*(ε) = I_case(ε)` on `[0.01, 0.5]` to `|Δε| < 1e-4`.
pub fn threshold<T: Real>(case: KeyCase, side: Side) -> Result<ThresholdResult> {
    threshold_in::<T>(case, side, THRESHOLD_BRACKET, THRESHOLD_TOL)
}

pub fn threshold_in<T: Real>(case: KeyCase, side: Side, bracket: (f64, f64), tol: f64) -> Result<ThresholdResult> {
    let (lo, hi) = (T::lit(bracket.0), T::lit(bracket.1));
    let f = |e: T| security_margin(e, case, side);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if !(f_lo < T::zero() && f_hi > T::zero()) {
        return Err(QkdError::NoBracket { lo: bracket.0, hi: bracket.1, f_lo: f_lo.as_f64(), f_hi: f_hi.as_f64() });
    }
    let (a, b) = bisect_sign_change(f, lo, hi, T::lit(tol))?;
    let eps = (a + b) / T::lit(2.0);
    let (c_star, _) = optimize_c(eps, case, side)?;
    Ok(ThresholdResult {
        case,
        side,
        epsilon_star: eps.as_f64(),
        info: mutual_information(eps, case)?.as_f64(),
        c_star: c_star.as_f64(),
    })
}
