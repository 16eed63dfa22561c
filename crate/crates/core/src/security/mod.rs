//! Eavesdropper analysis: ancilla families, conditioned two-ancilla states,
//! Holevo bounds, the optimization over `c` and the noise thresholds.

mod ancilla;
mod bounds;
pub mod conditioned;
mod entanglement;

use serde::{Deserialize, Serialize};

pub use ancilla::{
    pauli_expectation, reduced_ab_state, reduced_ab_state_by_partial_trace, v_matrix_general, v_matrix_one_param,
    AncillaFamily, GeneralVParams, OneParamV, SignalPauli,
};
pub use bounds::{
    eve_holevo, eve_holevo_family, holevo_for_hypotheses, holevo_with_trace_priors, hypothesis_set, optimize_c,
    security_margin, threshold, threshold_in, ThresholdResult, C_GRID_INTERVALS, C_TOL, THRESHOLD_BRACKET,
    THRESHOLD_TOL,
};
pub use conditioned::{conditioned_state, conditioned_states, ConditionedState, Hypothesis};
pub use entanglement::{concurrence, min_partial_transpose_eigenvalue, separability_check};

/// Whose key symbol Eve is trying to learn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alice,
    Bob,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Alice, Side::Bob];

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Alice => "alice",
            Side::Bob => "bob",
        }
    }
}
