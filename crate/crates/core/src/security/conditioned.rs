//! Two-ancilla states Eve holds, conditioned on a key symbol.
//!
//! A slot pair leaves Eve with `|E_{a₁b₁}⟩ ⊗ |E_{a₂b₂}⟩`, where `aᵢ`/`bᵢ`
//! are Alice's/Bob's letters in the two slots. Each conditioned state is the
//! sum of the projectors on the six product kets that lead to the given key
//! symbol on the attacked side; the kets' norms carry the probabilities, and
//! the sum is divided by its trace at the end.

use crate::error::Result;
use crate::keygen::KeyCase;
use crate::qmath::{DensityMatrix, Operator};
use crate::trine::TrineLetter;
use crate::Real;

use super::{AncillaFamily, Side};

/// `(alice letter, bob letter)` of one slot, as letter indices.
pub type SlotOutcome = (usize, usize);

/// Product ket `|E_{slot1}⟩ ⊗ |E_{slot2}⟩`.
pub type ProductKetLabel = (SlotOutcome, SlotOutcome);

/// Key symbol a conditioned state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// Bob's two letters in this order.
    Bit(TrineLetter, TrineLetter),
    /// Bob's repeated letter.
    Trit(TrineLetter),
}

#[derive(Clone, Debug)]
pub struct ConditionedState<T> {
    pub hypothesis: Hypothesis,
    pub state: DensityMatrix<T>,
    /// Trace before normalization: the probability of this hypothesis
    /// together with its six contributing outcomes.
    pub weight: T,
    pub kets: [ProductKetLabel; 6],
}

/// The six product kets behind one hypothesis.
///
/// With `j, k, l` a permutation of the letters:
/// * bit, Alice concludes `jk`: Alice's ordered pair is one of `kj, kl, lj`
///   and Bob actually holds `jk` or `kj`.
/// * bit, Bob holds `jk`: Alice's ordered pair is any of the six with
///   distinct letters.
/// * trit, Alice concludes `j`: Alice holds `kl` or `lk`; Bob holds any
///   repeated letter.
/// * trit, Bob holds `jj`: Alice holds any of the six distinct pairs.
pub fn hypothesis_kets(hypothesis: Hypothesis, side: Side) -> [ProductKetLabel; 6] {
    match (hypothesis, side) {
        (Hypothesis::Bit(j, k), Side::Alice) => {
            let (j, k) = (j.index(), k.index());
            let l = 3 - j - k;
            [((k, j), (l, k)), ((l, j), (j, k)), ((k, j), (j, k)), ((k, k), (l, j)), ((l, k), (j, j)), ((k, k), (j, j))]
        }
        (Hypothesis::Bit(j, k), Side::Bob) => {
            let (j, k) = (j.index(), k.index());
            let l = 3 - j - k;
            [((k, j), (l, k)), ((l, j), (j, k)), ((k, j), (j, k)), ((l, j), (k, k)), ((j, j), (l, k)), ((j, j), (k, k))]
        }
        (Hypothesis::Trit(j), Side::Alice) => {
            let j = j.index();
            let (k, l) = ((j + 1) % 3, (j + 2) % 3);
            [((k, j), (l, j)), ((l, j), (k, j)), ((k, k), (l, k)), ((l, k), (k, k)), ((k, l), (l, l)), ((l, l), (k, l))]
        }
        (Hypothesis::Trit(j), Side::Bob) => {
            let j = j.index();
            let (k, l) = ((j + 1) % 3, (j + 2) % 3);
            [((k, j), (l, j)), ((l, j), (k, j)), ((j, j), (l, j)), ((l, j), (j, j)), ((j, j), (k, j)), ((k, j), (j, j))]
        }
    }
}

/// All hypotheses of a case: six ordered pairs for bits, three letters for trits.
pub fn all_hypotheses(case: KeyCase) -> Vec<Hypothesis> {
    use TrineLetter::*;
    match case {
        KeyCase::Bit => vec![
            Hypothesis::Bit(A, B),
            Hypothesis::Bit(B, A),
            Hypothesis::Bit(A, C),
            Hypothesis::Bit(C, A),
            Hypothesis::Bit(B, C),
            Hypothesis::Bit(C, B),
        ],
        KeyCase::Trit => vec![Hypothesis::Trit(A), Hypothesis::Trit(B), Hypothesis::Trit(C)],
    }
}

/// Builds the conditioned state for one hypothesis.
pub fn conditioned_state<T: Real>(
    family: &AncillaFamily<T>,
    hypothesis: Hypothesis,
    side: Side,
) -> Result<ConditionedState<T>> {
    let kets = hypothesis_kets(hypothesis, side);
    let dim = family.columns()[0].dim();
    let mut sum = Operator::zeros(dim * dim);
    for &((a1, b1), (a2, b2)) in &kets {
        let v = family.outcome_ket_idx(a1, b1).tensor(family.outcome_ket_idx(a2, b2));
        sum = &sum + &v.projector();
    }
    let weight = sum.trace().re;
    let state = DensityMatrix::from_unnormalized(sum)?;
    Ok(ConditionedState { hypothesis, state, weight, kets })
}

/// Every conditioned state of a case: six for bits, three for trits.
pub fn conditioned_states<T: Real>(
    family: &AncillaFamily<T>,
    case: KeyCase,
    side: Side,
) -> Result<Vec<ConditionedState<T>>> {
    all_hypotheses(case).into_iter().map(|h| conditioned_state(family, h, side)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::security::v_matrix_one_param;
    use std::collections::HashSet;

    #[test]
    fn alice_side_covers_54_of_81_kets() {
        let mut seen = HashSet::new();
        for case in KeyCase::BOTH {
            for h in all_hypotheses(case) {
                for label in hypothesis_kets(h, Side::Alice) {
                    assert!(seen.insert(label), "duplicate {label:?}");
                    let ((a1, _), (a2, _)) = label;
                    assert_ne!(a1, a2, "Alice letter repeated in {label:?}");
                }
            }
        }
        assert_eq!(seen.len(), 54);
    }

    #[test]
    fn bob_side_also_partitions_distinct_alice_pairs() {
        let mut seen = HashSet::new();
        for case in KeyCase::BOTH {
            for h in all_hypotheses(case) {
                for label in hypothesis_kets(h, Side::Bob) {
                    assert!(seen.insert(label));
                    assert_ne!(label.0 .0, label.1 .0);
                }
            }
        }
        assert_eq!(seen.len(), 54);
    }

    #[test]
    fn hypothesis_kets_match_key_rules() {
        // Cross-check the listed kets against the dialogue itself.
        use crate::channel::TransmissionRecord;
        use crate::keygen::generate_keys;
        let letters = TrineLetter::ALL;
        for side in [Side::Alice, Side::Bob] {
            for h in all_hypotheses(KeyCase::Bit).into_iter().chain(all_hypotheses(KeyCase::Trit)) {
                for ((a1, b1), (a2, b2)) in hypothesis_kets(h, side) {
                    let rec = TransmissionRecord::new(vec![letters[a1], letters[a2]], vec![letters[b1], letters[b2]])
                        .unwrap();
                    let keys = generate_keys(&rec);
                    let party = match side {
                        Side::Alice => &keys.alice,
                        Side::Bob => &keys.bob,
                    };
                    match h {
                        Hypothesis::Trit(j) => assert_eq!(party.trit_key, vec![j]),
                        Hypothesis::Bit(j, k) => {
                            let bit = u8::from(j > k);
                            assert_eq!(party.bit_key, vec![bit], "{h:?} {side:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn noiseless_bit_states_coincide() {
        let fam = v_matrix_one_param(0.0, 0.0).unwrap();
        let states = conditioned_states(&fam, KeyCase::Bit, Side::Alice).unwrap();
        for pair in states.chunks(2) {
            assert!(pair[0].state.as_operator().max_abs_diff(pair[1].state.as_operator()) < 1e-12);
        }
    }

    #[test]
    fn trit_states_share_spectrum_and_rank() {
        let fam = v_matrix_one_param(0.1, 0.1).unwrap();
        for side in [Side::Alice, Side::Bob] {
            let states = conditioned_states(&fam, KeyCase::Trit, side).unwrap();
            let spectra: Vec<Vec<f64>> = states.iter().map(|s| s.state.eigenvalues().unwrap()).collect();
            for s in &spectra[1..] {
                for (a, b) in s.iter().zip(&spectra[0]) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
            let rank = spectra[0].iter().filter(|&&l| l > 1e-12).count();
            assert!(rank <= 6);
        }
    }
}
