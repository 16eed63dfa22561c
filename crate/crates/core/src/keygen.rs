//! Two-way generation of the dual raw key (a bit key and a trit key) and
//! the analytic rates and error probabilities that go with it.
//!
//! Alice picks two unused slots in which her letters differ and publishes
//! them in order. Bob answers with either "same letter twice" (trit case)
//! or the unordered set of his two letters (bit case). In the trit case the
//! key letter is Bob's repeated letter, which Alice takes to be the one
//! missing from her pair. In the bit case bit 0 stands for Bob's letters in
//! alphabetical order; Alice recovers the order as the unique one in which
//! neither of Bob's letters coincides with hers in the same slot.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::channel::TransmissionRecord;
use crate::error::{check_epsilon, Result};
use crate::scalar::xlog2x;
use crate::trine::{joint_probabilities, TrineLetter};
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KeyCase {
    Bit,
    Trit,
}

impl KeyCase {
    pub const BOTH: [KeyCase; 2] = [KeyCase::Bit, KeyCase::Trit];

    pub fn as_str(self) -> &'static str {
        match self {
            KeyCase::Bit => "bit",
            KeyCase::Trit => "trit",
        }
    }
}

/// Bob's public answer to a slot pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Declaration {
    Same,
    /// `set` is alphabetical; `zero` is the ordered pair that encodes bit 0.
    Different {
        set: (TrineLetter, TrineLetter),
        zero: (TrineLetter, TrineLetter),
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Announcement {
    /// 0-based slot indices in Alice's chosen order.
    pub slots: (usize, usize),
    pub declaration: Declaration,
}

#[derive(Serialize)]
struct AnnouncementLine {
    slots: [usize; 2],
    kind: &'static str,
    set: Option<String>,
    zero: Option<String>,
}

impl Announcement {
    /// One JSON line; slots are numbered from 1 as in the record CSV.
    pub fn to_json_line(&self) -> String {
        let pair = |(a, b): (TrineLetter, TrineLetter)| format!("{a}{b}");
        let line = match self.declaration {
            Declaration::Same => {
                AnnouncementLine { slots: [self.slots.0 + 1, self.slots.1 + 1], kind: "same", set: None, zero: None }
            }
            Declaration::Different { set, zero } => AnnouncementLine {
                slots: [self.slots.0 + 1, self.slots.1 + 1],
                kind: "diff",
                set: Some(pair(set)),
                zero: Some(pair(zero)),
            },
        };
        serde_json::to_string(&line).expect("announcement serializes")
    }
}

/// One party's bit key and trit key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyStreams {
    pub bit_key: Vec<u8>,
    pub trit_key: Vec<TrineLetter>,
}

impl KeyStreams {
    pub fn write_bits<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let s: String = self.bit_key.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect();
        w.write_all(s.as_bytes())
    }

    pub fn write_trits<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let s: String = self.trit_key.iter().map(|t| t.as_char()).collect();
        w.write_all(s.as_bytes())
    }
}

/// Result of running the key-generation dialogue over a record.
#[derive(Clone, Debug, Default)]
pub struct DualKey {
    pub alice: KeyStreams,
    pub bob: KeyStreams,
    pub announcements: Vec<Announcement>,
}

impl DualKey {
    pub fn write_announcements<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for a in &self.announcements {
            writeln!(w, "{}", a.to_json_line())?;
        }
        Ok(())
    }
}

/// Greedy pairing: the earliest unused slot is matched with the next unused
/// slot whose Alice letter differs. Unmatched slots are dropped.
pub fn pair_slots(record: &TransmissionRecord) -> Vec<(usize, usize)> {
    // Pending slots always share one letter, else they would have been paired.
    let mut pending = std::collections::VecDeque::new();
    let mut pending_letter = None;
    let mut pairs = Vec::with_capacity(record.len() / 2);
    for (slot, &letter) in record.alice().iter().enumerate() {
        match pending_letter {
            Some(l) if l != letter => {
                let first = pending.pop_front().expect("pending letter implies a pending slot");
                pairs.push((first, slot));
                if pending.is_empty() {
                    pending_letter = None;
                }
            }
            _ => {
                pending.push_back(slot);
                pending_letter = Some(letter);
            }
        }
    }
    pairs
}

fn alphabetical(a: TrineLetter, b: TrineLetter) -> (TrineLetter, TrineLetter) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Bob's ordering as Alice reconstructs it from her ordered pair and Bob's
/// announced letter set: the order with no same-slot coincidence.
pub fn infer_bob_order(
    alice: (TrineLetter, TrineLetter),
    set: (TrineLetter, TrineLetter),
) -> (TrineLetter, TrineLetter) {
    let (j, k) = set;
    if j != alice.0 && k != alice.1 {
        (j, k)
    } else {
        (k, j)
    }
}

/// Runs the announcement dialogue over the greedy slot pairs.
pub fn generate_keys(record: &TransmissionRecord) -> DualKey {
    let mut out = DualKey::default();
    let (alice, bob) = (record.alice(), record.bob());
    for (s1, s2) in pair_slots(record) {
        let a = (alice[s1], alice[s2]);
        let b = (bob[s1], bob[s2]);
        let declaration = if b.0 == b.1 {
            out.bob.trit_key.push(b.0);
            out.alice.trit_key.push(TrineLetter::third(a.0, a.1));
            Declaration::Same
        } else {
            let zero = alphabetical(b.0, b.1);
            let bit_of = |order: (TrineLetter, TrineLetter)| u8::from(order != zero);
            out.bob.bit_key.push(bit_of(b));
            out.alice.bit_key.push(bit_of(infer_bob_order(a, zero)));
            Declaration::Different { set: zero, zero }
        };
        out.announcements.push(Announcement { slots: (s1, s2), declaration });
    }
    out
}

/// `(p_trit, p_bit)`: probabilities that a slot pair feeds the trit or bit key.
pub fn case_probabilities<T: Real>(epsilon: T) -> Result<(T, T)> {
    check_epsilon(epsilon)?;
    let three = T::lit(3.0);
    let twelve = T::lit(12.0);
    let p_trit = (three - epsilon) * (T::one() + epsilon) / twelve;
    let p_bit = ((three - epsilon).powi(2) + T::lit(4.0) * epsilon) / twelve;
    Ok((p_trit, p_bit))
}

/// Per-outcome probabilities of the key-symbol pairs within each case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolErrorRates<T> {
    /// Each of the 3 matching trit pairs.
    pub trit_correct: T,
    /// Each of the 6 mismatched trit pairs.
    pub trit_wrong: T,
    /// Each of the 2 matching bit pairs.
    pub bit_correct: T,
    /// Each of the 2 mismatched bit pairs.
    pub bit_wrong: T,
}

pub fn symbol_error_rates<T: Real>(epsilon: T) -> Result<SymbolErrorRates<T>> {
    check_epsilon(epsilon)?;
    let three = T::lit(3.0);
    let nine_plus = T::lit(9.0) * (T::one() + epsilon);
    let d = (three - epsilon).powi(2) + T::lit(4.0) * epsilon;
    Ok(SymbolErrorRates {
        trit_correct: (three - epsilon) / nine_plus,
        trit_wrong: T::lit(2.0) * epsilon / nine_plus,
        bit_correct: (three - epsilon).powi(2) / (T::lit(2.0) * d),
        bit_wrong: T::lit(2.0) * epsilon / d,
    })
}

/// Alice–Bob mutual information per key symbol, in bits.
pub fn mutual_information<T: Real>(epsilon: T, case: KeyCase) -> Result<T> {
    check_epsilon(epsilon)?;
    let three = T::lit(3.0);
    let weighted = |w: T, arg: T| if w == T::zero() { T::zero() } else { w * arg.log2() };
    Ok(match case {
        KeyCase::Trit => {
            let den = three + three * epsilon;
            weighted((three - epsilon) / den, (three - epsilon) / (T::one() + epsilon))
                + weighted(T::lit(4.0) * epsilon / den, T::lit(2.0) * epsilon / (T::one() + epsilon))
        }
        KeyCase::Bit => {
            let sq = (three - epsilon).powi(2);
            let d = sq + T::lit(4.0) * epsilon;
            weighted(sq / d, T::lit(2.0) * sq / d) + weighted(T::lit(4.0) * epsilon / d, T::lit(8.0) * epsilon / d)
        }
    })
}

/// Key bits per transmitted qubit pair: `½(p_trit I_trit + p_bit I_bit)`.
pub fn key_rate<T: Real>(epsilon: T) -> Result<T> {
    let (p_trit, p_bit) = case_probabilities(epsilon)?;
    let half = T::lit(0.5);
    Ok(half
        * (p_trit * mutual_information(epsilon, KeyCase::Trit)? + p_bit * mutual_information(epsilon, KeyCase::Bit)?))
}

/// Mutual information of the single-slot joint table.
pub fn shannon_limit<T: Real>(epsilon: T) -> Result<T> {
    Ok(plugin_mutual_information(&joint_probabilities(epsilon)?))
}

/// Plug-in mutual information of a (not necessarily normalized) joint table, in bits.
pub fn plugin_mutual_information<T: Real, const A: usize, const B: usize>(table: &[[T; B]; A]) -> T {
    let total: T = table.iter().flatten().copied().sum();
    if total <= T::zero() {
        return T::zero();
    }
    let p = table.map(|row| row.map(|x| x / total));
    let row: Vec<T> = p.iter().map(|r| r.iter().copied().sum()).collect();
    let col: Vec<T> = (0..B).map(|j| p.iter().map(|r| r[j]).sum()).collect();
    let h = |xs: &mut dyn Iterator<Item = T>| -> T { xs.map(|x| -xlog2x(x)).sum() };
    h(&mut row.iter().copied()) + h(&mut col.iter().copied()) - h(&mut p.iter().flatten().copied())
}

/// Counts gathered from one key-generation run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeyStatistics {
    pub pairs: usize,
    /// `[alice][bob]` trit-symbol counts.
    pub trit_counts: [[usize; 3]; 3],
    /// `[alice][bob]` bit-symbol counts.
    pub bit_counts: [[usize; 2]; 2],
}

impl KeyStatistics {
    pub fn from_keys(keys: &DualKey) -> Self {
        let mut stats = Self { pairs: keys.announcements.len(), ..Self::default() };
        for (a, b) in keys.alice.trit_key.iter().zip(&keys.bob.trit_key) {
            stats.trit_counts[a.index()][b.index()] += 1;
        }
        for (&a, &b) in keys.alice.bit_key.iter().zip(&keys.bob.bit_key) {
            stats.bit_counts[a as usize][b as usize] += 1;
        }
        stats
    }

    pub fn trit_total(&self) -> usize {
        self.trit_counts.iter().flatten().sum()
    }

    pub fn bit_total(&self) -> usize {
        self.bit_counts.iter().flatten().sum()
    }

    pub fn trit_errors(&self) -> usize {
        self.trit_total() - (0..3).map(|i| self.trit_counts[i][i]).sum::<usize>()
    }

    pub fn bit_errors(&self) -> usize {
        self.bit_counts[0][1] + self.bit_counts[1][0]
    }

    pub fn empirical_mutual_information(&self, case: KeyCase) -> f64 {
        let to_f = |c: usize| c as f64;
        match case {
            KeyCase::Trit => plugin_mutual_information(&self.trit_counts.map(|r| r.map(to_f))),
            KeyCase::Bit => plugin_mutual_information(&self.bit_counts.map(|r| r.map(to_f))),
        }
    }
}
