//! Common-source channel with unbiased noise, and seeded transmission records.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_epsilon, QkdError, Result};
use crate::qmath::{DensityMatrix, Ket, Operator};
use crate::trine::{joint_probabilities, JointTable, TrineLetter};
use crate::Real;

/// Fraction `ε ∈ [0, 1]` of unbiased noise mixed into the singlet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel<T> {
    epsilon: T,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(epsilon: T) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn state(&self) -> DensityMatrix<T> {
        source_state(self.epsilon).expect("validated epsilon")
    }
}

/// `|s⟩ = (|+−⟩ − |−+⟩)/√2` in the `(|++⟩, |+−⟩, |−+⟩, |−−⟩)` basis.
pub fn singlet<T: Real>() -> Ket<T> {
    &(&Ket::basis(4, 1) - &Ket::basis(4, 2)) * T::FRAC_1_SQRT_2()
}

/// `ρ_ε = (1−ε)|s⟩⟨s| + ε/4`.
pub fn source_state<T: Real>(epsilon: T) -> Result<DensityMatrix<T>> {
    check_epsilon(epsilon)?;
    let pure = singlet::<T>().projector().scale_real(T::one() - epsilon);
    let noise = Operator::identity(4).scale_real(epsilon / T::lit(4.0));
    Ok(DensityMatrix::new_unchecked(&pure + &noise))
}

/// Alice's and Bob's trine outcomes, slot by slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransmissionRecord {
    alice: Vec<TrineLetter>,
    bob: Vec<TrineLetter>,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    slot: usize,
    alice: char,
    bob: char,
}

impl TransmissionRecord {
    pub fn new(alice: Vec<TrineLetter>, bob: Vec<TrineLetter>) -> Result<Self> {
        if alice.len() != bob.len() {
            return Err(QkdError::RecordLengthMismatch { alice: alice.len(), bob: bob.len() });
        }
        Ok(Self { alice, bob })
    }

    /// Parses two letter strings such as `"ACCBBAC"`.
    pub fn from_letters(alice: &str, bob: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<Vec<TrineLetter>> {
            s.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| TrineLetter::from_char(c).ok_or_else(|| QkdError::InvalidLetter(c.to_string())))
                .collect()
        };
        Self::new(parse(alice)?, parse(bob)?)
    }

    pub fn len(&self) -> usize {
        self.alice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alice.is_empty()
    }

    pub fn alice(&self) -> &[TrineLetter] {
        &self.alice
    }

    pub fn bob(&self) -> &[TrineLetter] {
        &self.bob
    }

    /// `(alice, bob)` for each slot.
    pub fn slots(&self) -> impl Iterator<Item = (TrineLetter, TrineLetter)> + '_ {
        self.alice.iter().copied().zip(self.bob.iter().copied())
    }

    /// CSV with header `slot,alice,bob`; slots are numbered from 1.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (i, (a, b)) in self.slots().enumerate() {
            w.serialize(CsvRow { slot: i + 1, alice: a.as_char(), bob: b.as_char() })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let mut alice = Vec::new();
        let mut bob = Vec::new();
        for row in r.deserialize() {
            let row: CsvRow = row?;
            let letter = |c: char| TrineLetter::from_char(c).ok_or_else(|| QkdError::InvalidLetter(c.to_string()));
            alice.push(letter(row.alice)?);
            bob.push(letter(row.bob)?);
        }
        Self::new(alice, bob)
    }
}

/// Draws `n` i.i.d. letter pairs from the noisy joint table.
///
/// The generator is ChaCha8 seeded with `seed_from_u64(seed)`, so a given
/// seed reproduces the record bit-for-bit within one release.
pub fn sample_record<T: Real>(epsilon: T, n: usize, seed: u64) -> Result<TransmissionRecord> {
    let table = joint_probabilities(epsilon)?;
    let mut cumulative = [0.0f64; 9];
    let mut acc = 0.0;
    for (idx, slot) in cumulative.iter_mut().enumerate() {
        acc += table[idx / 3][idx % 3].as_f64();
        *slot = acc;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alice = Vec::with_capacity(n);
    let mut bob = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.random::<f64>() * acc;
        let idx = cumulative.iter().position(|&c| u < c).unwrap_or(8);
        // Zero-probability cells share their cumulative bound with the previous
        // cell, so `u < c` never selects them.
        alice.push(TrineLetter::ALL[idx / 3]);
        bob.push(TrineLetter::ALL[idx % 3]);
    }
    TransmissionRecord::new(alice, bob)
}

/// Relative frequencies of each `(alice, bob)` letter pair.
pub fn empirical_joint<T: Real>(record: &TransmissionRecord) -> Result<JointTable<T>> {
    if record.is_empty() {
        return Err(QkdError::EmptyRecord);
    }
    let mut counts = [[0usize; 3]; 3];
    for (a, b) in record.slots() {
        counts[a.index()][b.index()] += 1;
    }
    let n = T::from_usize(record.len()).unwrap();
    Ok(counts.map(|row| row.map(|c| T::from_usize(c).unwrap() / n)))
}
