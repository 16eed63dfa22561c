use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex;

use super::Operator;
use crate::error::{QkdError, Result};
use crate::Real;

/// Column vector of complex amplitudes.
///
/// Kets are not normalized implicitly. Several constructions in the
/// security analysis rely on the squared norm carrying a probability weight,
/// so [`Ket::normalized`] has to be called explicitly where a unit vector is
/// wanted.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> Ket<T> {
    pub fn new(amps: Vec<Complex<T>>) -> Self {
        Self { amps }
    }

    pub fn from_real(amps: &[T]) -> Self {
        Self { amps: amps.iter().map(|&a| Complex::new(a, T::zero())).collect() }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { amps: vec![Complex::new(T::zero(), T::zero()); dim] }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut k = Self::zeros(dim);
        k.amps[index] = Complex::new(T::one(), T::zero());
        k
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Ket<T>) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(QkdError::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &Ket<T>) -> Complex<T> {
        self.amps.iter().zip(&other.amps).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Unit vector along `self`; the zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == T::zero() {
            return self.clone();
        }
        self.scale(Complex::new(T::one() / n, T::zero()))
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self { amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    pub fn tensor(&self, other: &Ket<T>) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Ket<T>) -> Operator<T> {
        assert_eq!(self.dim(), other.dim(), "ket dimension mismatch");
        Operator::from_fn(self.dim(), |i, j| self.amps[i] * other.amps[j].conj())
    }

    /// `|self⟩⟨self|`, keeping the squared norm as weight.
    pub fn projector(&self) -> Operator<T> {
        self.outer(self)
    }

    pub fn max_abs_diff(&self, other: &Ket<T>) -> T {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }
}

impl<T> Index<usize> for Ket<T> {
    type Output = Complex<T>;
    fn index(&self, i: usize) -> &Complex<T> {
        &self.amps[i]
    }
}

impl<T: Real> Add for &Ket<T> {
    type Output = Ket<T>;
    fn add(self, rhs: &Ket<T>) -> Ket<T> {
        assert_eq!(self.dim(), rhs.dim(), "ket dimension mismatch");
        Ket { amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &Ket<T> {
    type Output = Ket<T>;
    fn sub(self, rhs: &Ket<T>) -> Ket<T> {
        assert_eq!(self.dim(), rhs.dim(), "ket dimension mismatch");
        Ket { amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a - b).collect() }
    }
}

impl<T: Real> Neg for &Ket<T> {
    type Output = Ket<T>;
    fn neg(self) -> Ket<T> {
        Ket { amps: self.amps.iter().map(|a| -a).collect() }
    }
}

impl<T: Real> Mul<Complex<T>> for &Ket<T> {
    type Output = Ket<T>;
    fn mul(self, rhs: Complex<T>) -> Ket<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Mul<T> for &Ket<T> {
    type Output = Ket<T>;
    fn mul(self, rhs: T) -> Ket<T> {
        self.scale(Complex::new(rhs, T::zero()))
    }
}
