use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use super::Ket;
use crate::error::{QkdError, Result};
use crate::Real;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(
            dim,
            |i, j| if i == j { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) },
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(QkdError::DimensionMismatch { expected: dim, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    pub fn matmul(&self, rhs: &Operator<T>) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(QkdError::DimensionMismatch { expected: self.dim, got: rhs.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, ket: &Ket<T>) -> Result<Ket<T>> {
        if self.dim != ket.dim() {
            return Err(QkdError::DimensionMismatch { expected: self.dim, got: ket.dim() });
        }
        let n = self.dim;
        Ok(Ket::new(
            (0..n)
                .map(|i| (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + self.data[i * n + j] * ket[j]))
                .collect(),
        ))
    }

    /// `⟨bra| self |ket⟩`.
    pub fn expectation(&self, bra: &Ket<T>, ket: &Ket<T>) -> Result<Complex<T>> {
        bra.inner(&self.apply(ket)?)
    }

    pub fn tensor(&self, rhs: &Operator<T>) -> Self {
        let (m, n) = (self.dim, rhs.dim);
        Self::from_fn(m * n, |i, j| self[(i / n, j / n)] * rhs[(i % n, j % n)])
    }

    /// `U self U†`.
    pub fn conjugate_by(&self, u: &Operator<T>) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Operator<T>) -> Result<Self> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Operator<T>) -> T {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_deviation(&self) -> T {
        let n = self.dim;
        let mut dev = T::zero();
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `‖U†U − 1‖_max`.
    pub fn unitarity_deviation(&self) -> T {
        match self.adjoint().matmul(self) {
            Ok(p) => p.max_abs_diff(&Self::identity(self.dim)),
            Err(_) => T::infinity(),
        }
    }

    /// Traces out the second factor of a `left_dim ⊗ right_dim` space.
    pub fn partial_trace_right(&self, left_dim: usize, right_dim: usize) -> Result<Self> {
        if left_dim * right_dim != self.dim {
            return Err(QkdError::DimensionMismatch { expected: self.dim, got: left_dim * right_dim });
        }
        Ok(Self::from_fn(left_dim, |i, j| {
            (0..right_dim)
                .fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + self[(i * right_dim + k, j * right_dim + k)])
        }))
    }

    /// Transposes the second factor of a `left_dim ⊗ right_dim` space.
    pub fn partial_transpose_right(&self, left_dim: usize, right_dim: usize) -> Result<Self> {
        if left_dim * right_dim != self.dim {
            return Err(QkdError::DimensionMismatch { expected: self.dim, got: left_dim * right_dim });
        }
        Ok(Self::from_fn(self.dim, |r, c| {
            let (a, b) = (r / right_dim, r % right_dim);
            let (a2, b2) = (c / right_dim, c % right_dim);
            self[(a * right_dim + b2, a2 * right_dim + b)]
        }))
    }

    pub(crate) fn data(&self) -> &[Complex<T>] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for Operator<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Operator<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Operator { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Operator { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: &Operator<T>) -> Operator<T> {
        self.matmul(rhs).expect("operator dimension mismatch")
    }
}

impl<T: Real> std::iter::Sum for Operator<T> {
    /// Panics on an empty iterator; the dimension is taken from the first term.
    fn sum<I: Iterator<Item = Operator<T>>>(mut iter: I) -> Self {
        let first = iter.next().expect("sum of zero operators has no dimension");
        iter.fold(first, |acc, x| &acc + &x)
    }
}

/// Pauli matrices in the storage basis.
pub mod pauli {
    use num_complex::Complex;

    use super::Operator;
    use crate::Real;

    fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
        Complex::new(T::lit(re), T::lit(im))
    }

    pub fn sigma_x<T: Real>() -> Operator<T> {
        Operator::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap()
    }

    pub fn sigma_y<T: Real>() -> Operator<T> {
        Operator::from_rows(&[vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]).unwrap()
    }

    pub fn sigma_z<T: Real>() -> Operator<T> {
        Operator::from_rows(&[vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]]).unwrap()
    }
}
