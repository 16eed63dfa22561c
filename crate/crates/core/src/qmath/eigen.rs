//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` and then applies
//! a real Jacobi rotation, so the full update is the unitary
//!
//! ```text
//! G = [[ c,          s        ],
//!      [ -s e^{-iφ},  c e^{-iφ} ]]     (on rows/cols p, q)
//! ```
//!
//! with `A ← G† A G`. For the dimensions used here (≤ 16) this converges to
//! machine precision in well under 20 sweeps.

use num_complex::Complex;

use super::{Ket, Operator};
use crate::error::{QkdError, Result};
use crate::Real;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with matching unit eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Ket<T>>,
}

impl<T: Real> EigenDecomposition<T> {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> Operator<T> {
        let n = self.values.len();
        let mut out = Operator::zeros(n);
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            out = &out + &v.projector().scale_real(*lam);
        }
        out
    }

    /// Applies `f` to the spectrum: `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> Operator<T> {
        let n = self.values.len();
        let mut out = Operator::zeros(n);
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            out = &out + &v.projector().scale_real(f(*lam));
        }
        out
    }
}

fn check_hermitian<T: Real>(m: &Operator<T>) -> Result<()> {
    let dev = m.hermiticity_deviation();
    if !(dev <= T::check_tol()) {
        return Err(QkdError::NotHermitian { deviation: dev.as_f64() });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian<T: Real>(m: &Operator<T>) -> Result<EigenDecomposition<T>> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut a = m.clone();
    let mut v = Operator::identity(n);
    jacobi(&mut a, Some(&mut v));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = order.iter().map(|&i| Ket::new((0..n).map(|r| v[(r, i)]).collect())).collect();
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, descending. Skips accumulating the eigenvectors.
pub fn eigvals_hermitian<T: Real>(m: &Operator<T>) -> Result<Vec<T>> {
    check_hermitian(m)?;
    let mut a = m.clone();
    jacobi(&mut a, None);
    let mut values: Vec<T> = (0..a.dim()).map(|i| a[(i, i)].re).collect();
    values.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(values)
}

fn off_diagonal_norm_sqr<T: Real>(a: &Operator<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            s = s + a[(i, j)].norm_sqr();
        }
    }
    s
}

fn jacobi<T: Real>(a: &mut Operator<T>, mut v: Option<&mut Operator<T>>) {
    let n = a.dim();
    // Symmetrize so that tiny anti-Hermitian noise in the input cannot stall the sweep.
    let two = T::lit(2.0);
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
        for j in (i + 1)..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) / two;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }

    let scale: T = a.data().iter().map(|z| z.norm_sqr()).sum();
    if scale == T::zero() {
        return;
    }
    let target = scale * T::epsilon() * T::epsilon();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a[(p, q)];
                let mag = z.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                let phase = z / mag; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (two * mag);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let cz = Complex::new(c, T::zero());
                let sz = Complex::new(s, T::zero());
                let ph_conj = phase.conj();

                // A ← A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cz - akq * sz * ph_conj;
                    a[(k, q)] = akp * sz + akq * cz * ph_conj;
                }
                // A ← G† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cz - aqk * sz * phase;
                    a[(q, k)] = apk * sz + aqk * cz * phase;
                }
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * cz - vkq * sz * ph_conj;
                        v[(k, q)] = vkp * sz + vkq * cz * ph_conj;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::Ket;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn diagonal_input() {
        let m = Operator::<f64>::from_real_diagonal(&[0.3, 0.7]);
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[0] - 0.7).abs() < 1e-15);
        assert!((e.values[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn singlet_projector_rank_one() {
        let s = &(&Ket::<f64>::basis(4, 1) - &Ket::basis(4, 2)) * (0.5f64).sqrt();
        let vals = eigvals_hermitian(&s.projector()).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        for v in &vals[1..] {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i],[−i, 2]] has eigenvalues 3 and 1.
        let m = Operator::from_rows(&[vec![c(2., 0.), c(0., 1.)], vec![c(0., -1.), c(2., 0.)]]).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Operator::from_rows(&[vec![c(1., 0.), c(1., 0.)], vec![c(0., 0.), c(1., 0.)]]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(QkdError::NotHermitian { .. })));
    }

    #[test]
    fn f32_path() {
        let m = Operator::<f32>::from_real_diagonal(&[0.25, 0.75]);
        let vals = eigvals_hermitian(&m).unwrap();
        assert!((vals[0] - 0.75).abs() < 1e-6);
    }
}
