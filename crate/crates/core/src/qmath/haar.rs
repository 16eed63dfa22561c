use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::Operator;
use crate::Real;

/// Haar-distributed element of SU(2).
///
/// A standard Gaussian 4-vector normalized to the unit 3-sphere gives
/// `(α, β)` with `|α|² + |β|² = 1`, and `[[α, −β*], [β, α*]]` is then
/// uniformly distributed on SU(2).
pub fn haar_random_su2<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Operator<T> {
    let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = g.map(|x| T::lit(x / norm));
    let alpha = Complex::new(a, b);
    let beta = Complex::new(c, d);
    Operator::from_rows(&[vec![alpha, -beta.conj()], vec![beta, alpha.conj()]]).unwrap()
}
