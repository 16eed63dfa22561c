//! Trine states, the three-qubit RFF operators `W_i`, and the trine POM.
//!
//! Conventions:
//! * signal-qubit storage basis is `(|+⟩, |−⟩)`, the eigenkets of `Y = iXZ`;
//!   in that basis `Y = σ_z`, `X = σ_y`, `Z = σ_x`.
//! * three physical qubits are stored as `|abc⟩ ↦ 4a + 2b + c`.
//! * letters map `A, B, C ↦ 0, 1, 2` in every `ω` exponent.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channel::source_state;
use crate::error::{check_epsilon, QkdError, Result};
use crate::qmath::{pauli, DensityMatrix, Ket, Operator};
use crate::Real;

/// One of the three trine outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrineLetter {
    A,
    B,
    C,
}

impl TrineLetter {
    pub const ALL: [TrineLetter; 3] = [TrineLetter::A, TrineLetter::B, TrineLetter::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_char(self) -> char {
        match self {
            TrineLetter::A => 'A',
            TrineLetter::B => 'B',
            TrineLetter::C => 'C',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'A' | 'a' => Some(TrineLetter::A),
            'B' | 'b' => Some(TrineLetter::B),
            'C' | 'c' => Some(TrineLetter::C),
            _ => None,
        }
    }

    /// The letter different from both `a` and `b`; requires `a != b`.
    pub fn third(a: TrineLetter, b: TrineLetter) -> TrineLetter {
        debug_assert_ne!(a, b);
        Self::ALL[3 - a.index() - b.index()]
    }
}

impl fmt::Display for TrineLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for TrineLetter {
    type Err = QkdError;
    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Self::from_char(c).ok_or_else(|| QkdError::InvalidLetter(s.into())),
            _ => Err(QkdError::InvalidLetter(s.into())),
        }
    }
}

/// 3×3 joint table indexed `[alice][bob]`.
pub type JointTable<T> = [[T; 3]; 3];

/// `ω = exp(i2π/3)`.
pub fn omega<T: Real>() -> Complex<T> {
    omega_pow(1)
}

/// `ω^k`, exponent taken mod 3.
pub fn omega_pow<T: Real>(k: i64) -> Complex<T> {
    let k = k.rem_euclid(3);
    let angle = T::TAU() * T::from_i64(k).unwrap() / T::lit(3.0);
    Complex::new(angle.cos(), angle.sin())
}

/// Coefficients of `|j⟩` on `(|+⟩, |−⟩)`: `(ω^j, ω^{−j})/√2`.
fn trine_coefficients<T: Real>(j: usize) -> [Complex<T>; 2] {
    let h = T::FRAC_1_SQRT_2();
    let j = j as i64;
    [omega_pow::<T>(j).scale(h), omega_pow::<T>(-j).scale(h)]
}

/// The signal-qubit trine `(|A⟩, |B⟩, |C⟩)` on `(|+⟩, |−⟩)`.
pub fn signal_trine<T: Real>() -> [Ket<T>; 3] {
    std::array::from_fn(|j| Ket::new(trine_coefficients::<T>(j).to_vec()))
}

/// Signal-qubit Pauli operators `(X, Y, Z)` with `Y = iXZ` diagonal.
pub fn signal_paulis<T: Real>() -> [Operator<T>; 3] {
    [pauli::sigma_y(), pauli::sigma_z(), pauli::sigma_x()]
}

/// Bloch vector `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of a normalized signal-qubit ket.
pub fn bloch_vector<T: Real>(ket: &Ket<T>) -> Result<[T; 3]> {
    let [x, y, z] = signal_paulis::<T>();
    Ok([x.expectation(ket, ket)?.re, y.expectation(ket, ket)?.re, z.expectation(ket, ket)?.re])
}

fn two_term<T: Real>(dim: usize, plus: usize, minus: usize) -> Ket<T> {
    &(&Ket::basis(dim, plus) - &Ket::basis(dim, minus)) * T::FRAC_1_SQRT_2()
}

/// The `m = +½` trine `|p_i⟩` and the `m = −½` trine `|q_i⟩` of three qubits.
pub fn physical_kets<T: Real>() -> ([Ket<T>; 3], [Ket<T>; 3]) {
    // |001⟩=1 |010⟩=2 |100⟩=4 |011⟩=3 |101⟩=5 |110⟩=6
    let p = [two_term(8, 1, 2), two_term(8, 4, 1), two_term(8, 2, 4)];
    let q = [two_term(8, 5, 6), two_term(8, 6, 3), two_term(8, 3, 5)];
    (p, q)
}

/// `W_i = |p_i⟩⟨p_i| + |q_i⟩⟨q_i|`.
pub fn w_operators<T: Real>() -> [Operator<T>; 3] {
    let (p, q) = physical_kets::<T>();
    std::array::from_fn(|i| &p[i].projector() + &q[i].projector())
}

/// Embeds a single-qubit operator on qubit `site` (0-based, most significant first)
/// of an `n`-qubit register.
fn embed<T: Real>(op: &Operator<T>, site: usize, n: usize) -> Operator<T> {
    (0..n).map(|k| if k == site { op.clone() } else { Operator::identity(2) }).reduce(|a, b| a.tensor(&b)).unwrap()
}

/// Singlet projector on qubits `(j, k)` of three, `(1 − σ_j·σ_k)/4`.
pub fn pair_singlet_projector<T: Real>(j: usize, k: usize) -> Operator<T> {
    let mut dot = Operator::zeros(8);
    for s in [pauli::sigma_x::<T>(), pauli::sigma_y(), pauli::sigma_z()] {
        dot = &dot + &(&embed(&s, j, 3) * &embed(&s, k, 3));
    }
    (&Operator::identity(8) - &dot).scale_real(T::lit(0.25))
}

/// The orthonormal signal/idler quartet `(|++⟩, |+−⟩, |−+⟩, |−−⟩)` in the
/// three-qubit space, ordered as `2·signal + idler`.
pub fn signal_idler_basis<T: Real>() -> [Ket<T>; 4] {
    let (p, q) = physical_kets::<T>();
    // Inverting (p₁,p₂,p₃) = (|s₊⟩,|s₋⟩)·M uses M M† = (3/2)·1.
    let weight = T::SQRT_2() / T::lit(3.0);
    let combine = |kets: &[Ket<T>; 3], sign: i64| {
        (0..3).fold(Ket::zeros(8), |acc, i| {
            let coeff = omega_pow::<T>(-sign * i as i64).scale(weight);
            &acc + &kets[i].scale(coeff)
        })
    };
    let pp = combine(&p, 1);
    let mp = combine(&p, -1);
    let pm = combine(&q, 1);
    let mm = combine(&q, -1);
    [pp, pm, mp, mm]
}

/// Columns of the 8×4 isometry from signal⊗idler into three qubits.
fn isometry_apply<T: Real>(op8: &Operator<T>) -> Operator<T> {
    let basis = signal_idler_basis::<T>();
    Operator::from_fn(4, |a, b| op8.expectation(&basis[a], &basis[b]).unwrap())
}

/// `V† W_i V` in the signal⊗idler basis.
pub fn w_operators_signal_idler<T: Real>() -> [Operator<T>; 3] {
    w_operators::<T>().map(|w| isometry_apply(&w))
}

/// Projector onto the `j = ½` sector, the span of all p/q kets.
pub fn half_spin_sector_projector<T: Real>() -> Operator<T> {
    signal_idler_basis::<T>().iter().fold(Operator::zeros(8), |acc, k| &acc + &k.projector())
}

/// Projector onto the symmetric `j = 3/2` sector, built from Dicke states.
pub fn three_halves_sector_projector<T: Real>() -> Operator<T> {
    let third = T::one() / T::lit(3.0).sqrt();
    let dicke = [
        Ket::basis(8, 0),
        &(&(&Ket::basis(8, 1) + &Ket::basis(8, 2)) + &Ket::basis(8, 4)) * third,
        &(&(&Ket::basis(8, 3) + &Ket::basis(8, 5)) + &Ket::basis(8, 6)) * third,
        Ket::basis(8, 7),
    ];
    dicke.iter().fold(Operator::zeros(8), |acc, k| &acc + &k.projector())
}

/// `Π_i = (2/3)|i⟩⟨i|` on the signal qubit.
pub fn trine_pom<T: Real>() -> [Operator<T>; 3] {
    let two_thirds = T::lit(2.0) / T::lit(3.0);
    signal_trine::<T>().map(|k| k.projector().scale_real(two_thirds))
}

/// Physical POM `(2/3)(P_{½} − W_j)` on three qubits.
pub fn physical_pom<T: Real>() -> [Operator<T>; 3] {
    let sector = half_spin_sector_projector::<T>();
    let two_thirds = T::lit(2.0) / T::lit(3.0);
    w_operators::<T>().map(|w| (&sector - &w).scale_real(two_thirds))
}

/// Closed-form joint table of the noisy trine channel:
/// `ε/9` on the diagonal, `(3−ε)/18` off it.
pub fn joint_probabilities<T: Real>(epsilon: T) -> Result<JointTable<T>> {
    check_epsilon(epsilon)?;
    let diag = epsilon / T::lit(9.0);
    let off = (T::lit(3.0) - epsilon) / T::lit(18.0);
    Ok(std::array::from_fn(|a| std::array::from_fn(|b| if a == b { diag } else { off })))
}

/// `p_jk = tr(Π_j ⊗ Π_k ρ)` for a two-signal-qubit state.
pub fn joint_probabilities_of<T: Real>(rho: &DensityMatrix<T>) -> Result<JointTable<T>> {
    if rho.dim() != 4 {
        return Err(QkdError::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let pom = trine_pom::<T>();
    let mut table = [[T::zero(); 3]; 3];
    for (j, pj) in pom.iter().enumerate() {
        for (k, pk) in pom.iter().enumerate() {
            table[j][k] = rho.expectation(&pj.tensor(pk))?;
        }
    }
    Ok(table)
}

/// Trace-formula table at noise `ε`, via the source state.
pub fn joint_probabilities_traced<T: Real>(epsilon: T) -> Result<JointTable<T>> {
    joint_probabilities_of(&source_state(epsilon)?)
}

/// `max_i ‖[W_i, u⊗u⊗u]‖_max`.
pub fn rff_check<T: Real>(u: &Operator<T>) -> Result<T> {
    if u.dim() != 2 {
        return Err(QkdError::DimensionMismatch { expected: 2, got: u.dim() });
    }
    let dev = u.unitarity_deviation();
    if !(dev <= T::check_tol()) {
        return Err(QkdError::NotUnitary { deviation: dev.as_f64() });
    }
    let u3 = u.tensor(u).tensor(u);
    let mut worst = T::zero();
    for w in w_operators::<T>() {
        worst = worst.max(w.commutator(&u3)?.max_abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn omega_is_cube_root_of_unity() {
        let w = omega::<f64>();
        assert!((w.norm() - 1.0).abs() < TOL);
        assert!((w * w * w - Complex::new(1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn letters() {
        assert_eq!(TrineLetter::third(TrineLetter::A, TrineLetter::C), TrineLetter::B);
        assert_eq!("C".parse::<TrineLetter>().unwrap(), TrineLetter::C);
        assert!("D".parse::<TrineLetter>().is_err());
        assert!("AB".parse::<TrineLetter>().is_err());
        assert_eq!(TrineLetter::B.index(), 1);
    }

    #[test]
    fn signal_trine_overlaps() {
        let t = signal_trine::<f64>();
        for i in 0..3 {
            for j in 0..3 {
                let o = t[i].inner(&t[j]).unwrap().norm_sqr();
                let want = if i == j { 1.0 } else { 0.25 };
                assert!((o - want).abs() < TOL, "|<{i}|{j}>|^2 = {o}");
            }
        }
    }

    #[test]
    fn trine_lies_in_xz_plane_at_120_degrees() {
        let t = signal_trine::<f64>();
        let b: Vec<[f64; 3]> = t.iter().map(|k| bloch_vector(k).unwrap()).collect();
        for v in &b {
            assert!(v[1].abs() < TOL, "nonzero Y component");
            assert!((v[0] * v[0] + v[2] * v[2] - 1.0).abs() < TOL);
        }
        for i in 0..3 {
            let j = (i + 1) % 3;
            let cos = b[i][0] * b[j][0] + b[i][2] * b[j][2];
            assert!((cos + 0.5).abs() < TOL);
        }
    }

    #[test]
    fn y_equals_i_x_z() {
        let [x, y, z] = signal_paulis::<f64>();
        let ixz = (&x * &z).scale(Complex::new(0.0, 1.0));
        assert!(ixz.max_abs_diff(&y) < TOL);
    }

    #[test]
    fn complementary_trine_overlap() {
        // Orthogonal partner of |A⟩ overlaps |B⟩ with probability 3/4.
        let t = signal_trine::<f64>();
        let a = &t[0];
        let a_perp = Ket::new(vec![-a[1].conj(), a[0].conj()]);
        assert!(a.inner(&a_perp).unwrap().norm() < TOL);
        assert!((t[1].inner(&a_perp).unwrap().norm_sqr() - 0.75).abs() < TOL);
        assert!((t[2].inner(&a_perp).unwrap().norm_sqr() - 0.75).abs() < TOL);
    }

    #[test]
    fn physical_kets_are_normalized_trines() {
        let (p, q) = physical_kets::<f64>();
        for k in p.iter().chain(q.iter()) {
            assert!((k.norm_sqr() - 1.0).abs() < TOL);
        }
        let psum = &(&p[0] + &p[1]) + &p[2];
        let qsum = &(&q[0] + &q[1]) + &q[2];
        assert!(psum.norm() < TOL && qsum.norm() < TOL);
        assert!(p[0].inner(&q[0]).unwrap().norm() < TOL);
    }

    #[test]
    fn w_operator_identities() {
        let w = w_operators::<f64>();
        for i in 0..3 {
            assert!((w[i].trace().re - 2.0).abs() < TOL);
            assert!((&w[i] * &w[i]).max_abs_diff(&w[i]) < TOL);
            for j in 0..3 {
                let want = if i == j { 2.0 } else { 0.5 };
                assert!(((&w[i] * &w[j]).trace().re - want).abs() < TOL);
            }
        }
        let sum = &(&w[0] + &w[1]) + &w[2];
        let sector = half_spin_sector_projector::<f64>();
        assert!(sum.max_abs_diff(&sector.scale_real(1.5)) < TOL);
        assert!((sector.trace().re - 4.0).abs() < TOL);
        let complement = &Operator::identity(8) - &three_halves_sector_projector();
        assert!(sector.max_abs_diff(&complement) < TOL);
    }

    #[test]
    fn w_equals_pair_singlet_projector() {
        let w = w_operators::<f64>();
        // W₁ = S₂₃, W₂ = S₃₁, W₃ = S₁₂ (0-based qubit indices).
        let pairs = [(1, 2), (2, 0), (0, 1)];
        for (i, (j, k)) in pairs.into_iter().enumerate() {
            assert!(w[i].max_abs_diff(&pair_singlet_projector(j, k)) < TOL);
        }
    }

    #[test]
    fn signal_idler_basis_reproduces_p_and_q() {
        let basis = signal_idler_basis::<f64>();
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((basis[a].inner(&basis[b]).unwrap() - Complex::new(want, 0.0)).norm() < TOL);
            }
        }
        let (p, q) = physical_kets::<f64>();
        let [pp, pm, mp, mm] = &basis;
        for i in 0..3 {
            let c = trine_coefficients::<f64>(i);
            let p_re = &pp.scale(c[0]) + &mp.scale(c[1]);
            let q_re = &pm.scale(c[0]) + &mm.scale(c[1]);
            assert!(p_re.max_abs_diff(&p[i]) < TOL);
            assert!(q_re.max_abs_diff(&q[i]) < TOL);
        }
    }

    #[test]
    fn w_in_signal_idler_basis_is_trine_projector() {
        let t = signal_trine::<f64>();
        for (i, w) in w_operators_signal_idler::<f64>().iter().enumerate() {
            let want = t[i].projector().tensor(&Operator::identity(2));
            assert!(w.max_abs_diff(&want) < TOL);
        }
    }

    #[test]
    fn trine_pom_complete() {
        let pom = trine_pom::<f64>();
        let sum = &(&pom[0] + &pom[1]) + &pom[2];
        assert!(sum.max_abs_diff(&Operator::identity(2)) < TOL);
        assert!((pom[0].trace().re - 2.0 / 3.0).abs() < TOL);
        let t = signal_trine::<f64>();
        assert!(((&pom[0] * &t[0].projector()).trace().re - 2.0 / 3.0).abs() < TOL);
        let pp = pom[0].tensor(&pom[0]);
        assert!((pp.trace().re - 4.0 / 9.0).abs() < TOL);
    }

    #[test]
    fn prepare_and_measure_reproduces_noiseless_table() {
        let w = w_operators::<f64>();
        let pom = physical_pom::<f64>();
        for i in 0..3 {
            let rho = w[i].scale_real(0.5);
            for j in 0..3 {
                let p = (&rho * &pom[j]).trace().re / 3.0;
                let want = if i == j { 0.0 } else { 1.0 / 6.0 };
                assert!((p - want).abs() < TOL);
            }
        }
    }

    #[test]
    fn joint_table_values() {
        let t0 = joint_probabilities(0.0f64).unwrap();
        assert_eq!(t0[0][0], 0.0);
        assert!((t0[0][1] - 1.0 / 6.0).abs() < TOL);
        let t3 = joint_probabilities(0.3f64).unwrap();
        assert!((t3[1][1] - 1.0 / 30.0).abs() < TOL);
        assert!((t3[2][0] - 0.15).abs() < TOL);
        let t1 = joint_probabilities(1.0f64).unwrap();
        assert!(t1.iter().flatten().all(|&p| (p - 1.0 / 9.0).abs() < TOL));
        assert!(joint_probabilities(1.2f64).is_err());
        assert!(joint_probabilities(-0.1f64).is_err());
    }

    #[test]
    fn closed_form_matches_trace_formula_on_grid() {
        for step in 0..=20 {
            let eps = step as f64 * 0.05;
            let closed = joint_probabilities(eps).unwrap();
            let traced = joint_probabilities_traced(eps).unwrap();
            let mut total = 0.0;
            for a in 0..3 {
                let row: f64 = closed[a].iter().sum();
                let col: f64 = (0..3).map(|b| closed[b][a]).sum();
                assert!((row - 1.0 / 3.0).abs() < TOL && (col - 1.0 / 3.0).abs() < TOL);
                for b in 0..3 {
                    assert!((closed[a][b] - traced[a][b]).abs() < TOL);
                    total += closed[a][b];
                }
            }
            assert!((total - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn rff_commutators() {
        assert!(rff_check(&Operator::<f64>::identity(2)).unwrap() < 1e-10);
        assert!(rff_check(&pauli::sigma_x::<f64>()).unwrap() < 1e-10);
        let not_unitary = Operator::<f64>::from_real_diagonal(&[1.0, 2.0]);
        assert!(matches!(rff_check(&not_unitary), Err(QkdError::NotUnitary { .. })));
    }

    #[test]
    fn f32_trine_structure() {
        let w = w_operators::<f32>();
        assert!((w[0].trace().re - 2.0).abs() < 1e-5);
        let t = signal_trine::<f32>();
        assert!((t[0].inner(&t[1]).unwrap().norm_sqr() - 0.25).abs() < 1e-5);
    }
}
