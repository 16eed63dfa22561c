//! Eve's ancilla kets: the purification `|S⟩ = Σ |ab⟩|E_ab⟩` of the source
//! state, parametrized by the 4×4 matrix `V` whose columns are `E₁..E₄`.

use num_complex::Complex;

use crate::error::{check_epsilon, QkdError, Result};
use crate::qmath::{DensityMatrix, Ket, Operator};
use crate::trine::{omega_pow, signal_paulis, TrineLetter};
use crate::Real;

/// The seven free real parameters of `V` (`λ`, `μ` complex count twice).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralVParams<T> {
    pub a1: T,
    pub a2: T,
    pub r1: T,
    pub r2: T,
    pub phi: T,
    pub theta: T,
    pub lambda: Complex<T>,
    pub mu: Complex<T>,
}

impl<T: Real> GeneralVParams<T> {
    /// Parameters that reproduce `ρ_ε` exactly:
    /// `a₁ = a₂ = √ε/2`, `r₁ = r₂ = √(2−ε)/2`, `λ = μ = φ = 0`,
    /// `sin 2θ = (2−2ε)/(2−ε)`.
    pub fn unbiased(epsilon: T) -> Result<Self> {
        check_epsilon(epsilon)?;
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        let a = half * epsilon.sqrt();
        let r = half * (two - epsilon).sqrt();
        let sin2 = (two - two * epsilon) / (two - epsilon);
        Ok(Self {
            a1: a,
            a2: a,
            r1: r,
            r2: r,
            phi: T::zero(),
            theta: half * sin2.min(T::one()).asin(),
            lambda: Complex::new(T::zero(), T::zero()),
            mu: Complex::new(T::zero(), T::zero()),
        })
    }

    /// `(normalization residual, singlet-coherence residual)` at noise `ε`.
    pub fn residuals(&self, epsilon: T) -> (T, Complex<T>) {
        let a_sq = self.a1 * self.a1 + self.a2 * self.a2;
        let norm =
            (T::one() + self.lambda.norm_sqr() + self.mu.norm_sqr()) * a_sq + self.r1 * self.r1 + self.r2 * self.r2
                - T::one();
        let phase = Complex::from_polar(T::one(), self.phi);
        let coherence = self.lambda.conj() * self.mu * a_sq
            + phase * (self.r1 * self.r2 * (T::lit(2.0) * self.theta).sin())
            - Complex::new((T::one() - epsilon) / T::lit(2.0), T::zero());
        (norm, coherence)
    }

    /// Columns `E₁..E₄` of `V`.
    pub fn columns(&self) -> [Ket<T>; 4] {
        let z = Complex::new(T::zero(), T::zero());
        let re = |x: T| Complex::new(x, T::zero());
        let (s, c) = self.theta.sin_cos();
        let e_iphi = Complex::from_polar(T::one(), self.phi);
        let e1 = Ket::new(vec![re(self.a1), z, z, z]);
        let e2 = Ket::new(vec![
            self.lambda * self.a2,
            re(self.r1 * c),
            e_iphi.conj() * (self.r1 * s),
            self.mu.conj() * self.a1,
        ]);
        let e3 = Ket::new(vec![
            -self.mu * self.a2,
            -e_iphi * (self.r2 * s),
            re(-self.r2 * c),
            -self.lambda.conj() * self.a1,
        ]);
        let e4 = Ket::new(vec![z, z, z, re(self.a2)]);
        [e1, e2, e3, e4]
    }
}

/// Parameters `(c, ε)` of the symmetric one-parameter family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneParamV<T> {
    c: T,
    epsilon: T,
}

impl<T: Real> OneParamV<T> {
    /// Accepts `0 ≤ c ≤ 2ε` (with a rounding allowance at both ends, then clamped).
    pub fn new(c: T, epsilon: T) -> Result<Self> {
        check_epsilon(epsilon)?;
        let max = T::lit(2.0) * epsilon;
        let slack = T::epsilon() * T::lit(64.0);
        if c.is_nan() || c < -slack || c > max + slack {
            return Err(QkdError::COutOfRange { c: c.as_f64(), max: max.as_f64() });
        }
        Ok(Self { c: c.max(T::zero()).min(max), epsilon })
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// `(x, y)` with `x ± y = √(2 − c ± 2(1−ε))`.
    pub fn xy(&self) -> (T, T) {
        let two = T::lit(2.0);
        let base = two - self.c;
        let shift = two * (T::one() - self.epsilon);
        let sum = (base + shift).max(T::zero()).sqrt();
        let diff = (base - shift).max(T::zero()).sqrt();
        ((sum + diff) / two, (sum - diff) / two)
    }

    /// Columns of `V(c) = ½[[√c,0,0,0],[0,x,−y,0],[0,y,−x,0],[0,0,0,√c]]`.
    pub fn columns(&self) -> [Ket<T>; 4] {
        let half = T::lit(0.5);
        let (x, y) = self.xy();
        let rc = self.c.sqrt() * half;
        let z = T::zero();
        [
            Ket::from_real(&[rc, z, z, z]),
            Ket::from_real(&[z, x * half, y * half, z]),
            Ket::from_real(&[z, -y * half, -x * half, z]),
            Ket::from_real(&[z, z, z, rc]),
        ]
    }
}

/// Eve's ancilla columns `E₁..E₄` and the nine outcome-conditioned kets
/// `E_jk` (Alice's letter `j`, Bob's letter `k`), unnormalized so that
/// `⟨E_jk|E_jk⟩ = p_jk`.
#[derive(Clone, Debug)]
pub struct AncillaFamily<T> {
    columns: [Ket<T>; 4],
    outcome_kets: [[Ket<T>; 3]; 3],
}

impl<T: Real> AncillaFamily<T> {
    pub fn from_columns(columns: [Ket<T>; 4]) -> Self {
        let third = Complex::new(T::one() / T::lit(3.0), T::zero());
        let outcome_kets = std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let (j, k) = (j as i64, k as i64);
                let coeffs = [-j - k, -j + k, j - k, j + k].map(|e| omega_pow::<T>(e) * third);
                columns.iter().zip(coeffs).fold(Ket::zeros(columns[0].dim()), |acc, (col, w)| &acc + &col.scale(w))
            })
        });
        Self { columns, outcome_kets }
    }

    pub fn columns(&self) -> &[Ket<T>; 4] {
        &self.columns
    }

    pub fn outcome_ket(&self, alice: TrineLetter, bob: TrineLetter) -> &Ket<T> {
        &self.outcome_kets[alice.index()][bob.index()]
    }

    pub(crate) fn outcome_ket_idx(&self, alice: usize, bob: usize) -> &Ket<T> {
        &self.outcome_kets[alice][bob]
    }

    /// `G_ab = ⟨E_a|E_b⟩`.
    pub fn gram(&self) -> Operator<T> {
        Operator::from_fn(4, |a, b| self.columns[a].inner_unchecked(&self.columns[b]))
    }

    /// Largest violation of the Gram-matrix and outcome-norm constraints at `ε`.
    pub fn constraint_residual(&self, epsilon: T) -> T {
        let g = self.gram();
        let zero = Complex::new(T::zero(), T::zero());
        let half_coh = Complex::new(-(T::one() - epsilon) / T::lit(2.0), T::zero());
        let checks = [
            g.trace() - Complex::new(T::one(), T::zero()),
            g[(0, 1)] + g[(2, 3)] - zero,
            g[(0, 2)] + g[(1, 3)] - zero,
            g[(0, 3)] - zero,
            g[(1, 2)] - half_coh,
        ];
        let mut worst = checks.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let diag = epsilon / T::lit(9.0);
        let off = (T::lit(3.0) - epsilon) / T::lit(18.0);
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k { diag } else { off };
                worst = worst.max((self.outcome_kets[j][k].norm_sqr() - want).abs());
            }
        }
        worst
    }

    /// `|S⟩ = |++⟩|E₁⟩ + |+−⟩|E₂⟩ + |−+⟩|E₃⟩ + |−−⟩|E₄⟩` on signal⊗signal⊗ancilla.
    pub fn purification(&self) -> Ket<T> {
        (0..4).fold(Ket::zeros(16), |acc, a| &acc + &Ket::basis(4, a).tensor(&self.columns[a]))
    }
}

/// Ancilla family of a general `V`, validated against the two parameter
/// constraints within 1e-8.
pub fn v_matrix_general<T: Real>(params: &GeneralVParams<T>, epsilon: T) -> Result<AncillaFamily<T>> {
    check_epsilon(epsilon)?;
    let (norm, coherence) = params.residuals(epsilon);
    let tol = T::lit(1e-8).max(T::check_tol());
    if norm.abs() > tol || coherence.norm() > tol {
        return Err(QkdError::ConstraintViolation { normalization: norm.as_f64(), singlet: coherence.norm().as_f64() });
    }
    Ok(AncillaFamily::from_columns(params.columns()))
}

/// Ancilla family of the symmetric one-parameter `V(c)`.
pub fn v_matrix_one_param<T: Real>(c: T, epsilon: T) -> Result<AncillaFamily<T>> {
    Ok(AncillaFamily::from_columns(OneParamV::new(c, epsilon)?.columns()))
}

/// Alice and Bob's two-qubit state `ρ_ab,a'b' = ⟨E_a'b'|E_ab⟩`.
pub fn reduced_ab_state<T: Real>(family: &AncillaFamily<T>) -> Result<DensityMatrix<T>> {
    let cols = family.columns();
    DensityMatrix::new(Operator::from_fn(4, |a, b| cols[b].inner_unchecked(&cols[a])))
}

/// Same state by tracing the ancilla out of `|S⟩⟨S|`.
pub fn reduced_ab_state_by_partial_trace<T: Real>(family: &AncillaFamily<T>) -> Result<DensityMatrix<T>> {
    DensityMatrix::new(family.purification().projector().partial_trace_right(4, 4)?)
}

/// Signal-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalPauli {
    I,
    X,
    Y,
    Z,
}

impl SignalPauli {
    fn matrix<T: Real>(self) -> Operator<T> {
        let [x, y, z] = signal_paulis::<T>();
        match self {
            SignalPauli::I => Operator::identity(2),
            SignalPauli::X => x,
            SignalPauli::Y => y,
            SignalPauli::Z => z,
        }
    }
}

/// `⟨P_A ⊗ Q_B⟩` in a two-qubit state.
pub fn pauli_expectation<T: Real>(rho: &DensityMatrix<T>, alice: SignalPauli, bob: SignalPauli) -> Result<T> {
    rho.expectation(&alice.matrix::<T>().tensor(&bob.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::source_state;
    use crate::trine::{joint_probabilities_of, TrineLetter};
    use SignalPauli::{I, X, Y, Z};

    const TOL: f64 = 1e-10;

    fn assorted_general(epsilon: f64) -> GeneralVParams<f64> {
        // Choose a1, a2, λ, μ freely, then solve for r₁, r₂, θ, φ.
        let a1: f64 = 0.2;
        let a2: f64 = 0.15;
        let lambda = Complex::new(0.3, -0.1);
        let mu = Complex::new(-0.2, 0.25);
        let a_sq = a1 * a1 + a2 * a2;
        let rest = 1.0 - (1.0 + lambda.norm_sqr() + mu.norm_sqr()) * a_sq;
        let target = Complex::new((1.0 - epsilon) / 2.0, 0.0) - lambda.conj() * mu * a_sq;
        // r₁ r₂ sin2θ e^{iφ} = target; take r₁ ≠ r₂ with r₁² + r₂² = rest.
        let r1 = (0.55 * rest).sqrt();
        let r2 = (0.45 * rest).sqrt();
        let sin2 = target.norm() / (r1 * r2);
        assert!(sin2 <= 1.0, "parameter choice infeasible");
        GeneralVParams { a1, a2, r1, r2, phi: target.arg(), theta: 0.5 * sin2.asin(), lambda, mu }
    }

    #[test]
    fn unbiased_parameters_give_rho_epsilon() {
        let eps = 0.1;
        let fam = v_matrix_general(&GeneralVParams::unbiased(eps).unwrap(), eps).unwrap();
        let rho = reduced_ab_state(&fam).unwrap();
        assert!(rho.as_operator().max_abs_diff(source_state(eps).unwrap().as_operator()) < TOL);
        assert!(fam.constraint_residual(eps) < TOL);
    }

    #[test]
    fn zero_noise_forces_coherence() {
        let fam = v_matrix_general(&GeneralVParams::unbiased(0.0).unwrap(), 0.0).unwrap();
        let g = fam.gram();
        assert!((g[(1, 2)] - Complex::new(-0.5, 0.0)).norm() < TOL);
    }

    #[test]
    fn general_constraint_violation_reported() {
        let mut p = GeneralVParams::unbiased(0.1).unwrap();
        p.r1 *= 1.1;
        assert!(matches!(v_matrix_general(&p, 0.1), Err(QkdError::ConstraintViolation { .. })));
    }

    #[test]
    fn general_family_invariants_and_expectations() {
        let eps = 0.15;
        let p = assorted_general(eps);
        let fam = v_matrix_general(&p, eps).unwrap();
        assert!(fam.constraint_residual(eps) < TOL);
        let total: f64 =
            TrineLetter::ALL.iter().flat_map(|&j| TrineLetter::ALL.map(|k| fam.outcome_ket(j, k).norm_sqr())).sum();
        assert!((total - 1.0).abs() < TOL);

        let rho = reduced_ab_state(&fam).unwrap();
        let traced = reduced_ab_state_by_partial_trace(&fam).unwrap();
        assert!(rho.as_operator().max_abs_diff(traced.as_operator()) < TOL);

        let e = |a, b| pauli_expectation(&rho, a, b).unwrap();
        for (a, b) in [(X, I), (Z, I), (I, X), (I, Z), (X, Z), (Z, X)] {
            assert!(e(a, b).abs() < TOL, "{a:?}{b:?}");
        }
        assert!((e(X, X) + (1.0 - eps)).abs() < TOL);
        assert!((e(Z, Z) + (1.0 - eps)).abs() < TOL);

        let (a1s, a2s) = (p.a1 * p.a1, p.a2 * p.a2);
        let y_sum = 0.5 * (e(Y, I) + e(I, Y));
        let y_diff = 0.5 * (e(Y, I) - e(I, Y));
        assert!((y_sum - (a1s - a2s)).abs() < TOL, "sum {y_sum}");
        let want_diff = p.r1 * p.r1 - p.r2 * p.r2 - (p.lambda.norm_sqr() - p.mu.norm_sqr()) * (a1s - a2s);
        assert!((y_diff - want_diff).abs() < TOL, "diff {y_diff} vs {want_diff}");
        let yz = Complex::new(e(Y, Z), e(Y, X));
        assert!((yz - p.lambda * (4.0 * p.a1 * p.a2)).norm() < TOL, "YZ+iYX {yz}");
        let zy = Complex::new(e(Z, Y), e(X, Y));
        assert!((zy + p.mu * (4.0 * p.a1 * p.a2)).norm() < TOL, "ZY+iXY {zy}");
        assert!((e(Y, Y) - (2.0 * (a1s + a2s) - 1.0)).abs() < TOL);
    }

    #[test]
    fn outcome_norms_are_joint_probabilities() {
        let fam = v_matrix_one_param(0.12f64, 0.1).unwrap();
        let table = joint_probabilities_of(&reduced_ab_state(&fam).unwrap()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert!((fam.outcome_ket_idx(j, k).norm_sqr() - table[j][k]).abs() < TOL);
            }
        }
    }

    #[test]
    fn one_param_examples() {
        let eps = 0.1;
        let fam = v_matrix_one_param(eps, eps).unwrap();
        let rho = reduced_ab_state(&fam).unwrap();
        assert!(rho.as_operator().max_abs_diff(source_state(eps).unwrap().as_operator()) < TOL);

        let v = OneParamV::new(0.0, 0.0).unwrap();
        assert_eq!(v.xy(), (1.0, 1.0));
        let fam0 = v_matrix_one_param(0.0, 0.0).unwrap();
        assert!(fam0.columns()[0].norm() == 0.0 && fam0.columns()[3].norm() == 0.0);
        for j in TrineLetter::ALL {
            assert!(fam0.outcome_ket(j, j).norm() < 1e-15);
        }

        let g = v_matrix_one_param(0.1f64, 0.1).unwrap().gram();
        assert!((g[(1, 2)].re + 0.45).abs() < 1e-14);
        assert!(matches!(v_matrix_one_param(0.3, 0.1), Err(QkdError::COutOfRange { .. })));
        assert!(matches!(v_matrix_one_param(-0.01, 0.1), Err(QkdError::COutOfRange { .. })));
    }

    #[test]
    fn one_param_single_y_terms_vanish_and_yy() {
        for (c, eps) in [(0.05, 0.1), (0.3, 0.2), (0.0, 0.3), (0.6, 0.3)] {
            let fam = v_matrix_one_param(c, eps).unwrap();
            assert!(fam.constraint_residual(eps) < TOL);
            let rho = reduced_ab_state(&fam).unwrap();
            for (a, b) in [(Y, I), (I, Y), (Y, X), (Y, Z), (X, Y), (Z, Y)] {
                assert!(pauli_expectation(&rho, a, b).unwrap().abs() < TOL);
            }
            assert!((pauli_expectation(&rho, Y, Y).unwrap() - (c - 1.0)).abs() < TOL);
            // Invariance under X_A X_B and Z_A Z_B conjugation.
            let [x, _, z] = signal_paulis::<f64>();
            for p in [x.tensor(&x), z.tensor(&z)] {
                assert!(rho.as_operator().conjugate_by(&p).unwrap().max_abs_diff(rho.as_operator()) < TOL);
            }
        }
    }
}
