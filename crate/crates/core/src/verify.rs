//! Structural self-checks: operator identities, rotation invariance, ancilla
//! constraints, conditioned-state bookkeeping and the entanglement landmarks
//! of the one-parameter family.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::source_state;
use crate::error::Result;
use crate::keygen::KeyCase;
use crate::qmath::{haar_random_su2, pauli, von_neumann_entropy, Operator};
use crate::security::conditioned::{all_hypotheses, hypothesis_kets};
use crate::security::{
    concurrence, holevo_for_hypotheses, hypothesis_set, reduced_ab_state, v_matrix_general, v_matrix_one_param,
    GeneralVParams, Side,
};
use crate::trine::{
    half_spin_sector_projector, joint_probabilities, joint_probabilities_traced, physical_pom, rff_check, w_operators,
    TrineLetter,
};

/// Identities that hold to rounding.
pub const MACHINE_TOL: f64 = 1e-12;
/// Rotation-invariance bound on the commutators.
pub const RFF_TOL: f64 = 1e-10;
/// Step of the `c` scan at ε = 0.2.
pub const C_SCAN_STEP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn within(name: &'static str, deviation: f64, tol: f64) -> Self {
        Self { name, passed: deviation <= tol, detail: format!("max deviation {deviation:.3e} (tol {tol:.0e})") }
    }
}

/// `tr W_i = 2`, `tr W_i W_j = (3δ_ij + 1)/2`, `Σ W_i = (3/2) P_{½}`.
pub fn check_w_identities() -> Result<CheckOutcome> {
    let w = w_operators::<f64>();
    let mut dev: f64 = 0.0;
    for i in 0..3 {
        dev = dev.max((w[i].trace().re - 2.0).abs());
        for j in 0..3 {
            let want = if i == j { 2.0 } else { 0.5 };
            dev = dev.max((w[i].matmul(&w[j])?.trace() - want).norm());
        }
    }
    let sum = w.iter().fold(Operator::zeros(8), |acc, wi| &acc + wi);
    dev = dev.max(sum.max_abs_diff(&half_spin_sector_projector().scale_real(1.5)));
    Ok(CheckOutcome::within("w_identities", dev, MACHINE_TOL))
}

/// Commutators `[W_i, u⊗u⊗u]` for fixed rotations and `samples` Haar draws.
pub fn check_rff(samples: usize, seed: u64) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = rff_check(&Operator::<f64>::identity(2))?.max(rff_check(&pauli::sigma_x())?);
    for _ in 0..samples {
        worst = worst.max(rff_check(&haar_random_su2::<f64, _>(&mut rng))?);
    }
    let mut out = CheckOutcome::within("rff_commutators", worst, RFF_TOL);
    out.detail = format!("{samples} Haar rotations, {}", out.detail);
    Ok(out)
}

/// Gram and outcome-norm constraints on every construction path.
pub fn check_gram_constraints() -> Result<CheckOutcome> {
    let mut dev: f64 = 0.0;
    for eps in [0.0, 0.05, 0.1, 0.2, 0.35, 0.7, 1.0] {
        for i in 0..=8 {
            let c = 2.0 * eps * i as f64 / 8.0;
            dev = dev.max(v_matrix_one_param(c, eps)?.constraint_residual(eps));
        }
        let general = v_matrix_general(&GeneralVParams::unbiased(eps)?, eps)?;
        dev = dev.max(general.constraint_residual(eps));
    }
    Ok(CheckOutcome::within("gram_constraints", dev, MACHINE_TOL))
}

/// The conditioned states consume 54 distinct product kets, none with a
/// repeated Alice letter.
pub fn check_ket_coverage() -> CheckOutcome {
    let mut counts = Vec::new();
    let mut passed = true;
    for side in Side::BOTH {
        let mut seen = HashSet::new();
        for case in KeyCase::BOTH {
            for h in all_hypotheses(case) {
                for label in hypothesis_kets(h, side) {
                    let ((a1, _), (a2, _)) = label;
                    passed &= seen.insert(label) && a1 != a2;
                }
            }
        }
        passed &= seen.len() == 54;
        counts.push(format!("{}: {} of 81", side.as_str(), seen.len()));
    }
    CheckOutcome { name: "ket_coverage", passed, detail: counts.join(", ") }
}

/// `V(c = ε)` reduces to `ρ_ε` entry by entry.
pub fn check_c_equals_epsilon() -> Result<CheckOutcome> {
    let mut dev: f64 = 0.0;
    for eps in [0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0] {
        let rho = reduced_ab_state(&v_matrix_one_param(eps, eps)?)?;
        dev = dev.max(rho.as_operator().max_abs_diff(source_state(eps)?.as_operator()));
    }
    Ok(CheckOutcome::within("c_equals_epsilon", dev, MACHINE_TOL))
}

/// Eve's bit bound does not depend on which letter pair Bob announced.
pub fn check_letter_symmetry() -> Result<CheckOutcome> {
    use TrineLetter::*;
    let fam = v_matrix_one_param(0.25, 0.15)?;
    let mut dev: f64 = 0.0;
    for side in Side::BOTH {
        let reference: f64 = holevo_for_hypotheses(&fam, &hypothesis_set(KeyCase::Bit, (A, B)), side)?;
        for pair in [(B, C), (C, A), (B, A)] {
            let chi = holevo_for_hypotheses(&fam, &hypothesis_set(KeyCase::Bit, pair), side)?;
            dev = dev.max((chi - reference).abs());
        }
    }
    Ok(CheckOutcome::within("letter_symmetry", dev, 1e-10))
}

/// Trace formula against the closed-form joint table.
pub fn check_joint_table() -> Result<CheckOutcome> {
    let mut dev: f64 = 0.0;
    for eps in [0.0, 0.1, 0.3, 0.6, 1.0] {
        let (traced, closed) = (joint_probabilities_traced::<f64>(eps)?, joint_probabilities::<f64>(eps)?);
        for j in 0..3 {
            for k in 0..3 {
                dev = dev.max((traced[j][k] - closed[j][k]).abs());
            }
        }
    }
    Ok(CheckOutcome::within("joint_table", dev, MACHINE_TOL))
}

/// States `W_i/2` measured with the physical POM give `(1 − δ_ij)/6`.
pub fn check_prepare_and_measure() -> Result<CheckOutcome> {
    let (w, pom) = (w_operators::<f64>(), physical_pom::<f64>());
    let mut dev: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let p = w[i].matmul(&pom[j])?.trace().re / 6.0;
            let want = if i == j { 0.0 } else { 1.0 / 6.0 };
            dev = dev.max((p - want).abs());
        }
    }
    Ok(CheckOutcome::within("prepare_and_measure", dev, MACHINE_TOL))
}

/// At ε = 0.2, scanning `c` in steps of 1e-3: concurrence of `ρ_AB` is
/// smallest at `c = 2ε` and its entropy largest at `c = 2ε − ε²`.
pub fn check_entanglement_landmarks() -> Result<CheckOutcome> {
    let eps: f64 = 0.2;
    let steps = (2.0 * eps / C_SCAN_STEP).round() as usize;
    let (mut c_min, mut conc_min) = (0.0, f64::INFINITY);
    let (mut c_max, mut ent_max) = (0.0, f64::NEG_INFINITY);
    for i in 0..=steps {
        let c = i as f64 * C_SCAN_STEP;
        let rho = reduced_ab_state(&v_matrix_one_param(c, eps)?)?;
        let conc = concurrence(&rho)?;
        if conc < conc_min - 1e-12 {
            (c_min, conc_min) = (c, conc);
        }
        let ent = von_neumann_entropy(&rho)?;
        if ent > ent_max {
            (c_max, ent_max) = (c, ent);
        }
    }
    let (want_min, want_max) = (2.0 * eps, 2.0 * eps - eps * eps);
    let tol = C_SCAN_STEP / 2.0 + 1e-9;
    Ok(CheckOutcome {
        name: "entanglement_landmarks",
        passed: (c_min - want_min).abs() <= tol && (c_max - want_max).abs() <= tol,
        detail: format!(
            "concurrence min at c = {c_min:.3} (expect {want_min:.3}), entropy max at c = {c_max:.3} (expect {want_max:.3})"
        ),
    })
}

/// Runs every check. Errors are solver failures, not failed checks.
pub fn run_all(rff_samples: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_w_identities()?,
        check_rff(rff_samples, seed)?,
        check_gram_constraints()?,
        check_ket_coverage(),
        check_c_equals_epsilon()?,
        check_letter_symmetry()?,
        check_joint_table()?,
        check_prepare_and_measure()?,
        check_entanglement_landmarks()?,
    ])
}
