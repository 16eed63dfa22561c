//! ε sweeps of the key rates and Eve's optimized bounds, plus the CSV and
//! JSON layouts they are exported in. Numbers are written with 6
//! significant digits.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QkdError, Result};
use crate::keygen::{key_rate, mutual_information, shannon_limit, KeyCase};
use crate::security::{optimize_c, Side, ThresholdResult};

/// Inclusive grid `start, start+step, …, ≤ stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for EpsGrid {
    fn default() -> Self {
        Self { start: 0.0, stop: 0.35, step: 0.005 }
    }
}

impl EpsGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(QkdError::InvalidGrid(format!("step must be positive, got {step}")));
        }
        for v in [start, stop] {
            if !(0.0..=1.0).contains(&v) {
                return Err(QkdError::EpsilonOutOfRange(v));
            }
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.stop < self.start {
            return Vec::new();
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        // Computed as start + i·step to avoid accumulating rounding.
        (0..=n).map(|i| round_sig(self.start + i as f64 * self.step, 12)).collect()
    }
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(digits - 1 - mag);
    (x * factor).round() / factor
}

/// `%g`-style rendering with 6 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let x = round_sig(x, 6);
    let mag = x.abs().log10().floor() as i32;
    if (-5..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

/// One row of a per-case security curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub epsilon: f64,
    pub i_key: f64,
    pub chi_alice: Option<f64>,
    pub chi_bob: Option<f64>,
    pub c_star_alice: Option<f64>,
    pub c_star_bob: Option<f64>,
}

pub const CURVE_HEADER: &str = "epsilon,i_key,chi_alice,chi_bob,c_star_alice,c_star_bob";
pub const RATES_HEADER: &str = "epsilon,i_bit,i_trit,key_rate,shannon_limit";

/// Computes `I_case` and `χ*` for the requested sides at every grid point.
/// Grid points are evaluated in parallel; rows come back in grid order.
pub fn security_curve(case: KeyCase, sides: &[Side], grid: &[f64]) -> Result<Vec<CurveRow>> {
    grid.par_iter()
        .map(|&eps| {
            let mut row = CurveRow {
                epsilon: eps,
                i_key: mutual_information(eps, case)?,
                chi_alice: None,
                chi_bob: None,
                c_star_alice: None,
                c_star_bob: None,
            };
            for &side in sides {
                let (c, chi) = optimize_c(eps, case, side)?;
                match side {
                    Side::Alice => {
                        row.chi_alice = Some(chi);
                        row.c_star_alice = Some(c);
                    }
                    Side::Bob => {
                        row.chi_bob = Some(chi);
                        row.c_star_bob = Some(c);
                    }
                }
            }
            Ok(row)
        })
        .collect()
}

pub fn write_curve_csv<W: Write>(mut w: W, rows: &[CurveRow]) -> Result<()> {
    writeln!(w, "{CURVE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_sig(r.epsilon),
            fmt_sig(r.i_key),
            fmt_opt(r.chi_alice),
            fmt_opt(r.chi_bob),
            fmt_opt(r.c_star_alice),
            fmt_opt(r.c_star_bob)
        )?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateRow {
    pub epsilon: f64,
    pub i_bit: f64,
    pub i_trit: f64,
    pub key_rate: f64,
    pub shannon_limit: f64,
}

pub fn rate_curve(grid: &[f64]) -> Result<Vec<RateRow>> {
    grid.iter()
        .map(|&eps| {
            Ok(RateRow {
                epsilon: eps,
                i_bit: mutual_information(eps, KeyCase::Bit)?,
                i_trit: mutual_information(eps, KeyCase::Trit)?,
                key_rate: key_rate(eps)?,
                shannon_limit: shannon_limit(eps)?,
            })
        })
        .collect()
}

pub fn write_rates_csv<W: Write>(mut w: W, rows: &[RateRow]) -> Result<()> {
    writeln!(w, "{RATES_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_sig(r.epsilon),
            fmt_sig(r.i_bit),
            fmt_sig(r.i_trit),
            fmt_sig(r.key_rate),
            fmt_sig(r.shannon_limit)
        )?;
    }
    Ok(())
}

/// `ThresholdResult` with values rounded to 6 significant digits for export.
pub fn rounded(t: &ThresholdResult) -> ThresholdResult {
    ThresholdResult {
        epsilon_star: round_sig(t.epsilon_star, 6),
        info: round_sig(t.info, 6),
        c_star: round_sig(t.c_star, 6),
        ..*t
    }
}

/// Most conservative threshold over the results on one side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointBound {
    pub side: Side,
    pub epsilon_star: f64,
    pub limiting_case: KeyCase,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub results: Vec<ThresholdResult>,
    /// Minimum ε* over the cases on the reference side (Alice when present).
    pub joint_bound: Option<JointBound>,
}

impl ThresholdReport {
    pub fn new(results: Vec<ThresholdResult>) -> Self {
        let reference = if results.iter().any(|r| r.side == Side::Alice) { Side::Alice } else { Side::Bob };
        let joint_bound = results
            .iter()
            .filter(|r| r.side == reference)
            .min_by(|a, b| a.epsilon_star.total_cmp(&b.epsilon_star))
            .map(|r| JointBound { side: reference, epsilon_star: round_sig(r.epsilon_star, 6), limiting_case: r.case });
        Self { results: results.iter().map(rounded).collect(), joint_bound }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
