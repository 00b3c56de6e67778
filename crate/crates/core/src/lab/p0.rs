//! Exploratory search for the parameter below which `p ↦ sin_p(y)` stops
//! being concave.

use serde::{Deserialize, Serialize};

use crate::calculus::derivative_report_with;
use crate::error::{Error, Result};
use crate::gtrig::{Evaluator, FunctionKind, Parameter};
use crate::numeric::geomspace;

/// Coarse points scanned downward before bisecting.
const COARSE_POINTS: usize = 48;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum P0Outcome {
    /// `∂²sin_p(y)/∂p²` is negative just above `p` and nonnegative at the
    /// lower end of a bracket of width at most `tol`.
    Threshold { p: f64, lower: f64, upper: f64 },
    /// Negative on every coarse point of the search interval.
    NoSignChange,
    /// The indicator could not be evaluated.
    Failed { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P0Witness {
    pub y: f64,
    #[serde(flatten)]
    pub outcome: P0Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P0Search {
    pub p_lo: f64,
    pub p_hi: f64,
    pub tol: f64,
    /// Largest located threshold, `None` if no `y` changed sign.
    pub p0_estimate: Option<f64>,
    pub witnesses: Vec<P0Witness>,
}

pub fn find_p0(y_grid: &[f64], p_lo: f64, p_hi: f64, tol: f64) -> Result<P0Search> {
    find_p0_with(&Evaluator::certification(), y_grid, p_lo, p_hi, tol)
}

/// For each `y`, walks down from `p_hi` over a geometric grid until
/// `∂²sin_p(y)/∂p² >= 0`, then bisects the last step to width `tol`.
/// Sign changes narrower than a coarse step can be missed.
pub fn find_p0_with(ev: &Evaluator, y_grid: &[f64], p_lo: f64, p_hi: f64, tol: f64) -> Result<P0Search> {
    if !(p_lo > 0.0 && p_lo < p_hi && p_hi.is_finite()) {
        return Err(Error::InvalidInterval { lower: p_lo, upper: p_hi });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidConfig(format!("tol must be positive, got {tol}")));
    }
    if let Some(&y) = y_grid.iter().find(|&&y| !(y > 0.0 && y < 1.0)) {
        return Err(Error::Domain { what: "p0 search argument", value: y });
    }
    let witnesses: Vec<P0Witness> = y_grid
        .iter()
        .map(|&y| {
            let outcome = match locate(ev, y, p_lo, p_hi, tol) {
                Ok(Some((lower, upper))) => P0Outcome::Threshold { p: upper, lower, upper },
                Ok(None) => P0Outcome::NoSignChange,
                Err(e) => P0Outcome::Failed { message: e.to_string() },
            };
            P0Witness { y, outcome }
        })
        .collect();
    let p0_estimate = witnesses
        .iter()
        .filter_map(|w| match w.outcome {
            P0Outcome::Threshold { p, .. } => Some(p),
            _ => None,
        })
        .reduce(f64::max);
    Ok(P0Search { p_lo, p_hi, tol, p0_estimate, witnesses })
}

fn concave_at(ev: &Evaluator, p: f64, y: f64) -> Result<bool> {
    let r = derivative_report_with(ev, FunctionKind::Sin, Parameter::new(p)?, y)?;
    Ok(r.d2g_dp2 < 0.0)
}

/// Bracket `(lower, upper)` with concavity failing at `lower` and holding at
/// `upper`.
fn locate(ev: &Evaluator, y: f64, p_lo: f64, p_hi: f64, tol: f64) -> Result<Option<(f64, f64)>> {
    let grid = geomspace(p_lo, p_hi, COARSE_POINTS);
    if !concave_at(ev, p_hi, y)? {
        return Ok(Some((p_hi, p_hi)));
    }
    let mut upper = p_hi;
    for &p in grid.iter().rev().skip(1) {
        if concave_at(ev, p, y)? {
            upper = p;
            continue;
        }
        let mut lower = p;
        while upper - lower > tol {
            let mid = 0.5 * (lower + upper);
            if concave_at(ev, mid, y)? {
                upper = mid;
            } else {
                lower = mid;
            }
        }
        return Ok(Some((lower, upper)));
    }
    Ok(None)
}
