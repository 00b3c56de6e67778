//! Auxiliary quantities from the convexity proofs.

use serde::{Deserialize, Serialize};

use super::Margin;
use crate::calculus::{point_at, Estimate, BOUNDARY_GAP};
use crate::error::{Error, Result};
use crate::gtrig::{Evaluator, FunctionKind, Parameter};
use crate::quadrature::{self, QuadResult, QuadratureConfig};

const FLOOR: f64 = 64.0 * f64::EPSILON;

/// Both sides of `lhs < rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Check {
    pub lhs: f64,
    pub rhs: QuadResult,
}

impl Lemma3Check {
    /// `rhs - lhs`.
    pub fn margin(&self) -> Margin {
        let r = self.rhs.value;
        Margin::new(r - self.lhs, self.rhs.err_estimate + FLOOR * (r.abs() + self.lhs.abs()))
    }
}

fn open_unit(what: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

fn above_one(p: Parameter) -> Result<f64> {
    let pv = p.value();
    if pv > 1.0 {
        Ok(pv)
    } else {
        Err(Error::Domain { what: "lemma3 (needs p > 1)", value: pv })
    }
}

/// `s p³/(p+1)² (1/(p+1)² - ln²s/p²)` against
/// `∫_0^1 u^(1/p) (1 - su)/(1 + su)³ ln²(su) du`, for `p > 1`, `0 < s < 1`.
pub fn lemma3_check(p: Parameter, s: f64) -> Result<Lemma3Check> {
    let pv = above_one(p)?;
    open_unit("lemma3 argument s", s)?;
    let ln_s = s.ln();
    let p1 = pv + 1.0;
    let lhs = s * pv.powi(3) / (p1 * p1) * (1.0 / (p1 * p1) - ln_s * ln_s / (pv * pv));
    let rhs = lemma3_integral(pv, s, ln_s)?;
    Ok(Lemma3Check { lhs, rhs })
}

/// The `s = 1` endpoint: `p³/(p+1)⁴` against
/// `∫_0^1 u^(1/p) (1 - u)/(1 + u)³ ln²u du`.
pub fn lemma3_reduced(p: Parameter) -> Result<Lemma3Check> {
    let pv = above_one(p)?;
    let lhs = pv.powi(3) / (pv + 1.0).powi(4);
    let rhs = lemma3_integral(pv, 1.0, 0.0)?;
    Ok(Lemma3Check { lhs, rhs })
}

fn lemma3_integral(p: f64, s: f64, ln_s: f64) -> Result<QuadResult> {
    let cfg = QuadratureConfig::certification();
    quadrature::integrate(
        |u| {
            let l = ln_s + u.ln();
            let su = s * u;
            (u.ln() / p).exp() * (1.0 - su) / (1.0 + su).powi(3) * l * l
        },
        0.0,
        1.0,
        &cfg,
    )?
    .into_result()
}

/// `∫_0^1 u^(1/p) ln²u du`, which equals `2p³/(1+p)³`.
pub fn lemma3_moment(p: Parameter) -> Result<QuadResult> {
    let pv = p.value();
    let cfg = QuadratureConfig::certification();
    quadrature::integrate(
        |u| {
            let l = u.ln();
            (l / pv).exp() * l * l
        },
        0.0,
        1.0,
        &cfg,
    )?
    .into_result()
}

/// `ζ(3)` by direct summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zeta3 {
    pub value: f64,
    /// Bound on the truncation error after the tail correction.
    pub tail_bound: f64,
}

/// Sums `1/n³` for `n <= N` (smallest terms first) and adds the midpoint of
/// the tail enclosure `1/(2(N+1)²) < Σ_{n>N} 1/n³ < 1/(2N²)`.
pub fn zeta3() -> Zeta3 {
    const N: u64 = 1_000_000;
    let sum: f64 = (1..=N).rev().map(|n| 1.0 / (n as f64).powi(3)).sum();
    let n = N as f64;
    let (lo, hi) = (0.5 / ((n + 1.0) * (n + 1.0)), 0.5 / (n * n));
    Zeta3 { value: sum + 0.5 * (lo + hi), tail_bound: 0.5 * (hi - lo) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Constant {
    /// `∫_0^1 u ln²u ((1 - u)/(1 + u)³ - 1/4) du`.
    pub quadrature: QuadResult,
    /// `π²/3 - ln 4 - (3/2) ζ(3) - 1/16`.
    pub closed_form: f64,
    pub zeta3: Zeta3,
}

/// The `p = 1` value of the monotone integral that bounds the `s = 1` case from below.
pub fn lemma3_constant() -> Result<Lemma3Constant> {
    let cfg = QuadratureConfig::certification();
    let quadrature = quadrature::integrate(
        |u| {
            let l = u.ln();
            u * l * l * ((1.0 - u) / (1.0 + u).powi(3) - 0.25)
        },
        0.0,
        1.0,
        &cfg,
    )?
    .into_result()?;
    let z = zeta3();
    let pi = std::f64::consts::PI;
    let closed_form = pi * pi / 3.0 - 4f64.ln() - 1.5 * z.value - 1.0 / 16.0;
    Ok(Lemma3Constant { quadrature, closed_form, zeta3: z })
}

/// `G(x) = x η²/φ(x)^(p-1) - ∫_0^x φ''_pp` with `η = [ln φ(x)]'_p`, the scaled
/// discriminant of the sine log-concavity quadratic.
pub fn theorem1_g(p: Parameter, x: f64) -> Result<Estimate> {
    theorem1_g_with(&Evaluator::certification(), p, x)
}

pub fn theorem1_g_with(ev: &Evaluator, p: Parameter, x: f64) -> Result<Estimate> {
    open_unit("theorem1_g", x)?;
    let q = 1.0 - x;
    if q < BOUNDARY_GAP {
        return Err(Error::BoundaryProximity { x, distance: q });
    }
    let pv = p.value();
    let pt = point_at(ev, FunctionKind::Sin, pv, f64::NAN, x, q, 0.0)?;
    let eta = pt.f_xp / pt.f_x;
    // 1/φ^(p-1) = (1 - x^p) φ
    let gap = -(pv * x.ln()).exp_m1();
    let first = x * eta * eta * gap * pt.f_x;
    let value = first - pt.f_pp.value;
    let (_, d2) = pt.integral_errs();
    Ok(Estimate { value, err: d2 + FLOOR * (first.abs() + pt.f_pp.value.abs()) })
}

/// `D/4` for the hyperbolic sine quadratic in `μ`:
/// `(x²(1+z)²)^-1 {-p z w² - (2w/p)(1 + pz - z ln z/(1+z)) - z ln²x/(p(1+z)²)}`
/// with `z = x^p` and `w = ln(1+z)/p² - z ln x/(p(1+z))`.
pub fn theorem4_discriminant(p: Parameter, x: f64) -> Result<Estimate> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain { what: "theorem4_discriminant", value: x });
    }
    let pv = p.value();
    let ln_x = x.ln();
    let ln_z = pv * ln_x;
    let z = ln_z.exp();
    let w = z.ln_1p() / (pv * pv) - z * ln_x / (pv * (1.0 + z));
    let terms = [
        -pv * z * w * w,
        -(2.0 * w / pv) * (1.0 + pv * z - z * ln_z / (1.0 + z)),
        -z * ln_x * ln_x / (pv * (1.0 + z) * (1.0 + z)),
    ];
    let scale = 1.0 / (x * x * (1.0 + z) * (1.0 + z));
    let value = scale * terms.iter().sum::<f64>();
    let err = FLOOR * scale * terms.iter().map(|t| t.abs()).sum::<f64>();
    Ok(Estimate { value, err })
}

/// The chain `u/v > u'/v' > 2x^p ln(1/x)/(1 - x^p)` for the hyperbolic tangent,
/// with `u = ∫_0^x t^p (t^p + 1) ln²t/(1 - t^p)³` and
/// `v = ∫_0^x t^p ln(1/t)/(1 - t^p)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem5Check {
    pub ratio: Estimate,
    /// `u'/v' = (x^p + 1) ln(1/x)/(1 - x^p)`.
    pub bound1: f64,
    /// `2 x^p ln(1/x)/(1 - x^p)`.
    pub bound2: f64,
    /// `bound1 - bound2`, which simplifies to `ln(1/x)`.
    pub bound_gap: f64,
}

impl Theorem5Check {
    /// `ratio - bound1`.
    pub fn ratio_margin(&self) -> Margin {
        Margin::new(self.ratio.value - self.bound1, self.ratio.err + FLOOR * self.bound1.abs())
    }

    /// `bound1 - bound2`.
    pub fn bound_margin(&self) -> Margin {
        Margin::new(self.bound_gap, FLOOR * self.bound1.abs())
    }
}

pub fn theorem5_ratio_check(p: Parameter, x: f64) -> Result<Theorem5Check> {
    theorem5_ratio_check_with(&Evaluator::certification(), p, x)
}

pub fn theorem5_ratio_check_with(ev: &Evaluator, p: Parameter, x: f64) -> Result<Theorem5Check> {
    open_unit("theorem5_ratio_check", x)?;
    let q = 1.0 - x;
    if q < BOUNDARY_GAP {
        return Err(Error::BoundaryProximity { x, distance: q });
    }
    let pv = p.value();
    let pt = point_at(ev, FunctionKind::Tanh, pv, f64::NAN, x, q, 0.0)?;
    let (d1, d2) = pt.integral_errs();
    let u = pt.f_pp.value;
    let v = -pt.f_p.value;
    let r = u / v;
    let ratio = Estimate { value: r, err: r.abs() * (d2 / u.abs() + d1 / v.abs() + FLOOR) };
    let ln_inv = -x.ln();
    let z = (pv * x.ln()).exp();
    let gap = -(pv * x.ln()).exp_m1();
    Ok(Theorem5Check { ratio, bound1: (z + 1.0) * ln_inv / gap, bound2: 2.0 * z * ln_inv / gap, bound_gap: ln_inv })
}
