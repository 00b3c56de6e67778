//! Deterministic tanh-sinh (double-exponential) quadrature.
//!
//! Every rule in this module evaluates the kernel strictly inside the
//! interval. Nodes cluster double-exponentially towards both endpoints, which
//! makes the scheme robust for integrable algebraic and logarithmic endpoint
//! singularities. Refinement is nested: level `L` reuses every node of level
//! `L - 1` and adds the odd multiples of the halved step, so the error
//! estimate `|I_L - I_{L-1}|` costs no extra evaluations.
//!
//! Kernels that are singular at an endpoint lose accuracy when they have to
//! recompute the distance to that endpoint from a rounded abscissa. The
//! `*_with_gaps` variants therefore hand the kernel the exact distances as
//! extra arguments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for one integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_levels: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-14, max_levels: 12 }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_levels: u32) -> Result<Self> {
        let cfg = Self { rel_tol, abs_tol, max_levels };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Configuration used when certifying signs of tiny quantities: the
    /// absolute floor is pushed to the bottom of the normal range so that
    /// only the relative tolerance decides convergence.
    pub fn certification() -> Self {
        Self { rel_tol: 1e-12, abs_tol: f64::MIN_POSITIVE, max_levels: 12 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if self.max_levels < 1 {
            return Err(Error::InvalidConfig("max_levels must be at least 1".into()));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub levels_used: u32,
    /// `false` when the tolerance was not met at `max_levels`; `value` is
    /// then the best available estimate.
    pub converged: bool,
}

impl QuadResult {
    /// A value known without quadrature error.
    pub fn exact(value: f64) -> Self {
        Self { value, err_estimate: 0.0, levels_used: 0, converged: true }
    }

    /// Turns an unconverged result into [`Error::NonConvergence`].
    pub fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence { value: self.value, err_estimate: self.err_estimate })
        }
    }

    /// Sum of two pieces of one integral.
    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            levels_used: self.levels_used.max(other.levels_used),
            converged: self.converged && other.converged,
        }
    }

    pub fn scaled(self, factor: f64) -> QuadResult {
        QuadResult { value: self.value * factor, err_estimate: self.err_estimate * factor.abs(), ..self }
    }
}

/// Integrates `kernel` over `[lower, upper]`.
pub fn integrate<F>(kernel: F, lower: f64, upper: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    check_interval(lower, upper)?;
    cfg.validate()?;
    Ok(tanh_sinh(
        |x: f64, _, _| {
            let x = x.clamp(lower.next_up(), upper.next_down());
            kernel(x)
        },
        lower,
        upper,
        cfg,
    ))
}

/// Integrates `kernel(x, x - lower, upper - x)` over `[lower, upper]`, with the
/// two gaps computed without cancellation.
pub fn integrate_with_gaps<F>(kernel: F, lower: f64, upper: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    check_interval(lower, upper)?;
    cfg.validate()?;
    Ok(tanh_sinh(kernel, lower, upper, cfg))
}

/// Integrates a kernel that behaves like `C (upper - t)^(-exponent)` near
/// `upper`.
///
/// The substitution `t = upper - (upper - lower) s^m` with
/// `m = 1 / (1 - exponent)` turns the integrand into a bounded function of
/// `s`. No node is placed at `upper`: abscissae that would round onto it are
/// moved to the closest representable point below, and the transformed
/// weight is evaluated at that point so the product stays consistent.
pub fn integrate_singular_upper<F>(
    kernel: F,
    lower: f64,
    upper: f64,
    singularity_exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let width = upper - lower;
    singular_upper(
        |gap: f64| {
            let mut t = upper - gap;
            if t >= upper {
                t = upper.next_down();
            }
            (t, upper - t)
        },
        |t, _| kernel(t),
        lower,
        upper,
        singularity_exponent,
        width,
        cfg,
    )
}

/// Like [`integrate_singular_upper`], but the kernel receives
/// `(t, upper - t)` with the gap computed exactly from the substitution.
pub fn integrate_singular_upper_with_gap<F>(
    kernel: F,
    lower: f64,
    upper: f64,
    singularity_exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    let width = upper - lower;
    singular_upper(|gap: f64| (upper - gap, gap), kernel, lower, upper, singularity_exponent, width, cfg)
}

fn singular_upper<P, F>(
    place: P,
    kernel: F,
    lower: f64,
    upper: f64,
    exponent: f64,
    width: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult>
where
    P: Fn(f64) -> (f64, f64),
    F: Fn(f64, f64) -> f64,
{
    check_interval(lower, upper)?;
    cfg.validate()?;
    if !(exponent < 1.0) || exponent.is_nan() {
        return Err(Error::NonIntegrable { exponent });
    }
    if exponent <= 0.0 {
        return integrate_with_gaps(|t, _, gap| kernel(t, gap), lower, upper, cfg);
    }
    let m = 1.0 / (1.0 - exponent);
    let scale = m * width.powf(1.0 - exponent);
    Ok(tanh_sinh(
        |_, s, _| {
            let gap = width * s.powf(m);
            if gap <= 0.0 {
                return 0.0;
            }
            let (t, gap) = place(gap);
            scale * gap.powf(exponent) * kernel(t, gap)
        },
        0.0,
        1.0,
        cfg,
    ))
}

fn check_interval(lower: f64, upper: f64) -> Result<()> {
    if lower < upper && lower.is_finite() && upper.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInterval { lower, upper })
    }
}

/// `u = (pi/2) sinh t` beyond which the node gap underflows.
const U_MAX: f64 = 350.0;

/// One tanh-sinh node at `t >= 0`: relative gap to the nearer endpoint (in
/// units of the interval width) and weight (in units of the half width).
fn node(t: f64) -> Option<(f64, f64)> {
    let u = std::f64::consts::FRAC_PI_2 * t.sinh();
    if u > U_MAX {
        return None;
    }
    let e2 = (-2.0 * u).exp();
    let gap = e2 / (1.0 + e2);
    if gap <= 0.0 {
        return None;
    }
    let sech = 2.0 * (-u).exp() / (1.0 + e2);
    let weight = std::f64::consts::FRAC_PI_2 * t.cosh() * sech * sech;
    Some((gap, weight))
}

/// Accumulates the terms at `t = first, first + stride, ...` on both sides of
/// the midpoint.
fn accumulate<F>(f: &F, lower: f64, upper: f64, first: f64, stride: f64, scale_hint: f64) -> f64
where
    F: Fn(f64, f64, f64) -> f64,
{
    let width = upper - lower;
    let mut sum = 0.0;
    let mut k = 0u32;
    let mut quiet = [0u8; 2];
    let mut done = [false; 2];
    loop {
        let t = first + stride * k as f64;
        let Some((rel_gap, w)) = node(t) else { break };
        let gap = width * rel_gap;
        let far = width - gap;
        for (side, q) in quiet.iter_mut().enumerate() {
            if done[side] {
                continue;
            }
            let term = if side == 0 { w * f(upper - gap, far, gap) } else { w * f(lower + gap, gap, far) };
            sum += term;
            let scale = scale_hint.abs().max(sum.abs());
            if t > 1.0 && term.abs() <= 1e-20 * scale {
                *q += 1;
                if *q >= 2 {
                    done[side] = true;
                }
            } else {
                *q = 0;
            }
        }
        if done[0] && done[1] {
            break;
        }
        k += 1;
    }
    sum
}

fn tanh_sinh<F>(f: F, lower: f64, upper: f64, cfg: &QuadratureConfig) -> QuadResult
where
    F: Fn(f64, f64, f64) -> f64,
{
    let half = 0.5 * (upper - lower);
    let mid = lower + half;
    let centre = std::f64::consts::FRAC_PI_2 * f(mid, half, half);

    // Level 0 at h = 1, split into even and odd nodes so that the h = 2 sum
    // provides the first error estimate.
    let even = centre + accumulate(&f, lower, upper, 2.0, 2.0, centre);
    let odd = accumulate(&f, lower, upper, 1.0, 2.0, even);
    let coarse = half * 2.0 * even;
    let mut sum = even + odd;
    let mut h = 1.0;
    let mut value = half * h * sum;
    let mut err = (value - coarse).abs();
    let mut level = 0u32;

    while level + 1 < cfg.max_levels && !(err <= cfg.target(value)) && value.is_finite() {
        level += 1;
        h *= 0.5;
        sum += accumulate(&f, lower, upper, h, 2.0 * h, sum);
        let next = half * h * sum;
        err = (next - value).abs();
        value = next;
    }

    QuadResult {
        value,
        err_estimate: err,
        levels_used: level + 1,
        converged: err <= cfg.target(value) && value.is_finite(),
    }
}
