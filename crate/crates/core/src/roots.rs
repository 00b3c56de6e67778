//! Safeguarded Newton iteration for monotone objectives.
//!
//! The objectives inverted in this crate are strictly increasing integrals
//! whose derivative is the (cheap) integrand, so Newton steps are used
//! whenever they stay inside the current bracket and shrink it fast enough;
//! otherwise the step falls back to bisection.

use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Stop when `|f(z) - target| <= residual_tol`.
    pub residual_tol: f64,
    /// Stop when the bracket is narrower than this many ulps of its ends.
    pub width_ulps: f64,
    pub max_iter: usize,
}

impl RootOptions {
    pub fn with_residual(residual_tol: f64) -> Self {
        Self { residual_tol, width_ulps: 4.0, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub z: f64,
    pub value: f64,
    /// `|f(z) - target|` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

/// Solves `f(z) = target` for strictly increasing `f` on `[lo, hi]`, given
/// `f(lo) <= target <= f(hi)`. `eval` returns `(f(z), f'(z))`.
pub fn solve_increasing<F>(
    mut eval: F,
    (mut lo, mut f_lo): (f64, f64),
    (mut hi, mut f_hi): (f64, f64),
    target: f64,
    opts: RootOptions,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if (f_lo - target).abs() <= opts.residual_tol {
        return Ok(Root { z: lo, value: f_lo, residual: (f_lo - target).abs(), iterations: 0 });
    }
    if (f_hi - target).abs() <= opts.residual_tol {
        return Ok(Root { z: hi, value: f_hi, residual: (f_hi - target).abs(), iterations: 0 });
    }

    // regula falsi start
    let mut z = if f_hi > f_lo {
        lo + (hi - lo) * ((target - f_lo) / (f_hi - f_lo)).clamp(0.05, 0.95)
    } else {
        0.5 * (lo + hi)
    };
    let mut best = Root { z, value: f64::NAN, residual: f64::INFINITY, iterations: 0 };
    let mut last_step = f64::INFINITY;

    for it in 1..=opts.max_iter {
        let (v, dv) = eval(z)?;
        let r = v - target;
        if !(r.abs() >= best.residual) {
            best = Root { z, value: v, residual: r.abs(), iterations: it };
        }
        if r.abs() <= opts.residual_tol {
            best.iterations = it;
            return Ok(best);
        }
        if r < 0.0 {
            lo = z;
            f_lo = v;
        } else {
            hi = z;
            f_hi = v;
        }
        let scale = lo.abs().max(hi.abs());
        if hi - lo <= opts.width_ulps * f64::EPSILON * scale || hi - lo <= f64::MIN_POSITIVE {
            best.iterations = it;
            return Ok(best);
        }

        let step = r / dv;
        let newton = z - step;
        let contracting = step.abs() <= 0.5 * last_step;
        if dv > 0.0 && newton > lo && newton < hi && contracting {
            last_step = step.abs();
            z = newton;
        } else {
            // secant inside the bracket, bisection if it hugs an end
            let width = hi - lo;
            let s = lo + width * ((target - f_lo) / (f_hi - f_lo));
            z = if s.is_finite() && s > lo + 0.1 * width && s < hi - 0.1 * width { s } else { 0.5 * (lo + hi) };
            last_step = f64::INFINITY;
        }
    }
    Ok(best)
}
