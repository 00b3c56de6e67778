//! Turán-type margins `f_p^2` against `f_{p-1} f_{p+1}`.

use super::Margin;
use crate::error::{Error, Result};
use crate::gtrig::{Evaluator, FunctionKind, Parameter};

/// `value = base (1 + d)` with `d` accurate when `value` is close to `base`.
#[derive(Debug, Clone, Copy)]
pub(super) struct Relative {
    pub base: f64,
    pub d: f64,
    pub err_d: f64,
}

/// Evaluates `kind` at `(p, y)` in the relative form used for differencing.
/// The base depends only on `kind` and `y`, so forms at different `p` share it.
pub(super) fn relative(ev: &Evaluator, kind: FunctionKind, p: Parameter, y: f64) -> Result<Relative> {
    let e = ev.eval(kind, p, y)?;
    let r = match kind {
        FunctionKind::Cos | FunctionKind::Cosh => Relative { base: 1.0, d: e.deviation, err_d: e.abs_err },
        FunctionKind::Tanh if y > 1.0 => Relative { base: 1.0, d: -e.one_minus, err_d: e.abs_err },
        _ => Relative { base: y, d: e.deviation / y, err_d: e.abs_err / y },
    };
    Ok(r)
}

/// Orientation making the conjectured direction positive.
fn orientation(kind: FunctionKind) -> Result<f64> {
    match kind {
        FunctionKind::Sin | FunctionKind::Cos | FunctionKind::Tanh => Ok(1.0),
        FunctionKind::Tan | FunctionKind::Sinh => Ok(-1.0),
        FunctionKind::Cosh => Err(Error::UnsupportedVariant("Turán margin for cosh".into())),
    }
}

/// Turán margin with the default evaluator.
pub fn turan_margin(kind: FunctionKind, p: Parameter, y: f64) -> Result<Margin> {
    turan_margin_with(&Evaluator::default(), kind, p, y)
}

/// `±(f_p(y)^2 - f_{p-1}(y) f_{p+1}(y))`, signed so that the conjectured
/// inequality gives a positive value: `f_p^2 > f_{p-1} f_{p+1}` for sin, cos
/// and tanh, the reverse for tan and sinh.
pub fn turan_margin_with(ev: &Evaluator, kind: FunctionKind, p: Parameter, y: f64) -> Result<Margin> {
    let sign = orientation(kind)?;
    let pv = p.value();
    if pv <= 1.0 {
        return Err(Error::Domain { what: "Turán margin (needs p > 1)", value: pv });
    }
    let in_domain = if kind.is_hyperbolic() { y > 0.0 && y.is_finite() } else { y > 0.0 && y < 1.0 };
    if !in_domain {
        return Err(Error::Domain { what: "Turán margin argument", value: y });
    }
    let lo = relative(ev, kind, p.offset(-1.0)?, y)?;
    let mid = relative(ev, kind, p, y)?;
    let hi = relative(ev, kind, p.offset(1.0)?, y)?;
    // (1 + d)^2 - (1 + a)(1 + b) = (2d - a - b) + (d^2 - ab)
    let (d, a, b) = (mid.d, lo.d, hi.d);
    let linear = (2.0 * d - a) - b;
    let quadratic = d * d - a * b;
    let delta = linear + quadratic;
    let b2 = mid.base * mid.base;
    let propagated = 2.0 * (1.0 + d.abs()) * mid.err_d + (1.0 + b.abs()) * lo.err_d + (1.0 + a.abs()) * hi.err_d;
    let roundoff = 8.0 * f64::EPSILON * (2.0 * d.abs() + a.abs() + b.abs() + d * d + (a * b).abs());
    Ok(Margin::new(sign * b2 * delta, b2 * (propagated + roundoff)))
}
