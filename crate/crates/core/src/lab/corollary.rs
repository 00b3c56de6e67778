//! Pointwise conditions equivalent to (log-)convexity in `p`, written with
//! the family kernels at `x` and their integrals over `[0, x]`.
//!
//! Writing `I1 = ∫_0^x k'_p` and `I2 = ∫_0^x k''_pp`:
//!
//! ```text
//! sin,  log:   φ(x)^(p-1)/x · I1² - 2 [ln φ(x)]'_p I1 + I2                     >= 0
//! sin,  plain: x^p/x · φ(x)^(p-1) · I1² - 2 [ln φ(x)]'_p I1 + I2               >= 0
//! tan,  log:   (1/x - (p-1) x^(p-1)) I1² + 2 x^p ln x/(1+x^p) I1 + I2          <= 0
//! tan,  plain: -p x^(p-1) I1² + 2 x^p ln x/(1+x^p) I1 + I2                     <= 0
//! sinh, log:   I1²/(1+x^p) - 2x λ'_p(x) I1 + x (1+x^p)^(-1/p) I2               <= 0
//! tanh, plain: p x^(p-1)/(1-x^p) I1² - 2 x^p ln x/(1-x^p)² I1 + I2/(1-x^p)    >= 0
//! ```
//!
//! Each left side is a negative multiple of the matching second derivative
//! of `g` or `ln g`, so the sign requirement is the theorem's claim.

use serde::{Deserialize, Serialize};

use crate::calculus::{point_at, Estimate, LemmaPoint, BOUNDARY_GAP};
use crate::error::{Error, Result};
use crate::gtrig::{Evaluator, FunctionKind, Parameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Log-convexity or log-concavity.
    LogConvexity,
    /// Convexity or concavity.
    Convexity,
}

/// `+1` if the condition must be nonnegative, `-1` if nonpositive.
pub fn required_sign(family: FunctionKind, variant: Variant) -> Result<f64> {
    match (family, variant) {
        (FunctionKind::Sin, _) | (FunctionKind::Tanh, Variant::Convexity) => Ok(1.0),
        (FunctionKind::Tan, _) | (FunctionKind::Sinh, Variant::LogConvexity) => Ok(-1.0),
        (FunctionKind::Sinh, Variant::Convexity) | (FunctionKind::Tanh, Variant::LogConvexity) => {
            Err(Error::UnsupportedVariant(format!("{family} {variant:?}")))
        }
        (FunctionKind::Cos | FunctionKind::Cosh, _) => Err(Error::UnsupportedFamily(family)),
    }
}

/// Corollary condition with the default evaluator.
pub fn corollary_condition(family: FunctionKind, variant: Variant, p: Parameter, x: f64) -> Result<f64> {
    corollary_condition_with(&Evaluator::default(), family, variant, p, x).map(|e| e.value)
}

/// Evaluates the left side of the condition at `x` with an error bound.
pub fn corollary_condition_with(
    ev: &Evaluator,
    family: FunctionKind,
    variant: Variant,
    p: Parameter,
    x: f64,
) -> Result<Estimate> {
    required_sign(family, variant)?;
    let bounded = matches!(family, FunctionKind::Sin | FunctionKind::Tanh);
    let in_domain = x > 0.0 && x.is_finite() && (!bounded || x < 1.0);
    if !in_domain {
        return Err(Error::Domain { what: "corollary condition", value: x });
    }
    let q = 1.0 - x;
    if bounded && q < BOUNDARY_GAP {
        return Err(Error::BoundaryProximity { x, distance: q });
    }
    let pt = point_at(ev, family, p.value(), f64::NAN, x, q, 0.0)?;
    let coef = coefficients(family, variant, &pt);
    let (d1, d2) = pt.integral_errs();
    let eval = |i1: f64, i2: f64| {
        let terms = [coef[0] * i1 * i1, coef[1] * i1, coef[2] * i2];
        (terms.iter().sum::<f64>(), terms.iter().map(|t| t.abs()).sum::<f64>())
    };
    let (i1, i2) = (pt.f_p.value, pt.f_pp.value);
    let (value, magnitude) = eval(i1, i2);
    let err =
        (eval(i1 + d1, i2).0 - value).abs() + (eval(i1, i2 + d2).0 - value).abs() + 64.0 * f64::EPSILON * magnitude;
    Ok(Estimate { value, err })
}

/// Coefficients of `I1²`, `I1` and `I2`.
fn coefficients(family: FunctionKind, variant: Variant, pt: &LemmaPoint) -> [f64; 3] {
    let (p, x) = (pt.p, pt.x);
    let ln_x = if pt.one_minus_x < 0.5 { (-pt.one_minus_x).ln_1p() } else { x.ln() };
    let xp = (p * ln_x).exp();
    // f_xp / f_x is [ln k]'_p at x
    let log_slope = pt.f_xp / pt.f_x;
    match (family, variant) {
        (FunctionKind::Sin, v) => {
            // φ^(p-1) = φ^p / φ = 1 / ((1 - x^p) φ)
            let phi_pm1 = 1.0 / (-(p * ln_x).exp_m1() * pt.f_x);
            let lead = match v {
                Variant::LogConvexity => phi_pm1 / x,
                Variant::Convexity => xp / x * phi_pm1,
            };
            [lead, -2.0 * log_slope, 1.0]
        }
        (FunctionKind::Tan, v) => {
            let xpm1 = xp / x;
            let lead = match v {
                Variant::LogConvexity => 1.0 / x - (p - 1.0) * xpm1,
                Variant::Convexity => -p * xpm1,
            };
            [lead, 2.0 * xp * ln_x / (1.0 + xp), 1.0]
        }
        (FunctionKind::Sinh, _) => [1.0 / (1.0 + xp), -2.0 * x * pt.f_xp, x * pt.f_x],
        (FunctionKind::Tanh, _) => {
            let gap = -(p * ln_x).exp_m1();
            [p * xp / x / gap, -2.0 * xp * ln_x / (gap * gap), 1.0 / gap]
        }
        _ => unreachable!("rejected by required_sign"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn par(p: f64) -> Parameter {
        Parameter::new(p).unwrap()
    }

    #[test]
    fn reference_examples_have_required_sign() {
        let sin = corollary_condition(FunctionKind::Sin, Variant::LogConvexity, par(2.0), 0.5).unwrap();
        let tanh = corollary_condition(FunctionKind::Tanh, Variant::Convexity, par(2.0), 0.5).unwrap();
        let tan = corollary_condition(FunctionKind::Tan, Variant::LogConvexity, par(2.0), 0.5).unwrap();
        assert!(sin > 0.0 && tanh > 0.0 && tan < 0.0, "{sin} {tanh} {tan}");
    }

    #[test]
    fn conditions_are_scaled_lemma_quantities() {
        let ev = Evaluator::default();
        let cases = [
            (FunctionKind::Sin, Variant::LogConvexity),
            (FunctionKind::Sin, Variant::Convexity),
            (FunctionKind::Tan, Variant::LogConvexity),
            (FunctionKind::Tan, Variant::Convexity),
            (FunctionKind::Sinh, Variant::LogConvexity),
            (FunctionKind::Tanh, Variant::Convexity),
        ];
        for (family, variant) in cases {
            for (p, x) in [(0.7, 0.3), (2.0, 0.5), (3.5, 0.9), (6.0, 0.99)] {
                let c = corollary_condition_with(&ev, family, variant, par(p), x).unwrap();
                let pt = point_at(&ev, family, p, f64::NAN, x, 1.0 - x, 0.0).unwrap();
                let fx = pt.f_x;
                let expected = match (family, variant) {
                    (FunctionKind::Sinh, _) => -(x * fx) * (x * fx) * pt.d2logg().unwrap().value,
                    (FunctionKind::Tanh, _) => -fx * fx * pt.d2g().value,
                    (_, Variant::LogConvexity) => -x * fx * pt.d2logg().unwrap().value,
                    (_, Variant::Convexity) => -fx * pt.d2g().value,
                };
                let tol = 1e-9 * expected.abs().max(1e-6) + 4.0 * c.err;
                assert!(
                    (c.value - expected).abs() < tol,
                    "{family} {variant:?} p={p} x={x}: {} vs {expected}",
                    c.value
                );
            }
        }
    }

    #[test]
    fn unsupported_and_domain() {
        assert!(corollary_condition(FunctionKind::Cos, Variant::Convexity, par(2.0), 0.5).is_err());
        assert!(corollary_condition(FunctionKind::Sinh, Variant::Convexity, par(2.0), 0.5).is_err());
        assert!(corollary_condition(FunctionKind::Sin, Variant::Convexity, par(2.0), 1.0).is_err());
        assert!(corollary_condition(FunctionKind::Tan, Variant::Convexity, par(2.0), 0.0).is_err());
        assert!(matches!(
            corollary_condition(FunctionKind::Tanh, Variant::Convexity, par(2.0), 1.0 - 1e-10),
            Err(Error::BoundaryProximity { .. })
        ));
    }
}
