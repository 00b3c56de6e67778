//! Parameter derivatives of the inverse functions.
//!
//! If `g(p, y)` is defined implicitly by `f(p, g) = y` with
//! `f(p, x) = ∫_0^x k(p, t) dt`, then
//!
//! ```text
//! g'_p      = -f'_p / f'_x
//! g''_pp    = (f'_x)^-2 (2 f'_p f''_xp - f'_x f''_pp - (f'_p)^2 f''_xx / f'_x)
//! (ln g)''  = (x f'_x)^-2 (2x f'_p f''_xp - x f'_x f''_pp - x (f'_p)^2 f''_xx / f'_x - (f'_p)^2)
//! ```
//!
//! with everything evaluated at `x = g(p, y)`. Here `f'_x = k`, `f''_xx = k'_t`,
//! `f''_xp = k'_p` and `f'_p`, `f''_pp` are integrals of `k'_p`, `k''_pp`.
//! The four kernel families are those of the sine, tangent, hyperbolic sine
//! and hyperbolic tangent; cosine and hyperbolic cosine follow from
//! `ln cos = ln sin - ln tan` and `ln cosh = ln sinh - ln tanh`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gtrig::{Evaluation, Evaluator, FunctionKind, Parameter};
use crate::numeric::{ln_one_minus_exp, logistic, softplus};
use crate::quadrature::{self, QuadResult};

/// Distance from `x = 1` below which the bounded families refuse to report.
pub const BOUNDARY_GAP: f64 = 1e-8;

const FLOOR_ULPS: f64 = 64.0;

/// Pointwise kernels `(p, t) ↦ value` of one defining integral.
#[derive(Debug, Clone, Copy)]
pub struct KernelBundle {
    /// One of `Sin`, `Tan`, `Sinh`, `Tanh`.
    pub family: FunctionKind,
    pub f_x: fn(f64, f64) -> f64,
    pub f_xx: fn(f64, f64) -> f64,
    /// `f''_xp`, which is the `f'_p` integrand evaluated at the upper limit.
    pub f_xp: fn(f64, f64) -> f64,
    pub f_p_integrand: fn(f64, f64) -> f64,
    pub f_pp_integrand: fn(f64, f64) -> f64,
}

/// The four kernel values at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Kernels {
    f_x: f64,
    f_xx: f64,
    f_p: f64,
    f_pp: f64,
}

/// Kernels at `t` given `ln t` (which carries `1 - t` near `t = 1`).
fn kernels(family: FunctionKind, p: f64, t: f64, ln_t: f64) -> Kernels {
    let a = p * ln_t;
    match family {
        FunctionKind::Sin => {
            // φ = (1 - t^p)^(-1/p), η = φ'_p / φ, r = t^p / (1 - t^p)
            let l = ln_one_minus_exp(a);
            let phi = (-l / p).exp();
            let r = 1.0 / (-a).exp_m1();
            let eta = (l + a * r) / (p * p);
            Kernels {
                f_x: phi,
                f_xx: phi * r / t,
                f_p: phi * eta,
                f_pp: phi * (eta * eta - 2.0 * eta / p + r * (1.0 + r) * ln_t * ln_t / p),
            }
        }
        FunctionKind::Tan => {
            let (sa, sm) = (logistic(a), logistic(-a));
            Kernels {
                f_x: sm,
                f_xx: -(p / t) * sa * sm,
                f_p: -ln_t * sa * sm,
                f_pp: ln_t * ln_t * sa * sm * (0.5 * a).tanh(),
            }
        }
        FunctionKind::Sinh => {
            let s = softplus(a);
            let lambda = (-s / p).exp();
            let kappa = if a > 0.0 {
                ((-a).exp().ln_1p() + a * logistic(-a)) / (p * p)
            } else {
                (s - a * logistic(a)) / (p * p)
            };
            let (sa, sm) = (logistic(a), logistic(-a));
            Kernels {
                f_x: lambda,
                f_xx: -(lambda / t) * sa,
                f_p: lambda * kappa,
                f_pp: lambda * (kappa * kappa - 2.0 * kappa / p - ln_t * ln_t * sa * sm / p),
            }
        }
        FunctionKind::Tanh => {
            let r = 1.0 / (-a).exp_m1();
            let rr = r * (1.0 + r);
            Kernels { f_x: 1.0 + r, f_xx: (p / t) * rr, f_p: ln_t * rr, f_pp: ln_t * ln_t * rr * (1.0 + 2.0 * r) }
        }
        FunctionKind::Cos | FunctionKind::Cosh => unreachable!("derived families have no kernels"),
    }
}

macro_rules! kernel_fns {
    ($($family:ident => $fx:ident, $fxx:ident, $fp:ident, $fpp:ident;)*) => {$(
        fn $fx(p: f64, t: f64) -> f64 { kernels(FunctionKind::$family, p, t, t.ln()).f_x }
        fn $fxx(p: f64, t: f64) -> f64 { kernels(FunctionKind::$family, p, t, t.ln()).f_xx }
        fn $fp(p: f64, t: f64) -> f64 { kernels(FunctionKind::$family, p, t, t.ln()).f_p }
        fn $fpp(p: f64, t: f64) -> f64 { kernels(FunctionKind::$family, p, t, t.ln()).f_pp }
    )*};
}

kernel_fns! {
    Sin => sin_fx, sin_fxx, sin_fp, sin_fpp;
    Tan => tan_fx, tan_fxx, tan_fp, tan_fpp;
    Sinh => sinh_fx, sinh_fxx, sinh_fp, sinh_fpp;
    Tanh => tanh_fx, tanh_fxx, tanh_fp, tanh_fpp;
}

/// A kernel `(p, t) -> value`.
pub type KernelFn = fn(f64, f64) -> f64;

/// Kernel bundle of the defining integral of `family`.
pub fn make_bundle(family: FunctionKind) -> Result<KernelBundle> {
    let (f_x, f_xx, f_p, f_pp): (KernelFn, KernelFn, KernelFn, KernelFn) = match family {
        FunctionKind::Sin => (sin_fx, sin_fxx, sin_fp, sin_fpp),
        FunctionKind::Tan => (tan_fx, tan_fxx, tan_fp, tan_fpp),
        FunctionKind::Sinh => (sinh_fx, sinh_fxx, sinh_fp, sinh_fpp),
        FunctionKind::Tanh => (tanh_fx, tanh_fxx, tanh_fp, tanh_fpp),
        FunctionKind::Cos | FunctionKind::Cosh => return Err(Error::UnsupportedFamily(family)),
    };
    Ok(KernelBundle { family, f_x, f_xx, f_xp: f_p, f_p_integrand: f_p, f_pp_integrand: f_pp })
}

fn is_bounded(family: FunctionKind) -> bool {
    matches!(family, FunctionKind::Sin | FunctionKind::Tanh)
}

/// A value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

/// Everything the derivative formulas need at one `(p, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaPoint {
    pub family: FunctionKind,
    pub p: f64,
    pub y: f64,
    /// `x = g(p, y)`, the forward value.
    pub x: f64,
    /// `1 - x`, accurate for the bounded families.
    pub one_minus_x: f64,
    /// Uncertainty of `x`.
    pub x_err: f64,
    pub f_x: f64,
    pub f_xx: f64,
    pub f_xp: f64,
    pub f_p: QuadResult,
    pub f_pp: QuadResult,
    /// Roundoff floors for `f_p` and `f_pp` (sums of piece magnitudes).
    f_p_scale: f64,
    f_pp_scale: f64,
    /// Kernel values at `x + x_err`, for propagating the uncertainty of `x`.
    shifted: Kernels,
    shifted_f_pp_at_x: f64,
}

#[derive(Debug, Clone, Copy)]
struct Inputs {
    x: f64,
    fx: f64,
    fxx: f64,
    fxp: f64,
    fp: f64,
    fpp: f64,
}

fn lemma_dg(v: &Inputs) -> (f64, f64) {
    let d = -v.fp / v.fx;
    (d, d.abs())
}

fn lemma_d2g(v: &Inputs) -> (f64, f64) {
    let t1 = 2.0 * v.fp * v.fxp;
    let t2 = v.fx * v.fpp;
    let t3 = v.fp * v.fp * v.fxx / v.fx;
    let s = v.fx * v.fx;
    ((t1 - t2 - t3) / s, (t1.abs() + t2.abs() + t3.abs()) / s)
}

/// `(1/2) ∂_x (f'_p/f'_x)^2 - ∂_p (f'_p/f'_x)`, expanded term by term.
fn lemma_d2g_remark(v: &Inputs) -> (f64, f64) {
    let ratio = v.fp / v.fx;
    let dx_ratio = (v.fxp * v.fx - v.fp * v.fxx) / (v.fx * v.fx);
    let dp_ratio = (v.fpp * v.fx - v.fp * v.fxp) / (v.fx * v.fx);
    let a = ratio * dx_ratio;
    (a - dp_ratio, a.abs() + dp_ratio.abs())
}

fn lemma_d2logg(v: &Inputs) -> (f64, f64) {
    let t1 = 2.0 * v.x * v.fp * v.fxp;
    let t2 = v.x * v.fx * v.fpp;
    let t3 = v.x * v.fp * v.fp * v.fxx / v.fx;
    let t4 = v.fp * v.fp;
    let s = (v.x * v.fx) * (v.x * v.fx);
    ((t1 - t2 - t3 - t4) / s, (t1.abs() + t2.abs() + t3.abs() + t4.abs()) / s)
}

impl LemmaPoint {
    fn inputs(&self) -> Inputs {
        Inputs { x: self.x, fx: self.f_x, fxx: self.f_xx, fxp: self.f_xp, fp: self.f_p.value, fpp: self.f_pp.value }
    }

    /// Evaluates `formula` with a first-order bound over every input's
    /// uncertainty plus a roundoff floor.
    fn propagate(&self, formula: fn(&Inputs) -> (f64, f64)) -> Estimate {
        let base = self.inputs();
        let (value, magnitude) = formula(&base);
        let (d_fp, d_fpp) = self.integral_errs();
        let mut err = FLOOR_ULPS * f64::EPSILON * magnitude;
        let mut bump = |v: Inputs| {
            let q = formula(&v).0;
            if q.is_finite() {
                err += (q - value).abs();
            } else {
                err = f64::INFINITY;
            }
        };
        bump(Inputs { fp: base.fp + d_fp, ..base });
        bump(Inputs { fpp: base.fpp + d_fpp, ..base });
        if self.x_err > 0.0 {
            bump(Inputs {
                x: base.x + self.x_err,
                fx: self.shifted.f_x,
                fxx: self.shifted.f_xx,
                fxp: self.shifted.f_p,
                fp: base.fp + self.f_xp * self.x_err,
                fpp: base.fpp + self.shifted_f_pp_at_x * self.x_err,
            });
        }
        Estimate { value, err }
    }

    /// Uncertainties of `f_p` and `f_pp`, including the roundoff floor.
    pub fn integral_errs(&self) -> (f64, f64) {
        let eps = f64::EPSILON;
        (
            self.f_p.err_estimate + FLOOR_ULPS * eps * self.f_p_scale,
            self.f_pp.err_estimate + FLOOR_ULPS * eps * self.f_pp_scale,
        )
    }

    /// `∂g/∂p`.
    pub fn dg(&self) -> Estimate {
        self.propagate(lemma_dg)
    }

    /// `∂²g/∂p²`.
    pub fn d2g(&self) -> Estimate {
        self.propagate(lemma_d2g)
    }

    /// `∂²g/∂p²` through the alternate expansion.
    pub fn d2g_remark(&self) -> Estimate {
        self.propagate(lemma_d2g_remark)
    }

    /// `∂²(ln g)/∂p²`.
    pub fn d2logg(&self) -> Result<Estimate> {
        if self.x == 0.0 {
            return Err(Error::Domain { what: "log of inverse function", value: self.y });
        }
        Ok(self.propagate(lemma_d2logg))
    }
}

/// Computes the integrals and pointwise kernels at `x = g(p, y)`, `y > 0`.
pub fn lemma_point(ev: &Evaluator, bundle: &KernelBundle, p: Parameter, y: f64) -> Result<LemmaPoint> {
    let family = bundle.family;
    let pv = p.value();
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain { what: "derivative argument", value: y });
    }
    let forward: Evaluation = match family {
        FunctionKind::Sin => {
            if pv > 1.0 && y >= 0.5 * p.half_period().value() {
                return Err(Error::Domain { what: "sin_p derivatives", value: y });
            }
            ev.sin(p, y)?
        }
        FunctionKind::Tan => ev.tan(p, y)?,
        FunctionKind::Sinh => ev.sinh(p, y)?,
        FunctionKind::Tanh => ev.tanh(p, y)?,
        FunctionKind::Cos | FunctionKind::Cosh => return Err(Error::UnsupportedFamily(family)),
    };
    let x = forward.value;
    let q = forward.one_minus;
    if family == FunctionKind::Sin && q < BOUNDARY_GAP {
        return Err(Error::BoundaryProximity { x, distance: q });
    }
    if family == FunctionKind::Tanh && !(q > 0.0 && q.ln() > -700.0) {
        return Err(Error::BoundaryProximity { x, distance: q });
    }
    // The bounded kernels work from `1 - x` once it drops below 1/2, so the
    // rounding of `x` itself does not enter.
    let rounding = if is_bounded(family) && q < 0.5 { q } else { x };
    let x_err = forward.abs_err + f64::EPSILON * rounding;
    point_at(ev, family, pv, y, x, q, x_err)
}

/// Same as [`lemma_point`] but at an explicit `x` (with `1 - x` supplied for
/// the bounded families).
pub(crate) fn point_at(
    ev: &Evaluator,
    family: FunctionKind,
    p: f64,
    y: f64,
    x: f64,
    one_minus_x: f64,
    x_err: f64,
) -> Result<LemmaPoint> {
    let here = kernels_at(family, p, x, one_minus_x);
    let (f_p, f_p_scale) = integrate_kernel(ev, family, p, x, one_minus_x, |k| k.f_p)?;
    let (f_pp, f_pp_scale) = integrate_kernel(ev, family, p, x, one_minus_x, |k| k.f_pp)?;
    let xs = x + x_err;
    let shifted = kernels_at(family, p, xs, one_minus_x - x_err);
    Ok(LemmaPoint {
        family,
        p,
        y,
        x,
        one_minus_x,
        x_err,
        f_x: here.f_x,
        f_xx: here.f_xx,
        f_xp: here.f_p,
        f_p,
        f_pp,
        f_p_scale,
        f_pp_scale,
        shifted,
        shifted_f_pp_at_x: here.f_pp,
    })
}

fn kernels_at(family: FunctionKind, p: f64, x: f64, one_minus_x: f64) -> Kernels {
    let ln_t =
        if is_bounded(family) && one_minus_x < 0.5 && one_minus_x > 0.0 { (-one_minus_x).ln_1p() } else { x.ln() };
    kernels(family, p, x, ln_t)
}

/// `∫_0^x` of one kernel component, returning the result and the sum of the
/// pieces' magnitudes.
fn integrate_kernel<S>(
    ev: &Evaluator,
    family: FunctionKind,
    p: f64,
    x: f64,
    one_minus_x: f64,
    pick: S,
) -> Result<(QuadResult, f64)>
where
    S: Fn(Kernels) -> f64 + Copy,
{
    let cfg = &ev.quad;
    let near = |lo: f64, hi: f64| quadrature::integrate(|t| pick(kernels(family, p, t, t.ln())), lo, hi, cfg);
    if is_bounded(family) {
        if x <= 0.5 {
            let r = near(0.0, x)?;
            return Ok((r, r.value.abs()));
        }
        let head = near(0.0, 0.5)?;
        // t = 1 - e^w
        let tail = quadrature::integrate(
            |w| {
                let e = w.exp();
                pick(kernels(family, p, 1.0 - e, (-e).ln_1p())) * e
            },
            one_minus_x.ln(),
            -LN_2,
            cfg,
        )?;
        return Ok((head.combine(tail), head.value.abs() + tail.value.abs()));
    }
    if x <= 1.0 {
        let r = near(0.0, x)?;
        return Ok((r, r.value.abs()));
    }
    let head = near(0.0, 1.0)?;
    // t = e^u
    let tail = quadrature::integrate(|u| pick(kernels(family, p, u.exp(), u)) * u.exp(), 0.0, x.ln(), cfg)?;
    Ok((head.combine(tail), head.value.abs() + tail.value.abs()))
}

/// All parameter derivatives at one `(p, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub kind: FunctionKind,
    pub p: f64,
    pub y: f64,
    pub g: f64,
    pub dg_dp: f64,
    pub d2g_dp2: f64,
    pub d2logg_dp2: f64,
    /// Sum of the quadrature error estimates of the integrals involved.
    pub quad_err: f64,
    /// Error bounds of `g`, `dg_dp`, `d2g_dp2`, `d2logg_dp2`.
    pub g_err: f64,
    pub dg_err: f64,
    pub d2g_err: f64,
    pub d2logg_err: f64,
}

impl DerivativeReport {
    fn zero(kind: FunctionKind, p: f64, y: f64) -> Self {
        Self {
            kind,
            p,
            y,
            g: if kind.is_odd() { 0.0 } else { 1.0 },
            dg_dp: 0.0,
            d2g_dp2: 0.0,
            d2logg_dp2: 0.0,
            quad_err: 0.0,
            g_err: 0.0,
            dg_err: 0.0,
            d2g_err: 0.0,
            d2logg_err: 0.0,
        }
    }

    fn from_point(kind: FunctionKind, pt: &LemmaPoint) -> Result<Self> {
        let dg = pt.dg();
        let d2g = pt.d2g();
        let d2logg = pt.d2logg()?;
        Ok(Self {
            kind,
            p: pt.p,
            y: pt.y,
            g: pt.x,
            dg_dp: dg.value,
            d2g_dp2: d2g.value,
            d2logg_dp2: d2logg.value,
            quad_err: pt.f_p.err_estimate + pt.f_pp.err_estimate,
            g_err: pt.x_err,
            dg_err: dg.err,
            d2g_err: d2g.err,
            d2logg_err: d2logg.err,
        })
    }

    /// Report of `ln a - ln b` (used for cos = sin / tan, cosh = sinh / tanh).
    fn quotient(kind: FunctionKind, a: &Self, b: &Self) -> Self {
        let g = a.g / b.g;
        let g_err = g.abs() * (a.g_err / a.g.abs() + b.g_err / b.g.abs());
        let dlog_a = a.dg_dp / a.g;
        let dlog_b = b.dg_dp / b.g;
        let dlog = dlog_a - dlog_b;
        let dlog_err = a.dg_err / a.g.abs()
            + b.dg_err / b.g.abs()
            + dlog_a.abs() * a.g_err / a.g.abs()
            + dlog_b.abs() * b.g_err / b.g.abs();
        let d2log = a.d2logg_dp2 - b.d2logg_dp2;
        let d2log_err =
            a.d2logg_err + b.d2logg_err + FLOOR_ULPS * f64::EPSILON * (a.d2logg_dp2.abs() + b.d2logg_dp2.abs());
        let dg = g * dlog;
        let inner = d2log + dlog * dlog;
        Self {
            kind,
            p: a.p,
            y: a.y,
            g,
            dg_dp: dg,
            d2g_dp2: g * inner,
            d2logg_dp2: d2log,
            quad_err: a.quad_err + b.quad_err,
            g_err,
            dg_err: g.abs() * dlog_err + dlog.abs() * g_err,
            d2g_err: g.abs() * (d2log_err + 2.0 * dlog.abs() * dlog_err) + inner.abs() * g_err,
            d2logg_err: d2log_err,
        }
    }

    /// Applies odd symmetry (`y -> -y`).
    fn reflected(self) -> Self {
        if self.kind.is_odd() {
            Self { y: -self.y, g: -self.g, dg_dp: -self.dg_dp, d2g_dp2: -self.d2g_dp2, ..self }
        } else {
            Self { y: -self.y, ..self }
        }
    }
}

/// Derivative report for any of the six functions.
pub fn derivative_report_with(ev: &Evaluator, kind: FunctionKind, p: Parameter, y: f64) -> Result<DerivativeReport> {
    if !y.is_finite() {
        return Err(Error::Domain { what: "derivative argument", value: y });
    }
    if y == 0.0 {
        return Ok(DerivativeReport::zero(kind, p.value(), y));
    }
    if y < 0.0 {
        return Ok(derivative_report_with(ev, kind, p, -y)?.reflected());
    }
    match kind {
        FunctionKind::Cos | FunctionKind::Cosh => {
            let (num, den) = if kind == FunctionKind::Cos {
                (FunctionKind::Sin, FunctionKind::Tan)
            } else {
                (FunctionKind::Sinh, FunctionKind::Tanh)
            };
            let a = derivative_report_with(ev, num, p, y)?;
            let b = derivative_report_with(ev, den, p, y)?;
            Ok(DerivativeReport::quotient(kind, &a, &b))
        }
        _ => {
            let bundle = make_bundle(kind)?;
            let pt = lemma_point(ev, &bundle, p, y)?;
            DerivativeReport::from_point(kind, &pt)
        }
    }
}

/// [`derivative_report_with`] using the default evaluator.
pub fn derivative_report(kind: FunctionKind, p: Parameter, y: f64) -> Result<DerivativeReport> {
    derivative_report_with(&Evaluator::default(), kind, p, y)
}

fn odd_point(bundle: &KernelBundle, p: Parameter, y: f64) -> Result<Option<(LemmaPoint, f64)>> {
    if !y.is_finite() {
        return Err(Error::Domain { what: "derivative argument", value: y });
    }
    if y == 0.0 {
        return Ok(None);
    }
    let pt = lemma_point(&Evaluator::default(), bundle, p, y.abs())?;
    Ok(Some((pt, y.signum())))
}

/// `∂g/∂p` from the first-derivative integral formula.
pub fn inverse_dp(bundle: &KernelBundle, p: Parameter, y: f64) -> Result<f64> {
    Ok(odd_point(bundle, p, y)?.map_or(0.0, |(pt, s)| s * pt.dg().value))
}

/// `∂²g/∂p²` from the second-derivative integral formula.
pub fn inverse_d2p(bundle: &KernelBundle, p: Parameter, y: f64) -> Result<f64> {
    Ok(odd_point(bundle, p, y)?.map_or(0.0, |(pt, s)| s * pt.d2g().value))
}

/// `∂²g/∂p²` from the alternate (derivative-of-ratio) form.
pub fn inverse_d2p_remark(bundle: &KernelBundle, p: Parameter, y: f64) -> Result<f64> {
    Ok(odd_point(bundle, p, y)?.map_or(0.0, |(pt, s)| s * pt.d2g_remark().value))
}

/// `∂²(ln g)/∂p²` from the log-derivative integral formula.
pub fn inverse_d2p_log(bundle: &KernelBundle, p: Parameter, y: f64) -> Result<f64> {
    match odd_point(bundle, p, y)? {
        None => Err(Error::Domain { what: "log of inverse function", value: y }),
        Some((pt, _)) => Ok(pt.d2logg()?.value),
    }
}
