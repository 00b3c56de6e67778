//! Generalized trigonometric and hyperbolic functions.
//!
//! For `p > 0` the generalized arcsine is
//! `arcsin_p(x) = ∫_0^x (1 - t^p)^(-1/p) dt` and `sin_p` is its inverse. The
//! remaining five functions are defined analogously (see [`inverse`]). For
//! `p > 1` the sine is periodic with half-period `π_p = 2π / (p sin(π/p))`;
//! for `0 < p <= 1` we set `π_p = +∞` and extend by oddness only.
//!
//! Forward values are obtained by inverting the defining integrals with a
//! safeguarded Newton iteration. Near each singular point the inversion
//! switches to a complementary integral whose integrand is regular, so the
//! returned [`Evaluation`] also carries `1 - value` and `value - y` without
//! cancellation.

mod forward;
pub mod inverse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadResult, QuadratureConfig};

pub use forward::Evaluation;

/// The exponent `p`, validated to be positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Parameter(f64);

impl Parameter {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p.is_finite() {
            Ok(Self(p))
        } else {
            Err(Error::InvalidParameter(p))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `p <= 1`: the half-period is infinite and only oddness extends `sin_p`.
    #[inline]
    pub fn is_subcritical(self) -> bool {
        self.0 <= 1.0
    }

    pub fn half_period(self) -> HalfPeriod {
        pi_p(self)
    }

    /// Shifts the parameter by `delta`, failing if the result leaves `(0, ∞)`.
    pub fn offset(self, delta: f64) -> Result<Self> {
        Self::new(self.0 + delta)
    }
}

impl TryFrom<f64> for Parameter {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<Parameter> for f64 {
    fn from(p: Parameter) -> f64 {
        p.0
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `π_p`, finite for `p > 1` and `+∞` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HalfPeriod(f64);

impl HalfPeriod {
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 6] = [
        FunctionKind::Sin,
        FunctionKind::Cos,
        FunctionKind::Tan,
        FunctionKind::Sinh,
        FunctionKind::Cosh,
        FunctionKind::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Sin => "sin",
            FunctionKind::Cos => "cos",
            FunctionKind::Tan => "tan",
            FunctionKind::Sinh => "sinh",
            FunctionKind::Cosh => "cosh",
            FunctionKind::Tanh => "tanh",
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        matches!(self, FunctionKind::Sinh | FunctionKind::Cosh | FunctionKind::Tanh)
    }

    /// Odd functions of `y`; the others (cos, cosh) are even with value 1 at 0.
    pub fn is_odd(self) -> bool {
        !matches!(self, FunctionKind::Cos | FunctionKind::Cosh)
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        FunctionKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown function kind '{s}' (expected sin, cos, tan, sinh, cosh or tanh)"))
    }
}

/// Closed-form half-period.
pub fn pi_p(p: Parameter) -> HalfPeriod {
    let p = p.value();
    if p <= 1.0 {
        HalfPeriod(f64::INFINITY)
    } else {
        let pi = std::f64::consts::PI;
        HalfPeriod(2.0 * pi / (p * (pi / p).sin()))
    }
}

/// `2 ∫_0^1 (1 - t^p)^(-1/p) dt` by quadrature, for cross-checking [`pi_p`].
pub fn pi_p_by_quadrature(p: Parameter, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let pv = p.value();
    if pv <= 1.0 {
        return Err(Error::DivergentEndpoint { what: "pi_p", p: pv, x: 1.0 });
    }
    let r = quadrature::integrate_singular_upper_with_gap(
        |t, gap| (-crate::numeric::ln_one_minus_exp(pv * crate::numeric::ln_from_gap(t, gap)) / pv).exp(),
        0.0,
        1.0,
        1.0 / pv,
        cfg,
    )?;
    Ok(r.scaled(2.0))
}

/// Evaluates the functions with a fixed quadrature configuration and root
/// tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluator {
    pub quad: QuadratureConfig,
    /// Relative residual at which the Newton inversion stops.
    pub root_tol: f64,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self { quad: QuadratureConfig::default(), root_tol: 1e-14 }
    }
}

impl Evaluator {
    pub fn new(quad: QuadratureConfig, root_tol: f64) -> Result<Self> {
        quad.validate()?;
        if !(root_tol > 0.0 && root_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("root_tol must be positive, got {root_tol}")));
        }
        Ok(Self { quad, root_tol })
    }

    /// Tight settings for sign certification of tiny quantities.
    pub fn certification() -> Self {
        Self { quad: QuadratureConfig::certification(), root_tol: 1e-15 }
    }
}

macro_rules! free_fns {
    ($($(#[$m:meta])* $name:ident => $method:ident;)*) => {$(
        $(#[$m])*
        pub fn $name(p: Parameter, arg: f64) -> Result<f64> {
            Evaluator::default().$method(p, arg).map(|r| r.value)
        }
    )*};
}

free_fns! {
    /// `∫_0^x (1 - t^p)^(-1/p) dt`, `0 <= x <= 1`.
    arcsin_p => arcsin;
    /// `∫_x^1 s^(p-2) (1 - s^p)^(1/p - 1) ds`, `0 <= x <= 1`.
    arccos_p => arccos;
    /// `∫_0^x dt / (1 + t^p)`, `x >= 0`.
    arctan_p => arctan;
    /// `∫_0^x (1 + t^p)^(-1/p) dt`, `x >= 0`.
    arcsinh_p => arcsinh;
    /// `∫_0^x dt / (1 - t^p)`, `0 <= x < 1`.
    arctanh_p => arctanh;
    sin_p => sin;
    cos_p => cos;
    tan_p => tan;
    sinh_p => sinh;
    cosh_p => cosh;
    tanh_p => tanh;
}
