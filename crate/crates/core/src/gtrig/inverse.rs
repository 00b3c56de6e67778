//! The defining integrals.
//!
//! | function   | integrand            | domain        |
//! |------------|----------------------|---------------|
//! | arcsin_p   | `(1 - t^p)^(-1/p)`   | `[0, 1]`      |
//! | arccos_p   | `s^(p-2) (1 - s^p)^(1/p - 1)`, from `x` to 1 | `[0, 1]` |
//! | arctan_p   | `1 / (1 + t^p)`      | `[0, ∞)`      |
//! | arcsinh_p  | `(1 + t^p)^(-1/p)`   | `[0, ∞)`      |
//! | arctanh_p  | `1 / (1 - t^p)`      | `[0, 1)`      |
//!
//! Each integral is split so that every piece has a bounded (or power-law
//! substituted) integrand: near `t = 0` the excess over the identity is
//! integrated, near `t = 1` the complement `1 - t` is carried in log space,
//! and beyond `t = 1` the variable `u = ln t` is used.

use std::f64::consts::LN_2;

use super::{pi_p, Evaluator, Parameter};
use crate::error::{Error, Result};
use crate::numeric::{ln_from_gap, ln_one_minus_exp, logistic, softplus};
use crate::quadrature::{self, QuadResult};

/// `s_mid = 2^(-1/p)`, the point where `sin_p = cos_p`.
pub(crate) fn midpoint(p: f64) -> f64 {
    (-LN_2 / p).exp()
}

/// `(1 - t^p)^(-1/p) - 1`.
pub(crate) fn sin_excess(p: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    (-ln_one_minus_exp(p * t.ln()) / p).exp_m1()
}

/// `(1 - t^p)^(-1/p)`.
pub(crate) fn sin_density(p: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    (-ln_one_minus_exp(p * t.ln()) / p).exp()
}

/// `s^(p-2) (1 - s^p)^(1/p - 1)` from `ln s` and `ln(1 - s^p)`.
pub(crate) fn cos_density_log(p: f64, ln_s: f64, ln_comp: f64) -> f64 {
    ((p - 2.0) * ln_s + (1.0 / p - 1.0) * ln_comp).exp()
}

/// `(1 + t^p)^(-1/p) - 1`.
pub(crate) fn sinh_excess(p: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    (-softplus(p * t.ln()) / p).exp_m1()
}

/// `(1 + t^p)^(-1/p)`.
pub(crate) fn sinh_density(p: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    (-softplus(p * t.ln()) / p).exp()
}

/// `t^p / (1 + t^p)`, the excess of the identity over the arctan integrand.
pub(crate) fn tan_excess(p: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    logistic(p * t.ln())
}

/// `t^p / (1 - t^p)`, the excess of the arctanh integrand over 1.
pub(crate) fn tanh_excess(p: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let a = p * t.ln();
    (a - ln_one_minus_exp(a)).exp()
}

/// `1 / (1 - t^p)` in terms of `w = ln(1 - t)`, times `dt/dw = -e^w`.
fn tanh_tail_density(p: f64, w: f64) -> f64 {
    // 1 - t^p with t = 1 - e^w
    let ln_t = (-w.exp()).ln_1p();
    (w - (-(p * ln_t).exp_m1()).ln()).exp()
}

impl Evaluator {
    /// `∫_0^x ((1 - t^p)^(-1/p) - 1) dt` for `0 <= x < 1`.
    pub(crate) fn sin_excess_integral(&self, p: f64, x: f64) -> Result<QuadResult> {
        if x <= 0.0 {
            return Ok(QuadResult::exact(0.0));
        }
        quadrature::integrate(|t| sin_excess(p, t), 0.0, x, &self.quad)
    }

    /// `arcsin_p(s_mid)`.
    pub(crate) fn sin_midpoint_value(&self, p: f64) -> Result<QuadResult> {
        let m = midpoint(p);
        Ok(self.sin_excess_integral(p, m)?.combine(QuadResult::exact(m)))
    }

    /// `ln ∫_0^c ψ(s) ds` for `p > 1`, `c = e^v <= s_mid`, together with its
    /// derivative in `v`.
    ///
    /// With `s = c r^(1/(p-1))` the integral becomes
    /// `c^(p-1)/(p-1) ∫_0^1 (1 - c^p r^(p/(p-1)))^(1/p - 1) dr` whose
    /// integrand is smooth, so `ln` of it is available for any `v`.
    pub(crate) fn cos_head_log(&self, p: f64, v: f64) -> Result<(f64, f64, QuadResult)> {
        let k = p / (p - 1.0);
        let e = 1.0 / p - 1.0;
        let j = quadrature::integrate(|r| (e * (-(p * v + k * r.ln()).exp()).ln_1p()).exp(), 0.0, 1.0, &self.quad)?;
        let ln_h = (p - 1.0) * v - (p - 1.0).ln() + j.value.ln();
        let slope = (p - 1.0) * (e * ln_one_minus_exp(p * v)).exp() / j.value;
        let h = j.scaled(((p - 1.0) * v - (p - 1.0).ln()).exp());
        Ok((ln_h, slope, h))
    }

    /// `∫_c^{s_mid} ψ(s) ds` for `c = e^v <= s_mid`, integrated in `v`.
    pub(crate) fn cos_tail(&self, p: f64, v: f64) -> Result<QuadResult> {
        let top = -LN_2 / p;
        if v >= top {
            return Ok(QuadResult::exact(0.0));
        }
        quadrature::integrate(|w| cos_density_log(p, w, ln_one_minus_exp(p * w)) * w.exp(), v, top, &self.quad)
    }

    pub fn arcsin(&self, p: Parameter, x: f64) -> Result<QuadResult> {
        let pv = p.value();
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain { what: "arcsin_p", value: x });
        }
        if x == 1.0 {
            return if pv > 1.0 {
                Ok(QuadResult::exact(0.5 * pi_p(p).value()))
            } else {
                Err(Error::DivergentEndpoint { what: "arcsin_p", p: pv, x })
            };
        }
        let m = midpoint(pv);
        if x <= m {
            return Ok(self.sin_excess_integral(pv, x)?.combine(QuadResult::exact(x)));
        }
        let v = ln_one_minus_exp(pv * x.ln()) / pv;
        if pv > 1.0 {
            let (_, _, h) = self.cos_head_log(pv, v)?;
            Ok(h.scaled(-1.0).combine(QuadResult::exact(0.5 * pi_p(p).value())))
        } else {
            Ok(self.cos_tail(pv, v)?.combine(self.sin_midpoint_value(pv)?))
        }
    }

    pub fn arccos(&self, p: Parameter, x: f64) -> Result<QuadResult> {
        let pv = p.value();
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain { what: "arccos_p", value: x });
        }
        if x == 1.0 {
            return Ok(QuadResult::exact(0.0));
        }
        if x == 0.0 && pv <= 1.0 {
            return Err(Error::DivergentEndpoint { what: "arccos_p", p: pv, x });
        }
        let psi = |s: f64, gap: f64| {
            let ln_s = ln_from_gap(s, gap);
            cos_density_log(pv, ln_s, ln_one_minus_exp(pv * ln_s))
        };
        if pv > 1.0 {
            let upper =
                quadrature::integrate_singular_upper_with_gap(psi, x.max(0.5), 1.0, 1.0 - 1.0 / pv, &self.quad)?;
            if x >= 0.5 {
                return Ok(upper);
            }
            // s = r^(1/(p-1)) / 2 removes the s^(p-2) behaviour at the origin
            let k = pv / (pv - 1.0);
            let e = 1.0 / pv - 1.0;
            let half_p = 0.5f64.powf(pv);
            let r_lo = (2.0 * x).powf(pv - 1.0);
            let lower = quadrature::integrate(|r| (e * (-(half_p * r.powf(k))).ln_1p()).exp(), r_lo, 1.0, &self.quad)?
                .scaled(0.5f64.powf(pv - 1.0) / (pv - 1.0));
            Ok(lower.combine(upper))
        } else {
            let m = midpoint(pv);
            let from = x.max(m);
            let upper = quadrature::integrate_with_gaps(|s, _, gap| psi(s, gap), from, 1.0, &self.quad)?;
            if x >= m {
                return Ok(upper);
            }
            Ok(self.cos_tail(pv, x.ln())?.combine(upper))
        }
    }

    /// `∫_0^x t^p / (1 + t^p) dt` for `0 <= x <= 1`.
    pub(crate) fn tan_excess_integral(&self, p: f64, x: f64) -> Result<QuadResult> {
        if x <= 0.0 {
            return Ok(QuadResult::exact(0.0));
        }
        quadrature::integrate(|t| tan_excess(p, t), 0.0, x, &self.quad)
    }

    /// `∫_1^{e^u} dt / (1 + t^p)` in the variable `ln t`.
    pub(crate) fn tan_tail(&self, p: f64, u: f64) -> Result<QuadResult> {
        if u <= 0.0 {
            return Ok(QuadResult::exact(0.0));
        }
        quadrature::integrate(|r| (r - softplus(p * r)).exp(), 0.0, u, &self.quad)
    }

    pub fn arctan(&self, p: Parameter, x: f64) -> Result<QuadResult> {
        let pv = p.value();
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Domain { what: "arctan_p", value: x });
        }
        if x <= 1.0 {
            return Ok(self.tan_excess_integral(pv, x)?.scaled(-1.0).combine(QuadResult::exact(x)));
        }
        let one = self.tan_excess_integral(pv, 1.0)?.scaled(-1.0).combine(QuadResult::exact(1.0));
        Ok(one.combine(self.tan_tail(pv, x.ln())?))
    }

    /// `∫_0^x ((1 + t^p)^(-1/p) - 1) dt` for `0 <= x <= 1`.
    pub(crate) fn sinh_excess_integral(&self, p: f64, x: f64) -> Result<QuadResult> {
        if x <= 0.0 {
            return Ok(QuadResult::exact(0.0));
        }
        quadrature::integrate(|t| sinh_excess(p, t), 0.0, x, &self.quad)
    }

    /// `∫_1^{e^u} (1 + t^p)^(-1/p) dt` in the variable `ln t`.
    pub(crate) fn sinh_tail(&self, p: f64, u: f64) -> Result<QuadResult> {
        if u <= 0.0 {
            return Ok(QuadResult::exact(0.0));
        }
        quadrature::integrate(|r| (-softplus(-p * r) / p).exp(), 0.0, u, &self.quad)
    }

    pub fn arcsinh(&self, p: Parameter, x: f64) -> Result<QuadResult> {
        let pv = p.value();
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Domain { what: "arcsinh_p", value: x });
        }
        if x <= 1.0 {
            return Ok(self.sinh_excess_integral(pv, x)?.combine(QuadResult::exact(x)));
        }
        let one = self.sinh_excess_integral(pv, 1.0)?.combine(QuadResult::exact(1.0));
        Ok(one.combine(self.sinh_tail(pv, x.ln())?))
    }

    /// `∫_0^x t^p / (1 - t^p) dt` for `0 <= x <= 1/2`.
    pub(crate) fn tanh_excess_integral(&self, p: f64, x: f64) -> Result<QuadResult> {
        if x <= 0.0 {
            return Ok(QuadResult::exact(0.0));
        }
        quadrature::integrate(|t| tanh_excess(p, t), 0.0, x, &self.quad)
    }

    /// `∫_{1/2}^{1-q} dt / (1 - t^p)` in the variable `w = ln(1 - t)`.
    pub(crate) fn tanh_tail(&self, p: f64, ln_q: f64) -> Result<QuadResult> {
        if ln_q >= -LN_2 {
            return Ok(QuadResult::exact(0.0));
        }
        quadrature::integrate(|w| tanh_tail_density(p, w), ln_q, -LN_2, &self.quad)
    }

    pub fn arctanh(&self, p: Parameter, x: f64) -> Result<QuadResult> {
        if !(0.0..1.0).contains(&x) {
            return if x == 1.0 {
                Err(Error::DivergentEndpoint { what: "arctanh_p", p: p.value(), x })
            } else {
                Err(Error::Domain { what: "arctanh_p", value: x })
            };
        }
        if x <= 0.5 {
            return Ok(self.tanh_excess_integral(p.value(), x)?.combine(QuadResult::exact(x)));
        }
        self.arctanh_complement(p, 1.0 - x)
    }

    /// `arctanh_p(1 - q)` for `0 < q <= 1`, keeping full precision when `q`
    /// is tiny.
    pub fn arctanh_complement(&self, p: Parameter, q: f64) -> Result<QuadResult> {
        let pv = p.value();
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Domain { what: "arctanh_p complement", value: q });
        }
        if q >= 0.5 {
            return self.arctanh(p, 1.0 - q);
        }
        let half = self.tanh_excess_integral(pv, 0.5)?.combine(QuadResult::exact(0.5));
        Ok(half.combine(self.tanh_tail(pv, q.ln())?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn par(p: f64) -> Parameter {
        Parameter::new(p).unwrap()
    }

    #[test]
    fn quadratic_case_is_classical() {
        let ev = Evaluator::default();
        let p = par(2.0);
        for x in [0.0, 0.1, 0.5, std::f64::consts::FRAC_1_SQRT_2, 0.9, 0.999999, 1.0] {
            let a = ev.arcsin(p, x).unwrap().value;
            assert!((a - x.asin()).abs() < 1e-13, "arcsin {x}: {a}");
            let b = ev.arccos(p, x).unwrap().value;
            assert!((b - x.acos()).abs() < 1e-13, "arccos {x}: {b}");
        }
        for x in [0.0, 0.3, 1.0, 2.5, 1e6] {
            let a = ev.arctan(p, x).unwrap().value;
            assert!((a - x.atan()).abs() < 1e-13, "arctan {x}: {a}");
            let b = ev.arcsinh(p, x).unwrap().value;
            assert!((b - x.asinh()).abs() < 1e-13 * b.max(1.0), "arcsinh {x}: {b}");
        }
        for x in [0.0, 0.3, 0.5, 0.9, 1.0 - 1e-12] {
            let a = ev.arctanh(p, x).unwrap().value;
            assert!((a - x.atanh()).abs() < 1e-12 * a.max(1.0), "arctanh {x}: {a}");
        }
    }

    #[test]
    fn linear_case_is_logarithmic() {
        let ev = Evaluator::default();
        let p = par(1.0);
        // arcsin_1(x) = -ln(1 - x), arctan_1(x) = ln(1 + x)
        for x in [0.01, 0.5, 0.8, 0.99] {
            let a = ev.arcsin(p, x).unwrap().value;
            assert!((a + (-x).ln_1p()).abs() < 1e-13, "{x}: {a}");
            let b = ev.arccos(p, x).unwrap().value;
            assert!((b + x.ln()).abs() < 1e-13, "{x}: {b}");
            let c = ev.arctan(p, x * 10.0).unwrap().value;
            assert!((c - (x * 10.0).ln_1p()).abs() < 1e-13, "{x}: {c}");
        }
    }

    #[test]
    fn cosine_integral_matches_sine_of_complement() {
        let ev = Evaluator::default();
        for p in [0.4, 1.0, 1.1, 1.5, 3.0, 8.0] {
            for x in [0.05f64, 0.3, 0.6, 0.95] {
                // arccos_p(x) = arcsin_p((1 - x^p)^(1/p)), a different integral
                let c = (1.0 - x.powf(p)).powf(1.0 / p);
                let a = ev.arcsin(par(p), c).unwrap().value;
                let b = ev.arccos(par(p), x).unwrap().value;
                assert!((a - b).abs() < 1e-12 * a.max(1.0), "p={p} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn endpoints_and_domains() {
        let ev = Evaluator::default();
        assert!(matches!(ev.arcsin(par(0.5), 1.0), Err(Error::DivergentEndpoint { .. })));
        assert!(matches!(ev.arccos(par(0.5), 0.0), Err(Error::DivergentEndpoint { .. })));
        assert!(matches!(ev.arctanh(par(3.0), 1.0), Err(Error::DivergentEndpoint { .. })));
        assert!(matches!(ev.arcsin(par(3.0), 1.5), Err(Error::Domain { .. })));
        assert!(matches!(ev.arctan(par(3.0), -1.0), Err(Error::Domain { .. })));
        assert!(matches!(ev.arctan(par(3.0), f64::NAN), Err(Error::Domain { .. })));
        let half = ev.arccos(par(3.0), 0.0).unwrap().value;
        assert!((half - 0.5 * pi_p(par(3.0)).value()).abs() < 1e-12);
    }

    #[test]
    fn arctanh_complement_tracks_tiny_gaps() {
        let ev = Evaluator::default();
        let p = par(2.0);
        // arctanh(1 - q) = 0.5 ln((2 - q) / q)
        for q in [1e-3, 1e-10, 1e-30, 1e-200] {
            let a = ev.arctanh_complement(p, q).unwrap().value;
            let exact = 0.5 * ((2.0 - q) / q).ln();
            assert!((a - exact).abs() < 1e-13 * exact, "{q}: {a} vs {exact}");
        }
    }
}
