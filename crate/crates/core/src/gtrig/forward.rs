//! Forward evaluation by inversion of the defining integrals.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::inverse::{midpoint, sin_density, sin_excess, sinh_density, sinh_excess, tan_excess, tanh_excess};
use super::{pi_p, Evaluator, FunctionKind, Parameter};
use crate::error::{Error, Result};
use crate::numeric::{ln_one_minus_exp, softplus};
use crate::roots::{solve_increasing, RootOptions};

/// Distance from `π_p / 2` below which `sin_p` is returned as exactly 1.
const PEAK_SNAP: f64 = 1e-12;
/// Distance from `±π_p / 2` reported as a pole of `tan_p`.
const POLE_SNAP: f64 = 1e-12;
/// Largest `ln x` searched when inverting the unbounded integrals.
const LN_SEARCH_CAP: f64 = 60.0 * LN_2;
/// Beyond this many e-folds the complement is treated as zero.
const LOG_SEARCH_CAP: f64 = 1e7;

/// A forward value with auxiliary representations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    /// `value - y` for the odd functions, `value - 1` for cos and cosh,
    /// computed without cancellation near the origin.
    pub deviation: f64,
    /// `1 - value`, computed without cancellation where `value` nears 1.
    pub one_minus: f64,
    /// Residual of the inversion in the argument's units.
    pub residual: f64,
    /// Bound on the error of `value` (and of `deviation`) from quadrature
    /// and inversion, excluding the final rounding.
    pub abs_err: f64,
}

impl Evaluation {
    fn exact(value: f64, deviation: f64, one_minus: f64) -> Self {
        Self { value, deviation, one_minus, residual: 0.0, abs_err: 0.0 }
    }

    /// Odd symmetry: `-v(|y|) - y = -(v(|y|) - |y|)`.
    fn negated(self) -> Self {
        Self { value: -self.value, deviation: -self.deviation, one_minus: 1.0 + self.value, ..self }
    }
}

/// `(sin_p y, cos_p y)` on the principal arc.
#[derive(Debug, Clone, Copy)]
struct Pair {
    s: f64,
    c: f64,
    /// `s - y`
    dev_s: f64,
    /// `c - 1`
    dev_c: f64,
    one_minus_s: f64,
    residual: f64,
    err_s: f64,
    err_c: f64,
}

/// `(sinh_p y, cosh_p y)` for `y >= 0`.
#[derive(Debug, Clone, Copy)]
struct HyperPair {
    s: f64,
    /// `s - y`
    dev_s: f64,
    /// `ln cosh_p y`
    ln_c: f64,
    residual: f64,
    err_s: f64,
}

impl Evaluator {
    fn opts(&self, scale: f64) -> RootOptions {
        RootOptions::with_residual(self.root_tol * scale)
    }

    /// Sine and cosine for `0 <= y <= π_p/2` (`p > 1`) or `y >= 0` (`p <= 1`).
    fn principal_pair(&self, p: f64, y: f64) -> Result<Pair> {
        if y == 0.0 {
            return Ok(Pair {
                s: 0.0,
                c: 1.0,
                dev_s: 0.0,
                dev_c: 0.0,
                one_minus_s: 1.0,
                residual: 0.0,
                err_s: 0.0,
                err_c: 0.0,
            });
        }
        let half = if p > 1.0 { 0.5 * pi_p(Parameter(p)).value() } else { f64::INFINITY };
        if half - y < PEAK_SNAP {
            return Ok(self.peak(y, half));
        }
        let m = midpoint(p);
        let y_mid = self.sin_midpoint_value(p)?.value;
        if y <= y_mid {
            let root = solve_increasing(
                |s| Ok((s + self.sin_excess_integral(p, s)?.value, sin_density(p, s))),
                (0.0, 0.0),
                (m, y_mid),
                y,
                self.opts(y),
            )?;
            let d = self.sin_excess_integral(p, root.z)?;
            let s = y - d.value;
            let ln_c = ln_one_minus_exp(p * s.ln()) / p;
            let c = ln_c.exp();
            let slope = sin_excess(p, root.z);
            let err_s = d.err_estimate + slope * root.residual * c;
            return Ok(Pair {
                s,
                c,
                dev_s: -d.value,
                dev_c: ln_c.exp_m1(),
                one_minus_s: 1.0 - s,
                residual: root.residual,
                err_s,
                err_c: err_s * ((p - 1.0) * (s.ln() - ln_c)).exp(),
            });
        }
        // beyond the midpoint the cosine is found first, as z = ln c
        let (v, residual, dv) = if p > 1.0 { self.solve_head(p, half - y)? } else { self.solve_tail(p, y, y_mid)? };
        let ln_s = ln_one_minus_exp(p * v) / p;
        let s = ln_s.exp();
        let c = v.exp();
        Ok(Pair {
            s,
            c,
            dev_s: s - y,
            dev_c: c - 1.0,
            one_minus_s: -ln_s.exp_m1(),
            residual,
            err_s: (p * v + (1.0 - p) * ln_s).exp() * dv,
            err_c: c * dv,
        })
    }

    fn peak(&self, y: f64, half: f64) -> Pair {
        Pair {
            s: 1.0,
            c: 0.0,
            dev_s: 1.0 - y,
            dev_c: -1.0,
            one_minus_s: 0.0,
            residual: (half - y).abs(),
            err_s: 0.0,
            err_c: 0.0,
        }
    }

    /// Solves `∫_0^c ψ = target` (`p > 1`) for `v = ln c`. Returns
    /// `(v, residual, uncertainty in v)`.
    fn solve_head(&self, p: f64, target: f64) -> Result<(f64, f64, f64)> {
        let ln_target = target.ln();
        let eval = |v: f64| self.cos_head_log(p, v).map(|(l, d, _)| (l, d));
        let hi = -LN_2 / p;
        let f_hi = eval(hi)?.0;
        let mut step = 1.0;
        let (lo, f_lo) = loop {
            let v = hi - step;
            let f = eval(v)?.0;
            if f <= ln_target {
                break (v, f);
            }
            if step > LOG_SEARCH_CAP {
                return Ok((f64::NEG_INFINITY, 0.0, 0.0));
            }
            step *= 2.0;
        };
        let root = solve_increasing(eval, (lo, f_lo), (hi, f_hi.max(ln_target)), ln_target, self.opts(1.0))?;
        let (_, slope, h) = self.cos_head_log(p, root.z)?;
        let residual = (h.value - target).abs();
        let dv = (residual + h.err_estimate) / (h.value * slope);
        Ok((root.z, residual, dv))
    }

    /// Solves `y_mid + ∫_c^{s_mid} ψ = y` (`p <= 1`) for `v = ln c`.
    fn solve_tail(&self, p: f64, y: f64, y_mid: f64) -> Result<(f64, f64, f64)> {
        // increasing in z = -v
        let eval = |z: f64| -> Result<(f64, f64)> {
            let v = -z;
            let g = y_mid + self.cos_tail(p, v)?.value;
            let psi_c = ((p - 1.0) * v + (1.0 / p - 1.0) * ln_one_minus_exp(p * v)).exp();
            Ok((g, psi_c))
        };
        let lo = LN_2 / p;
        let mut step = 1.0;
        let (hi, f_hi) = loop {
            let z = lo + step;
            let f = eval(z)?.0;
            if f >= y {
                break (z, f);
            }
            if step > LOG_SEARCH_CAP {
                return Ok((f64::NEG_INFINITY, 0.0, 0.0));
            }
            step *= 2.0;
        };
        let root = solve_increasing(eval, (lo, y_mid), (hi, f_hi), y, self.opts(y))?;
        let v = -root.z;
        let g = self.cos_tail(p, v)?;
        let residual = (y_mid + g.value - y).abs();
        let slope = eval(root.z)?.1;
        Ok((v, residual, (residual + g.err_estimate) / slope))
    }

    /// Sine and cosine of `y`, sharing one inversion.
    pub fn sin_cos(&self, p: Parameter, y: f64) -> Result<(Evaluation, Evaluation)> {
        if !y.is_finite() {
            return Err(Error::Domain { what: "sin_p", value: y });
        }
        let pv = p.value();
        let a = y.abs();
        let neg = y < 0.0;
        if pv <= 1.0 {
            let pr = self.principal_pair(pv, a)?;
            let sin = self.sin_from(pr);
            let sin = if neg { sin.negated() } else { sin };
            return Ok((sin, self.cos_from(pr, 1.0, false)));
        }
        let big = pi_p(p).value();
        // reduce to (-π_p, π_p], then to the principal arc by reflection
        let mut r = a % (2.0 * big);
        let mut sin_sign = if neg { -1.0 } else { 1.0 };
        let mut cos_sign = 1.0;
        if r > big {
            r = 2.0 * big - r;
            sin_sign = -sin_sign;
        }
        if r > 0.5 * big {
            r = big - r;
            cos_sign = -1.0;
        }
        let shifted = r != a;
        let pr = self.principal_pair(pv, r)?;
        let mut sin = self.sin_from(pr);
        if sin_sign < 0.0 {
            sin = sin.negated();
        }
        if shifted {
            sin.deviation = sin.value - y;
            sin.one_minus = 1.0 - sin.value;
        }
        Ok((sin, self.cos_from(pr, cos_sign, shifted)))
    }

    fn sin_from(&self, pr: Pair) -> Evaluation {
        Evaluation {
            value: pr.s,
            deviation: pr.dev_s,
            one_minus: pr.one_minus_s,
            residual: pr.residual,
            abs_err: pr.err_s,
        }
    }

    fn cos_from(&self, pr: Pair, sign: f64, shifted: bool) -> Evaluation {
        let value = sign * pr.c;
        let (deviation, one_minus) = if shifted { (value - 1.0, 1.0 - value) } else { (pr.dev_c, -pr.dev_c) };
        Evaluation { value, deviation, one_minus, residual: pr.residual, abs_err: pr.err_c }
    }

    pub fn sin(&self, p: Parameter, y: f64) -> Result<Evaluation> {
        Ok(self.sin_cos(p, y)?.0)
    }

    pub fn cos(&self, p: Parameter, y: f64) -> Result<Evaluation> {
        Ok(self.sin_cos(p, y)?.1)
    }

    /// `sin_p / cos_p` on the principal branch: `|y| < π_p / 2` for `p > 1`.
    pub fn tan(&self, p: Parameter, y: f64) -> Result<Evaluation> {
        let pv = p.value();
        if !y.is_finite() {
            return Err(Error::Domain { what: "tan_p", value: y });
        }
        let a = y.abs();
        if pv > 1.0 {
            let half = 0.5 * pi_p(p).value();
            if (a - half).abs() <= POLE_SNAP {
                return Err(Error::Pole { p: pv, y });
            }
            if a > half {
                return Err(Error::Domain { what: "tan_p", value: y });
            }
        }
        let pr = self.principal_pair(pv, a)?;
        let value = pr.s / pr.c;
        if pv <= 1.0 && !(value <= LN_SEARCH_CAP.exp()) {
            return Err(Error::Overflow { p: pv, y });
        }
        let rel = if pr.s > 0.0 { pr.err_s / pr.s + pr.err_c / pr.c } else { 0.0 };
        let ev = Evaluation {
            value,
            deviation: (pr.dev_s - a * pr.dev_c) / pr.c,
            one_minus: 1.0 - value,
            residual: pr.residual,
            abs_err: value * rel,
        };
        Ok(if y < 0.0 { ev.negated() } else { ev })
    }

    /// `tan_p` by inverting `arctan_p`, independent of the sine/cosine route.
    pub fn tan_by_arctan(&self, p: Parameter, y: f64) -> Result<Evaluation> {
        let pv = p.value();
        if !y.is_finite() {
            return Err(Error::Domain { what: "tan_p", value: y });
        }
        let a = y.abs();
        if pv > 1.0 {
            let half = 0.5 * pi_p(p).value();
            if (a - half).abs() <= POLE_SNAP {
                return Err(Error::Pole { p: pv, y });
            }
            if a > half {
                return Err(Error::Domain { what: "tan_p", value: y });
            }
        }
        if a == 0.0 {
            return Ok(Evaluation::exact(0.0, 0.0, 1.0));
        }
        let e1 = self.tan_excess_integral(pv, 1.0)?;
        let a1 = 1.0 - e1.value;
        let ev = if a <= a1 {
            let root = solve_increasing(
                |x| Ok((x - self.tan_excess_integral(pv, x)?.value, 1.0 - tan_excess(pv, x))),
                (0.0, 0.0),
                (1.0, a1),
                a,
                self.opts(a),
            )?;
            let e = self.tan_excess_integral(pv, root.z)?;
            let x = a + e.value;
            let deriv = 1.0 + x.powf(pv);
            Evaluation {
                value: x,
                deviation: e.value,
                one_minus: 1.0 - x,
                residual: root.residual,
                abs_err: e.err_estimate + tan_excess(pv, root.z) * root.residual * deriv,
            }
        } else {
            let (u, residual, du) =
                self.solve_log_tail(pv, a, a1, |u| Ok((self.tan_tail(pv, u)?, (u - softplus(pv * u)).exp())))?;
            let x = u.exp();
            Evaluation { value: x, deviation: x - a, one_minus: 1.0 - x, residual, abs_err: x * du }
        };
        Ok(if y < 0.0 { ev.negated() } else { ev })
    }

    /// Solves `base + tail(u) = y` for `u in [0, 60 ln 2]`, where `tail`
    /// returns the integral and its `u`-derivative.
    fn solve_log_tail<T>(&self, p: f64, y: f64, base: f64, tail: T) -> Result<(f64, f64, f64)>
    where
        T: Fn(f64) -> Result<(crate::quadrature::QuadResult, f64)>,
    {
        let eval = |u: f64| tail(u).map(|(q, d)| (base + q.value, d));
        let mut hi = 1.0f64;
        let f_hi = loop {
            let f = eval(hi)?.0;
            if f >= y {
                break f;
            }
            if hi >= LN_SEARCH_CAP {
                return Err(Error::Overflow { p, y });
            }
            hi = (2.0 * hi).min(LN_SEARCH_CAP);
        };
        let root = solve_increasing(eval, (0.0, base), (hi, f_hi), y, self.opts(y))?;
        let (q, d) = tail(root.z)?;
        let residual = (base + q.value - y).abs();
        Ok((root.z, residual, (residual + q.err_estimate) / d))
    }

    fn hyper_pair(&self, p: f64, a: f64) -> Result<HyperPair> {
        if a == 0.0 {
            return Ok(HyperPair { s: 0.0, dev_s: 0.0, ln_c: 0.0, residual: 0.0, err_s: 0.0 });
        }
        let a1 = 1.0 + self.sinh_excess_integral(p, 1.0)?.value;
        if a <= a1 {
            let root = solve_increasing(
                |x| Ok((x + self.sinh_excess_integral(p, x)?.value, sinh_density(p, x))),
                (0.0, 0.0),
                (1.0, a1),
                a,
                self.opts(a),
            )?;
            let d = self.sinh_excess_integral(p, root.z)?;
            let s = a - d.value;
            let ln_c = softplus(p * s.ln()) / p;
            return Ok(HyperPair {
                s,
                dev_s: -d.value,
                ln_c,
                residual: root.residual,
                err_s: d.err_estimate + sinh_excess(p, root.z).abs() * root.residual * ln_c.exp(),
            });
        }
        let (u, residual, du) =
            self.solve_log_tail(p, a, a1, |u| Ok((self.sinh_tail(p, u)?, (-softplus(-p * u) / p).exp())))?;
        let s = u.exp();
        Ok(HyperPair { s, dev_s: s - a, ln_c: softplus(p * u) / p, residual, err_s: s * du })
    }

    fn checked_hyper(&self, what: &'static str, p: Parameter, y: f64) -> Result<HyperPair> {
        if !y.is_finite() {
            return Err(Error::Domain { what, value: y });
        }
        self.hyper_pair(p.value(), y.abs())
    }

    pub fn sinh(&self, p: Parameter, y: f64) -> Result<Evaluation> {
        let h = self.checked_hyper("sinh_p", p, y)?;
        let ev =
            Evaluation { value: h.s, deviation: h.dev_s, one_minus: 1.0 - h.s, residual: h.residual, abs_err: h.err_s };
        Ok(if y < 0.0 { ev.negated() } else { ev })
    }

    pub fn cosh(&self, p: Parameter, y: f64) -> Result<Evaluation> {
        let h = self.checked_hyper("cosh_p", p, y)?;
        Ok(self.cosh_from(p.value(), h))
    }

    fn cosh_from(&self, p: f64, h: HyperPair) -> Evaluation {
        let value = h.ln_c.exp();
        let dev = h.ln_c.exp_m1();
        // d cosh / d sinh = tanh^(p-1)
        let slope = if h.s > 0.0 { ((p - 1.0) * (h.s.ln() - h.ln_c)).exp() } else { 0.0 };
        Evaluation { value, deviation: dev, one_minus: -dev, residual: h.residual, abs_err: h.err_s * slope }
    }

    /// `sinh_p / cosh_p`, with `1 - tanh_p` kept accurate for large `y`.
    pub fn tanh(&self, p: Parameter, y: f64) -> Result<Evaluation> {
        let pv = p.value();
        match self.checked_hyper("tanh_p", p, y) {
            Ok(h) => Ok(self.tanh_from(pv, y, h)),
            // sinh_p outgrows the search cap for small p while tanh_p stays bounded
            Err(Error::Overflow { .. }) => self.tanh_by_arctanh(p, y),
            Err(e) => Err(e),
        }
    }

    fn tanh_from(&self, p: f64, y: f64, h: HyperPair) -> Evaluation {
        let a = y.abs();
        if h.s == 0.0 {
            return Evaluation::exact(0.0, 0.0, 1.0);
        }
        let l = softplus(-p * h.s.ln()) / p;
        let value = (-l).exp();
        let one_minus = -(-l).exp_m1();
        let c = h.ln_c.exp();
        let deviation = if a <= 1.0 { (h.dev_s - a * h.ln_c.exp_m1()) / c } else { value - a };
        let ev = Evaluation {
            value,
            deviation,
            one_minus,
            residual: h.residual,
            abs_err: h.err_s * (-(p + 1.0) * h.ln_c).exp(),
        };
        if y < 0.0 {
            ev.negated()
        } else {
            ev
        }
    }

    /// `(sinh_p, cosh_p, tanh_p)` of `y`, sharing one inversion.
    pub fn hyperbolic(&self, p: Parameter, y: f64) -> Result<(Evaluation, Evaluation, Evaluation)> {
        let h = self.checked_hyper("sinh_p", p, y)?;
        let pv = p.value();
        let sinh =
            Evaluation { value: h.s, deviation: h.dev_s, one_minus: 1.0 - h.s, residual: h.residual, abs_err: h.err_s };
        let sinh = if y < 0.0 { sinh.negated() } else { sinh };
        Ok((sinh, self.cosh_from(pv, h), self.tanh_from(pv, y, h)))
    }

    /// `tanh_p` by inverting `arctanh_p`, independent of the ratio route.
    pub fn tanh_by_arctanh(&self, p: Parameter, y: f64) -> Result<Evaluation> {
        let pv = p.value();
        if !y.is_finite() {
            return Err(Error::Domain { what: "tanh_p", value: y });
        }
        let a = y.abs();
        if a == 0.0 {
            return Ok(Evaluation::exact(0.0, 0.0, 1.0));
        }
        let a_half = 0.5 + self.tanh_excess_integral(pv, 0.5)?.value;
        let ev = if a <= a_half {
            let root = solve_increasing(
                |x| Ok((x + self.tanh_excess_integral(pv, x)?.value, 1.0 + tanh_excess(pv, x))),
                (0.0, 0.0),
                (0.5, a_half),
                a,
                self.opts(a),
            )?;
            let d = self.tanh_excess_integral(pv, root.z)?;
            let x = a - d.value;
            Evaluation {
                value: x,
                deviation: -d.value,
                one_minus: 1.0 - x,
                residual: root.residual,
                abs_err: d.err_estimate + tanh_excess(pv, root.z) * root.residual,
            }
        } else {
            // z = -ln(1 - x)
            let eval = |z: f64| -> Result<(f64, f64)> {
                let tail = self.tanh_tail(pv, -z)?;
                let t = -(-z).exp_m1();
                let dens = (-z).exp() / (-(pv * t.ln()).exp_m1());
                Ok((a_half + tail.value, dens))
            };
            let lo = LN_2;
            let mut hi = 2.0 * LN_2;
            let f_hi = loop {
                let f = eval(hi)?.0;
                if f >= a {
                    break f;
                }
                if hi > 745.0 {
                    return Ok(if y < 0.0 {
                        Evaluation::exact(-1.0, -1.0 - y, 2.0)
                    } else {
                        Evaluation::exact(1.0, 1.0 - y, 0.0)
                    });
                }
                hi *= 2.0;
            };
            let root = solve_increasing(eval, (lo, a_half), (hi, f_hi), a, self.opts(a))?;
            let tail = self.tanh_tail(pv, -root.z)?;
            let residual = (a_half + tail.value - a).abs();
            let dz = (residual + tail.err_estimate) / eval(root.z)?.1;
            let q = (-root.z).exp();
            let x = 1.0 - q;
            Evaluation { value: x, deviation: x - a, one_minus: q, residual, abs_err: q * dz }
        };
        Ok(if y < 0.0 { ev.negated() } else { ev })
    }

    /// Dispatches on `kind`.
    pub fn eval(&self, kind: FunctionKind, p: Parameter, y: f64) -> Result<Evaluation> {
        match kind {
            FunctionKind::Sin => self.sin(p, y),
            FunctionKind::Cos => self.cos(p, y),
            FunctionKind::Tan => self.tan(p, y),
            FunctionKind::Sinh => self.sinh(p, y),
            FunctionKind::Cosh => self.cosh(p, y),
            FunctionKind::Tanh => self.tanh(p, y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn par(p: f64) -> Parameter {
        Parameter::new(p).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn classical_values() {
        let ev = Evaluator::default();
        let p = par(2.0);
        assert!(close(ev.sin(p, 1.0).unwrap().value, 1f64.sin(), 1e-13));
        assert!(close(ev.cos(p, 1.0).unwrap().value, 1f64.cos(), 1e-13));
        assert!(close(ev.tan(p, 0.5).unwrap().value, 0.5f64.tan(), 1e-13));
        assert!(close(ev.sinh(p, 1.0).unwrap().value, 1f64.sinh(), 1e-13));
        assert!(close(ev.cosh(p, 1.0).unwrap().value, 1f64.cosh(), 1e-13));
        assert!(close(ev.tanh(p, 1.0).unwrap().value, 1f64.tanh(), 1e-13));
    }

    #[test]
    fn linear_parameter_closed_forms() {
        let ev = Evaluator::default();
        let p = par(1.0);
        assert!(close(ev.sin(p, 0.7).unwrap().value, 1.0 - (-0.7f64).exp(), 1e-14));
        assert!(close(ev.cos(p, 0.7).unwrap().value, (-0.7f64).exp(), 1e-14));
        assert!(close(ev.tan(p, 2f64.ln()).unwrap().value, 1.0, 1e-13));
        assert!(close(ev.sinh(p, 1.0).unwrap().value, 1f64.exp() - 1.0, 1e-13));
        assert!(close(ev.tanh(p, 1.0).unwrap().value, 1.0 - (-1f64).exp(), 1e-14));
    }

    #[test]
    fn values_at_origin() {
        let ev = Evaluator::default();
        for p in [0.3, 1.0, 4.0] {
            for kind in FunctionKind::ALL {
                let v = ev.eval(kind, par(p), 0.0).unwrap().value;
                let expect = if kind.is_odd() { 0.0 } else { 1.0 };
                assert_eq!(v, expect, "{kind} p={p}");
            }
        }
    }

    #[test]
    fn peak_and_zero_of_cosine() {
        let ev = Evaluator::default();
        let p = par(3.0);
        let half = 0.5 * pi_p(p).value();
        assert_eq!(ev.sin(p, half).unwrap().value, 1.0);
        assert_eq!(ev.cos(p, half).unwrap().value, 0.0);
        // just below the peak the complement is still resolved
        let d = 1e-6;
        let s = ev.sin(par(2.0), std::f64::consts::FRAC_PI_2 - d).unwrap();
        assert!((s.one_minus / (2.0 * (0.5 * d).sin().powi(2)) - 1.0).abs() < 1e-6, "{s:?}");
    }

    #[test]
    fn extensions_for_periodic_case() {
        let ev = Evaluator::default();
        for p in [1.5, 3.0, 6.0] {
            let big = pi_p(par(p)).value();
            for y in [0.2, 0.7, 1.1] {
                let s = ev.sin(par(p), y).unwrap().value;
                assert!(close(ev.sin(par(p), big - y).unwrap().value, s, 1e-12));
                assert!(close(ev.sin(par(p), y + 2.0 * big).unwrap().value, s, 1e-12));
                assert!(close(ev.sin(par(p), -y).unwrap().value, -s, 1e-15));
                let c = ev.cos(par(p), y).unwrap().value;
                assert!(close(ev.cos(par(p), big - y).unwrap().value, -c, 1e-12));
                assert!(close(ev.cos(par(p), -y).unwrap().value, c, 1e-15));
            }
        }
        // p = 2 against the classical functions over several periods
        for y in [-7.0, -2.0, 2.0, 4.0, 9.5] {
            assert!(close(ev.sin(par(2.0), y).unwrap().value, f64::sin(y), 1e-12));
            assert!(close(ev.cos(par(2.0), y).unwrap().value, f64::cos(y), 1e-12));
        }
    }

    #[test]
    fn tangent_branches() {
        let ev = Evaluator::default();
        let p = par(3.0);
        let half = 0.5 * pi_p(p).value();
        assert!(matches!(ev.tan(p, half), Err(Error::Pole { .. })));
        assert!(matches!(ev.tan(p, -half), Err(Error::Pole { .. })));
        assert!(matches!(ev.tan(p, half + 0.5), Err(Error::Domain { .. })));
        assert!(matches!(ev.tan_by_arctan(p, half), Err(Error::Pole { .. })));
        for y in [0.1, 0.6, 1.0, half - 1e-3] {
            let a = ev.tan(p, y).unwrap().value;
            let b = ev.tan_by_arctan(p, y).unwrap().value;
            assert!((a - b).abs() <= 1e-9 * a.max(1.0), "y={y}: {a} vs {b}");
        }
        assert!(matches!(ev.tan(par(0.5), 1e12), Err(Error::Overflow { .. })));
        assert!(matches!(ev.tan_by_arctan(par(0.5), 1e12), Err(Error::Overflow { .. })));
        let a = ev.tan(par(0.5), 1e6).unwrap().value;
        let b = ev.tan_by_arctan(par(0.5), 1e6).unwrap().value;
        assert!((a / b - 1.0).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn hyperbolic_routes_agree() {
        let ev = Evaluator::default();
        for p in [0.25, 1.0, 2.5, 16.0] {
            for y in [0.01, 0.5, 1.3, 5.0, 30.0] {
                let a = ev.tanh(par(p), y).unwrap();
                let b = ev.tanh_by_arctanh(par(p), y).unwrap();
                assert!((a.value - b.value).abs() <= 1e-9, "p={p} y={y}");
                let rel = (a.one_minus - b.one_minus).abs() / a.one_minus;
                assert!(rel < 1e-8, "p={p} y={y}: {} vs {}", a.one_minus, b.one_minus);
            }
        }
        assert!(matches!(ev.sinh(par(2.0), 60.0), Err(Error::Overflow { .. })));
        // sinh_p overflows here but tanh_p falls back to the direct inversion
        assert!(matches!(ev.sinh(par(0.05), 0.9), Err(Error::Overflow { .. })));
        let a = ev.tanh(par(0.05), 0.9).unwrap();
        let b = ev.tanh_by_arctanh(par(0.05), 0.9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn deviation_is_accurate_near_origin() {
        let ev = Evaluator::default();
        let y = 1e-3f64;
        // classical series: sin y - y, cos y - 1, tan y - y, sinh y - y, cosh y - 1, tanh y - y
        let expect = [
            (FunctionKind::Sin, -y.powi(3) / 6.0 + y.powi(5) / 120.0),
            (FunctionKind::Cos, -y.powi(2) / 2.0 + y.powi(4) / 24.0),
            (FunctionKind::Tan, y.powi(3) / 3.0 + 2.0 * y.powi(5) / 15.0),
            (FunctionKind::Sinh, y.powi(3) / 6.0 + y.powi(5) / 120.0),
            (FunctionKind::Cosh, y.powi(2) / 2.0 + y.powi(4) / 24.0),
            (FunctionKind::Tanh, -y.powi(3) / 3.0 + 2.0 * y.powi(5) / 15.0),
        ];
        for (kind, e) in expect {
            let d = ev.eval(kind, par(2.0), y).unwrap().deviation;
            assert!((d / e - 1.0).abs() < 1e-9, "{kind}: {d} vs {e}");
            let d = ev.eval(kind, par(2.0), -y).unwrap().deviation;
            let e = if kind.is_odd() { -e } else { e };
            assert!((d / e - 1.0).abs() < 1e-9, "{kind} at -y: {d} vs {e}");
        }
    }

    #[test]
    fn complement_of_tanh_far_out() {
        // p = 2: 1 - tanh y = 2 / (e^(2y) + 1)
        let ev = Evaluator::default();
        for y in [5.0, 20.0, 40.0] {
            let t = ev.tanh(par(2.0), y).unwrap();
            let exact = 2.0 / ((2.0 * y).exp() + 1.0);
            assert!((t.one_minus / exact - 1.0).abs() < 1e-11, "y={y}");
        }
    }

    #[test]
    fn non_finite_arguments() {
        let ev = Evaluator::default();
        for kind in FunctionKind::ALL {
            assert!(matches!(ev.eval(kind, par(2.0), f64::NAN), Err(Error::Domain { .. })));
            assert!(matches!(ev.eval(kind, par(2.0), f64::INFINITY), Err(Error::Domain { .. })));
        }
    }
}
