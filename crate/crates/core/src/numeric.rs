//! Small floating-point helpers shared by the kernels.

/// `ln(1 + e^a)` without overflow.
pub fn softplus(a: f64) -> f64 {
    a.max(0.0) + (-a.abs()).exp().ln_1p()
}

/// Logistic function `1 / (1 + e^-a)`.
pub fn logistic(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + (-a).exp())
    } else {
        let e = a.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 - e^a)` for `a < 0`.
pub fn ln_one_minus_exp(a: f64) -> f64 {
    if a > -std::f64::consts::LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// `ln t` for `t` in `(0, 1]`, given `gap = 1 - t` computed exactly.
pub fn ln_from_gap(t: f64, gap: f64) -> f64 {
    if gap < 0.5 {
        (-gap).ln_1p()
    } else {
        t.ln()
    }
}

/// Uniform grid of `n` points on `[lo, hi]` (a single point `lo` when `n == 1`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// Geometric grid of `n` points on `[lo, hi]`, `lo > 0`.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                l.exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_forms() {
        assert!((softplus(800.0) - 800.0).abs() < 1e-12);
        assert!((softplus(-800.0)).abs() < 1e-300);
        assert!((logistic(0.0) - 0.5).abs() < 1e-16);
        assert!((ln_one_minus_exp(-1e-20) - (1e-20f64).ln()).abs() < 1e-12);
        assert!((ln_one_minus_exp(-50.0) + (-50.0f64).exp()).abs() < 1e-30);
        assert!((ln_from_gap(1.0 - 1e-10, 1e-10) / (-1e-10 - 5e-21) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grids() {
        let g = linspace(0.0, 1.0, 5);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = geomspace(0.25, 16.0, 7);
        assert_eq!(g[0], 0.25);
        assert_eq!(g[6], 16.0);
        assert!((g[3] - 2.0).abs() < 1e-14);
    }
}
