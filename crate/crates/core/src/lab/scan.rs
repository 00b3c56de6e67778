//! Grid scans of a convexity property over `(p, y)`.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::turan::{relative, turan_margin_with};
use super::{Margin, Property, Verdict};
use crate::calculus::derivative_report_with;
use crate::error::{Error, Result};
use crate::gtrig::{Evaluator, FunctionKind, Parameter};

/// Environment variable capping scan parallelism.
pub const THREADS_ENV: &str = "GENTRIG_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Second derivatives from the integral formulas.
    Analytic,
    /// Central differences of forward values in `p`.
    FiniteDiff,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::FiniteDiff => "finite-diff",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "finite-diff" | "fd" => Ok(Mode::FiniteDiff),
            _ => Err(format!("unknown mode '{s}' (expected analytic or finite-diff)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub mode: Mode,
    pub evaluator: Evaluator,
    /// Step in `p` for the finite-difference mode.
    pub fd_step: f64,
    /// Worker threads; `None` reads `GENTRIG_THREADS`, then uses all cores.
    pub threads: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { mode: Mode::Analytic, evaluator: Evaluator::certification(), fd_step: 1e-3, threads: None }
    }
}

/// Where a claim about the property is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    Theorem,
    Conjecture,
    /// Outside any stated claim.
    None,
}

/// The strongest claim covering `property` for `kind` at `(p, y)`.
pub fn claim_region(property: Property, kind: FunctionKind, p: f64, y: f64) -> Claim {
    use FunctionKind as K;
    use Property as P;
    let trig_y = y > 0.0 && y < 1.0;
    let small_y = y > 0.0 && y < LN_2;
    let any_y = y > 0.0;
    let theorem = |ok: bool| if ok { Claim::Theorem } else { Claim::None };
    match (property, kind) {
        (P::LogConcave, K::Sin) => theorem(p > 0.0 && trig_y),
        (P::LogConvex, K::Tan) | (P::LogConcave, K::Cos) => theorem(p > 1.0 && small_y),
        (P::LogConvex, K::Sinh | K::Cosh) | (P::Concave | P::LogConcave, K::Tanh) => theorem(p > 0.0 && any_y),
        (P::Concave, K::Sin) if p >= 1.0 && trig_y => Claim::Conjecture,
        (P::TuranSin, K::Sin) => theorem(p > 1.0 && trig_y),
        (P::TuranSinh, K::Sinh) | (P::TuranTanh, K::Tanh) => theorem(p > 1.0 && any_y),
        (P::TuranCos, K::Cos) | (P::TuranTan, K::Tan) => {
            if p > 2.0 && small_y {
                Claim::Theorem
            } else if p > 2.0 && trig_y {
                Claim::Conjecture
            } else {
                Claim::None
            }
        }
        _ => Claim::None,
    }
}

/// A cell whose computation raised an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellError {
    pub p: f64,
    pub y: f64,
    pub message: String,
}

/// Provenance carried alongside the margin table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMeta {
    pub config: ScanConfig,
    /// Some cell lies outside every theorem and conjecture.
    pub exploratory: bool,
    pub errors: Vec<CellError>,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub property: Property,
    pub kind: FunctionKind,
    pub p_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    /// `margins[i][j]` belongs to `(p_grid[i], y_grid[j])`.
    pub margins: Vec<Vec<Margin>>,
    /// Absent when the report was read back from CSV.
    pub meta: Option<ScanMeta>,
}

impl ScanReport {
    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, &Margin)> + '_ {
        self.p_grid
            .iter()
            .zip(&self.margins)
            .flat_map(move |(&p, row)| self.y_grid.iter().zip(row).map(move |(&y, m)| (p, y, m)))
    }

    /// `(holds, fails, inconclusive)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        self.cells().fold((0, 0, 0), |(h, f, i), (_, _, m)| match m.verdict {
            Verdict::Holds => (h + 1, f, i),
            Verdict::Fails => (h, f + 1, i),
            Verdict::Inconclusive => (h, f, i + 1),
        })
    }

    /// Fails beats Inconclusive beats Holds.
    pub fn overall(&self) -> Verdict {
        match self.counts() {
            (_, f, _) if f > 0 => Verdict::Fails,
            (_, _, i) if i > 0 => Verdict::Inconclusive,
            _ => Verdict::Holds,
        }
    }

    /// Equality of the margin table, treating NaN cells bitwise.
    pub fn same_table(&self, other: &ScanReport) -> bool {
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        self.property == other.property
            && self.kind == other.kind
            && bits(&self.p_grid) == bits(&other.p_grid)
            && bits(&self.y_grid) == bits(&other.y_grid)
            && self.margins.len() == other.margins.len()
            && self
                .margins
                .iter()
                .zip(&other.margins)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_as(y)))
    }
}

fn validate_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(format!("{name} grid has non-finite values")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(format!("{name} grid is not strictly increasing")));
    }
    Ok(())
}

fn thread_count(cfg: &ScanConfig) -> Result<Option<usize>> {
    if let Some(n) = cfg.threads {
        return if n >= 1 { Ok(Some(n)) } else { Err(Error::InvalidConfig("threads must be at least 1".into())) };
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::InvalidConfig(format!("{THREADS_ENV} must be an integer >= 1, got '{s}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Scan with the default configuration.
pub fn scan(property: Property, kind: FunctionKind, p_grid: &[f64], y_grid: &[f64], mode: Mode) -> Result<ScanReport> {
    scan_with(&ScanConfig { mode, ..ScanConfig::default() }, property, kind, p_grid, y_grid)
}

/// Computes one margin per grid cell. Cell failures become inconclusive
/// margins and are listed in the report's metadata; only invalid input
/// aborts the scan.
pub fn scan_with(
    cfg: &ScanConfig,
    property: Property,
    kind: FunctionKind,
    p_grid: &[f64],
    y_grid: &[f64],
) -> Result<ScanReport> {
    validate_grid("p", p_grid)?;
    validate_grid("y", y_grid)?;
    if p_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter(p_grid[0]));
    }
    if let Some(k) = property.turan_kind() {
        if k != kind {
            return Err(Error::InvalidConfig(format!("property {property} requires kind {k}, got {kind}")));
        }
    }
    if cfg.mode == Mode::FiniteDiff && !(cfg.fd_step > 0.0 && cfg.fd_step.is_finite()) {
        return Err(Error::InvalidConfig(format!("fd_step must be positive, got {}", cfg.fd_step)));
    }
    cfg.evaluator.quad.validate()?;
    let threads = thread_count(cfg)?;
    let ny = y_grid.len();
    let cells: Vec<(f64, f64)> = p_grid.iter().flat_map(|&p| y_grid.iter().map(move |&y| (p, y))).collect();
    let run = || -> Vec<Result<Margin>> { cells.par_iter().map(|&(p, y)| cell(cfg, property, kind, p, y)).collect() };
    let results = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    let mut errors = Vec::new();
    let mut flat = Vec::with_capacity(results.len());
    for (&(p, y), r) in cells.iter().zip(results) {
        flat.push(r.unwrap_or_else(|e| {
            errors.push(CellError { p, y, message: e.to_string() });
            Margin::failed()
        }));
    }
    let margins = flat.chunks(ny).map(|row| row.to_vec()).collect();
    let exploratory = cells.iter().any(|&(p, y)| claim_region(property, kind, p, y) == Claim::None);
    Ok(ScanReport {
        property,
        kind,
        p_grid: p_grid.to_vec(),
        y_grid: y_grid.to_vec(),
        margins,
        meta: Some(ScanMeta { config: *cfg, exploratory, errors }),
    })
}

fn cell(cfg: &ScanConfig, property: Property, kind: FunctionKind, p: f64, y: f64) -> Result<Margin> {
    let ev = &cfg.evaluator;
    let par = Parameter::new(p)?;
    if property.turan_kind().is_some() {
        return turan_margin_with(ev, kind, par, y);
    }
    let (log, sign) = match property {
        Property::LogConcave => (true, -1.0),
        Property::LogConvex => (true, 1.0),
        Property::Concave => (false, -1.0),
        _ => unreachable!("Turán properties handled above"),
    };
    let d2 = match cfg.mode {
        Mode::Analytic => {
            let r = derivative_report_with(ev, kind, par, y)?;
            if log {
                (r.d2logg_dp2, r.d2logg_err)
            } else {
                (r.d2g_dp2, r.d2g_err)
            }
        }
        Mode::FiniteDiff => finite_difference(ev, kind, p, y, cfg.fd_step, log)?,
    };
    Ok(Margin::new(sign * d2.0, d2.1))
}

/// Second central difference of `g` or `ln g` in `p` at step `h`, with the
/// truncation error estimated against step `2h`.
fn finite_difference(ev: &Evaluator, kind: FunctionKind, p: f64, y: f64, h: f64, log: bool) -> Result<(f64, f64)> {
    let mut vals = [0.0; 5];
    let mut noise: f64 = 0.0;
    for (k, v) in vals.iter_mut().enumerate() {
        let q = Parameter::new(p + (k as f64 - 2.0) * h)?;
        let r = relative(ev, kind, q, y)?;
        // ln g = ln base + ln(1 + d); the constant drops out of the difference.
        let (val, err) = if log { (r.d.ln_1p(), r.err_d / (1.0 + r.d)) } else { (r.base * r.d, r.base * r.err_d) };
        *v = val;
        noise = noise.max(err + f64::EPSILON * val.abs());
    }
    let d_h = ((vals[3] - vals[2]) - (vals[2] - vals[1])) / (h * h);
    let d_2h = ((vals[4] - vals[2]) - (vals[2] - vals[0])) / (4.0 * h * h);
    let err = (d_h - d_2h).abs() / 3.0 + 4.0 * noise / (h * h);
    Ok((d_h, err))
}
