//! `gentrig` command-line front end.
//!
//! Exit status: 0 when every cell holds, 1 when any cell fails, 2 on usage or
//! evaluation errors, 3 when some cells are inconclusive and none fail.

mod args;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use gentrig::lab::{self, P0Outcome};
use gentrig::numeric::{geomspace, linspace};
use gentrig::report::{self, format_float, SCHEMA_VERSION};
use gentrig::{
    derivative_report_with, Evaluator, Parameter, Property, QuadratureConfig, ScanConfig, ScanReport, Verdict,
};
use serde_json::{json, Value};

use args::{
    Cli, Command, FindP0Args, Format, Lemma3Args, OutputArgs, PGrid, PointArgs, ScanArgs, Spacing, TuranArgs, YGrid,
};

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(gentrig::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<gentrig::Error> for CliError {
    fn from(e: gentrig::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => ExitCode::from(exit_code(v)),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails => EXIT_FAILS,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn run(command: Command) -> CliResult<Verdict> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Derivs(a) => derivs(a),
        Command::Scan(a) => scan(a),
        Command::Turan(a) => turan(a),
        Command::Lemma3(a) => lemma3(a),
        Command::FindP0(a) => find_p0(a),
    }
}

/// Writes `text` to the output file through a temporary file in the same
/// directory, or to standard output.
fn emit(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.output {
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// JSON number, or the lossless text form for non-finite values.
fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(format_float(v))
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn json_text(v: &Value) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.into()))?;
    s.push('\n');
    Ok(s)
}

fn parameter(p: f64) -> CliResult<Parameter> {
    Parameter::new(p).map_err(|e| CliError::Usage(e.to_string()))
}

fn evaluator(tol: Option<f64>, base: Evaluator) -> CliResult<Evaluator> {
    match tol {
        None => Ok(base),
        Some(t) => Ok(Evaluator::new(QuadratureConfig { rel_tol: t, ..base.quad }, t)
            .map_err(|e| CliError::Usage(e.to_string()))?),
    }
}

fn grid(name: &str, min: Option<f64>, max: Option<f64>, steps: usize, spacing: Spacing) -> CliResult<Vec<f64>> {
    let (Some(lo), Some(hi)) = (min, max) else {
        return Err(CliError::Usage(format!("--{name}-min and --{name}-max are required")));
    };
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(CliError::Usage(format!("{name} bounds must be finite")));
    }
    if steps == 0 {
        return Err(CliError::Usage(format!("--{name}-steps must be at least 1")));
    }
    if lo > hi || (steps > 1 && lo == hi) {
        return Err(CliError::Usage(format!("{name} bounds must satisfy min < max (got {lo}, {hi})")));
    }
    match spacing {
        Spacing::Geometric if lo <= 0.0 => {
            Err(CliError::Usage(format!("geometric {name} grid needs a positive minimum, got {lo}")))
        }
        Spacing::Geometric => Ok(geomspace(lo, hi, steps)),
        Spacing::Linear => Ok(linspace(lo, hi, steps)),
    }
}

fn p_grid(g: &PGrid) -> CliResult<Vec<f64>> {
    grid("p", g.p_min, g.p_max, g.p_steps, g.p_spacing)
}

fn y_grid(g: &YGrid) -> CliResult<Vec<f64>> {
    grid("y", g.y_min, g.y_max, g.y_steps, Spacing::Linear)
}

fn eval(a: PointArgs) -> CliResult<Verdict> {
    let ev = evaluator(a.tol, Evaluator::default())?;
    let p = parameter(a.p)?;
    let e = ev.eval(a.kind, p, a.y)?;
    let text = match a.out.format {
        Format::Csv => {
            let mut s = csv_line(
                &["kind", "p", "y", "value", "deviation", "one_minus", "residual", "abs_err"].map(String::from),
            );
            s += &csv_line(&[
                a.kind.to_string(),
                format_float(a.p),
                format_float(a.y),
                format_float(e.value),
                format_float(e.deviation),
                format_float(e.one_minus),
                format_float(e.residual),
                format_float(e.abs_err),
            ]);
            s
        }
        Format::Json => json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "kind": a.kind,
            "p": num(a.p),
            "y": num(a.y),
            "value": num(e.value),
            "deviation": num(e.deviation),
            "one_minus": num(e.one_minus),
            "residual": num(e.residual),
            "abs_err": num(e.abs_err),
            "config": ev,
        }))?,
    };
    emit(&a.out, &text)?;
    Ok(Verdict::Holds)
}

fn derivs(a: PointArgs) -> CliResult<Verdict> {
    let ev = evaluator(a.tol, Evaluator::certification())?;
    let r = derivative_report_with(&ev, a.kind, parameter(a.p)?, a.y)?;
    let fields = [
        ("g", r.g),
        ("dg_dp", r.dg_dp),
        ("d2g_dp2", r.d2g_dp2),
        ("d2logg_dp2", r.d2logg_dp2),
        ("quad_err", r.quad_err),
        ("g_err", r.g_err),
        ("dg_err", r.dg_err),
        ("d2g_err", r.d2g_err),
        ("d2logg_err", r.d2logg_err),
    ];
    let text = match a.out.format {
        Format::Csv => {
            let mut head = vec!["kind".to_string(), "p".into(), "y".into()];
            head.extend(fields.iter().map(|f| f.0.to_string()));
            let mut row = vec![r.kind.to_string(), format_float(r.p), format_float(r.y)];
            row.extend(fields.iter().map(|f| format_float(f.1)));
            csv_line(&head) + &csv_line(&row)
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
            obj.insert("kind".into(), json!(r.kind));
            obj.insert("p".into(), num(r.p));
            obj.insert("y".into(), num(r.y));
            for (k, v) in fields {
                obj.insert(k.into(), num(v));
            }
            obj.insert("config".into(), json!(ev));
            json_text(&Value::Object(obj))?
        }
    };
    emit(&a.out, &text)?;
    Ok(Verdict::Holds)
}

fn emit_scan(out: &OutputArgs, r: &ScanReport) -> CliResult<Verdict> {
    let text = match out.format {
        Format::Csv => report::to_csv_string(r)?,
        Format::Json => report::to_json_string(r)?,
    };
    emit(out, &text)?;
    if let Some(meta) = &r.meta {
        for e in &meta.errors {
            eprintln!("warning: cell p={} y={}: {}", e.p, e.y, e.message);
        }
    }
    Ok(r.overall())
}

fn scan(a: ScanArgs) -> CliResult<Verdict> {
    let cfg = ScanConfig {
        mode: a.mode,
        evaluator: evaluator(a.tol, Evaluator::certification())?,
        fd_step: a.fd_step,
        threads: None,
    };
    let ps = p_grid(&a.p_grid)?;
    let ys = y_grid(&a.y_grid)?;
    let r = lab::scan_with(&cfg, a.property, a.kind, &ps, &ys).map_err(|e| CliError::Usage(e.to_string()))?;
    emit_scan(&a.out, &r)
}

fn turan(a: TuranArgs) -> CliResult<Verdict> {
    let property = Property::turan_for(a.kind)
        .ok_or_else(|| CliError::Usage(format!("no Turán inequality is stated for {}", a.kind)))?;
    let ps = match a.p {
        Some(p) => vec![p],
        None => p_grid(&a.p_grid)?,
    };
    let ys = match a.y {
        Some(y) => vec![y],
        None => y_grid(&a.y_grid)?,
    };
    let cfg = ScanConfig { evaluator: evaluator(a.tol, Evaluator::certification())?, ..ScanConfig::default() };
    let r = lab::scan_with(&cfg, property, a.kind, &ps, &ys).map_err(|e| CliError::Usage(e.to_string()))?;
    emit_scan(&a.out, &r)
}

fn lemma3(a: Lemma3Args) -> CliResult<Verdict> {
    let ps = grid("p", Some(a.p_min), Some(a.p_max), a.p_steps, Spacing::Linear)?;
    let ss = grid("s", Some(a.s_min), Some(a.s_max), a.s_steps, Spacing::Linear)?;
    let mut rows = Vec::new();
    let mut worst = Verdict::Holds;
    for &p in &ps {
        let par = parameter(p)?;
        for &s in &ss {
            let c = lab::lemma3_check(par, s).map_err(|e| CliError::Usage(e.to_string()))?;
            let m = c.margin();
            worst = combine(worst, m.verdict);
            rows.push((p, s, c, m));
        }
    }
    let constant = lab::lemma3_constant()?;
    let text = match a.out.format {
        Format::Csv => {
            let mut s =
                csv_line(&["p", "s", "lhs", "rhs", "rhs_err", "margin", "err_bound", "verdict"].map(String::from));
            for (p, sv, c, m) in &rows {
                s += &csv_line(&[
                    format_float(*p),
                    format_float(*sv),
                    format_float(c.lhs),
                    format_float(c.rhs.value),
                    format_float(c.rhs.err_estimate),
                    format_float(m.value),
                    format_float(m.err_bound),
                    m.verdict.to_string(),
                ]);
            }
            s
        }
        Format::Json => json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "rows": rows.iter().map(|(p, s, c, m)| json!({
                "p": num(*p),
                "s": num(*s),
                "lhs": num(c.lhs),
                "rhs": num(c.rhs.value),
                "rhs_err": num(c.rhs.err_estimate),
                "margin": num(m.value),
                "err_bound": num(m.err_bound),
                "verdict": m.verdict,
            })).collect::<Vec<_>>(),
            "constant": {
                "quadrature": num(constant.quadrature.value),
                "quadrature_err": num(constant.quadrature.err_estimate),
                "closed_form": num(constant.closed_form),
                "zeta3": num(constant.zeta3.value),
            },
        }))?,
    };
    emit(&a.out, &text)?;
    Ok(worst)
}

fn combine(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
        _ => Verdict::Holds,
    }
}

/// Exploratory: exits 0 unless some `y` could not be evaluated.
fn find_p0(a: FindP0Args) -> CliResult<Verdict> {
    let ys = grid("y", Some(a.y_min), Some(a.y_max), a.y_steps, Spacing::Linear)?;
    let r = lab::find_p0(&ys, a.p_min, a.p_max, a.tol).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = match a.out.format {
        Format::Csv => {
            let mut s = csv_line(&["y", "outcome", "threshold", "lower", "upper", "message"].map(String::from));
            for w in &r.witnesses {
                let row = match &w.outcome {
                    P0Outcome::Threshold { p, lower, upper } => [
                        "threshold".into(),
                        format_float(*p),
                        format_float(*lower),
                        format_float(*upper),
                        String::new(),
                    ],
                    P0Outcome::NoSignChange => {
                        ["no-sign-change".into(), String::new(), String::new(), String::new(), String::new()]
                    }
                    P0Outcome::Failed { message } => [
                        "failed".into(),
                        String::new(),
                        String::new(),
                        String::new(),
                        format!("\"{}\"", message.replace('"', "\"\"")),
                    ],
                };
                let mut fields = vec![format_float(w.y)];
                fields.extend(row);
                s += &csv_line(&fields);
            }
            s
        }
        Format::Json => json_text(&json!({ "schema_version": SCHEMA_VERSION, "search": r }))?,
    };
    emit(&a.out, &text)?;
    let failed = r.witnesses.iter().any(|w| matches!(w.outcome, P0Outcome::Failed { .. }));
    Ok(if failed { Verdict::Inconclusive } else { Verdict::Holds })
}
