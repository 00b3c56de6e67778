//! CSV and JSON serialization of scan reports.
//!
//! CSV rows are `property,kind,p,y,margin,err_bound,verdict` in row-major
//! order, floats with 17 significant digits, LF line endings. Non-finite
//! values are written as `NaN`, `inf` and `-inf`. The JSON form mirrors
//! [`ScanReport`] plus `schema_version`; non-finite floats become the same
//! strings because JSON numbers cannot hold them.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gtrig::FunctionKind;
use crate::lab::{Margin, Property, ScanMeta, ScanReport, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 7] = ["property", "kind", "p", "y", "margin", "err_bound", "verdict"];

fn format_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

/// Lossless text form of a binary64 value.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

pub fn parse_float(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Format(format!("not a number: '{s}'")))
}

pub fn write_csv<W: Write>(report: &ScanReport, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER).map_err(format_err)?;
    for (p, y, m) in report.cells() {
        w.write_record([
            report.property.name(),
            report.kind.name(),
            &format_float(p),
            &format_float(y),
            &format_float(m.value),
            &format_float(m.err_bound),
            m.verdict.name(),
        ])
        .map_err(format_err)?;
    }
    w.flush().map_err(format_err)
}

pub fn to_csv_string(report: &ScanReport) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(report, &mut buf)?;
    String::from_utf8(buf).map_err(format_err)
}

/// Rebuilds the margin table from CSV. The metadata is not part of the CSV
/// schema, so `meta` is `None`.
pub fn read_csv<R: Read>(input: R) -> Result<ScanReport> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers().map_err(format_err)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Format(format!("unexpected header {:?}", header)));
    }
    let mut head: Option<(Property, FunctionKind)> = None;
    let mut cells: Vec<(f64, f64, Margin)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(format_err)?;
        let field = |i: usize| rec.get(i).ok_or_else(|| Error::Format(format!("missing column {}", CSV_HEADER[i])));
        let property: Property = field(0)?.parse().map_err(Error::Format)?;
        let kind: FunctionKind = field(1)?.parse().map_err(Error::Format)?;
        match head {
            None => head = Some((property, kind)),
            Some(h) if h != (property, kind) => {
                return Err(Error::Format("rows mix properties or kinds".into()));
            }
            _ => {}
        }
        let verdict: Verdict = field(6)?.parse().map_err(Error::Format)?;
        let margin = Margin { value: parse_float(field(4)?)?, err_bound: parse_float(field(5)?)?, verdict };
        cells.push((parse_float(field(2)?)?, parse_float(field(3)?)?, margin));
    }
    let (property, kind) = head.ok_or_else(|| Error::Format("no rows".into()))?;
    let mut p_grid: Vec<f64> = Vec::new();
    for &(p, _, _) in &cells {
        if p_grid.last().is_none_or(|&last| last.to_bits() != p.to_bits()) {
            p_grid.push(p);
        }
    }
    let ny = cells.len() / p_grid.len();
    if ny * p_grid.len() != cells.len() {
        return Err(Error::Format("rows do not form a rectangular grid".into()));
    }
    let y_grid: Vec<f64> = cells[..ny].iter().map(|c| c.1).collect();
    let mut margins = Vec::with_capacity(p_grid.len());
    for (i, row) in cells.chunks(ny).enumerate() {
        let consistent =
            row.iter().zip(&y_grid).all(|(c, y)| c.0.to_bits() == p_grid[i].to_bits() && c.1.to_bits() == y.to_bits());
        if !consistent {
            return Err(Error::Format(format!("row block {i} does not follow the grid order")));
        }
        margins.push(row.iter().map(|c| c.2).collect());
    }
    Ok(ScanReport { property, kind, p_grid, y_grid, margins, meta: None })
}

/// A float that survives JSON even when non-finite.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonFloat {
    Number(f64),
    Text(String),
}

impl From<f64> for JsonFloat {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            JsonFloat::Number(v)
        } else {
            JsonFloat::Text(format_float(v))
        }
    }
}

impl JsonFloat {
    fn value(&self) -> Result<f64> {
        match self {
            JsonFloat::Number(v) => Ok(*v),
            JsonFloat::Text(s) => parse_float(s),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonMargin {
    value: JsonFloat,
    err_bound: JsonFloat,
    verdict: Verdict,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonReport {
    schema_version: u32,
    property: Property,
    kind: FunctionKind,
    p_grid: Vec<f64>,
    y_grid: Vec<f64>,
    margins: Vec<Vec<JsonMargin>>,
    meta: Option<ScanMeta>,
}

pub fn to_json_string(report: &ScanReport) -> Result<String> {
    let dto = JsonReport {
        schema_version: SCHEMA_VERSION,
        property: report.property,
        kind: report.kind,
        p_grid: report.p_grid.clone(),
        y_grid: report.y_grid.clone(),
        margins: report
            .margins
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| JsonMargin { value: m.value.into(), err_bound: m.err_bound.into(), verdict: m.verdict })
                    .collect()
            })
            .collect(),
        meta: report.meta.clone(),
    };
    let mut s = serde_json::to_string_pretty(&dto).map_err(format_err)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json_str(s: &str) -> Result<ScanReport> {
    let dto: JsonReport = serde_json::from_str(s).map_err(format_err)?;
    if dto.schema_version != SCHEMA_VERSION {
        return Err(Error::Format(format!("unsupported schema_version {}", dto.schema_version)));
    }
    let margins = dto
        .margins
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| Ok(Margin { value: m.value.value()?, err_bound: m.err_bound.value()?, verdict: m.verdict }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if margins.len() != dto.p_grid.len() || margins.iter().any(|r| r.len() != dto.y_grid.len()) {
        return Err(Error::Format("margin table does not match the grids".into()));
    }
    Ok(ScanReport {
        property: dto.property,
        kind: dto.kind,
        p_grid: dto.p_grid,
        y_grid: dto.y_grid,
        margins,
        meta: dto.meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScanReport {
        let mk = |v: f64, e: f64| Margin::new(v, e);
        ScanReport {
            property: Property::LogConvex,
            kind: FunctionKind::Tan,
            p_grid: vec![0.1, 1.0 / 3.0],
            y_grid: vec![0.05, 0.65],
            margins: vec![
                vec![mk(-0.1156189148777499, 7.3e-14), Margin::failed()],
                vec![mk(1e-300, f64::INFINITY), mk(0.1 + 0.2, 5e-324)],
            ],
            meta: None,
        }
    }

    #[test]
    fn float_format_is_lossless() {
        for v in [0.1, 1.0 / 3.0, -2.5e-310, 5e-324, f64::MAX, f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
            let back = parse_float(&format_float(v)).unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v}");
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        let text = to_csv_string(&r).unwrap();
        assert!(text.starts_with("property,kind,p,y,margin,err_bound,verdict\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 5);
        let back = read_csv(text.as_bytes()).unwrap();
        assert!(back.same_table(&r));
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = to_json_string(&r).unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        let back = from_json_str(&text).unwrap();
        assert!(back.same_table(&r));
    }

    #[test]
    fn malformed_input() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
        assert!(read_csv("property,kind,p,y,margin,err_bound,verdict\n".as_bytes()).is_err());
        let ragged = "property,kind,p,y,margin,err_bound,verdict\n\
                      log-convex,tan,1,0.1,1,0,holds\n\
                      log-convex,tan,1,0.2,1,0,holds\n\
                      log-convex,tan,2,0.1,1,0,holds\n";
        assert!(read_csv(ragged.as_bytes()).is_err());
        assert!(from_json_str("{\"schema_version\": 2}").is_err());
    }
}
