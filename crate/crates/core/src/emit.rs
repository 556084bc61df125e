//! CSV and JSON emission of results, and reading them back.

use std::cmp::Ordering;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::ensemble::Method;
use crate::harness::{aggregate_runs, CellResult, CurvePoint, NoiseRow, ReportRow, SyntheticRow};
use crate::learners::LearnerKind;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format '{s}'"))),
        }
    }
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Int(u64),
    /// Written with 4 decimals.
    Num(f64),
    /// Written with 4 decimals, or empty / null.
    Opt(Option<f64>),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Text(s) => s.clone(),
            Field::Int(i) => i.to_string(),
            Field::Num(x) | Field::Opt(Some(x)) => format!("{x:.4}"),
            Field::Opt(None) => String::new(),
        }
    }

    fn json(&self) -> Value {
        let num = |x: f64| {
            let r: f64 = format!("{x:.4}").parse().unwrap_or(x);
            serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
        };
        match self {
            Field::Text(s) => Value::String(s.clone()),
            Field::Int(i) => json!(i),
            Field::Num(x) | Field::Opt(Some(x)) => num(*x),
            Field::Opt(None) => Value::Null,
        }
    }

    fn cmp_key(&self, other: &Field) -> Ordering {
        match (self, other) {
            (Field::Text(a), Field::Text(b)) => a.cmp(b),
            (Field::Int(a), Field::Int(b)) => a.cmp(b),
            (Field::Num(a), Field::Num(b)) => a.total_cmp(b),
            _ => Ordering::Equal,
        }
    }
}

/// A row type with a fixed header.
pub trait Record {
    fn header() -> &'static [&'static str];

    fn fields(&self) -> Vec<Field>;

    /// Number of leading fields that define the sort order.
    fn key_len() -> usize;
}

impl Record for CellResult {
    fn header() -> &'static [&'static str] {
        &["dataset", "learner", "method", "members", "run", "fold", "error"]
    }

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Text(self.dataset.clone()),
            Field::Text(self.learner.to_string()),
            Field::Text(self.method.to_string()),
            Field::Int(self.members as u64),
            Field::Int(self.run as u64),
            Field::Int(self.fold as u64),
            Field::Num(100.0 * self.error()),
        ]
    }

    fn key_len() -> usize {
        6
    }
}

impl Record for ReportRow {
    fn header() -> &'static [&'static str] {
        &["dataset", "learner", "method", "error_mean", "error_sd", "best_single", "pct_reduction", "ratio"]
    }

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Text(self.dataset.clone()),
            Field::Text(self.learner.to_string()),
            Field::Text(self.method.to_string()),
            Field::Num(self.error_mean),
            Field::Num(self.error_sd),
            Field::Opt(self.best_single),
            Field::Opt(self.pct_reduction),
            Field::Opt(self.ratio),
        ]
    }

    fn key_len() -> usize {
        3
    }
}

impl Record for CurvePoint {
    fn header() -> &'static [&'static str] {
        &["dataset", "learner", "method", "members", "error_mean"]
    }

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Text(self.dataset.clone()),
            Field::Text(self.learner.to_string()),
            Field::Text(self.method.to_string()),
            Field::Int(self.members as u64),
            Field::Num(self.error_mean),
        ]
    }

    fn key_len() -> usize {
        4
    }
}

impl Record for NoiseRow {
    fn header() -> &'static [&'static str] {
        &["dataset", "level", "method", "error_mean", "single_error", "reduction"]
    }

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Text(self.dataset.clone()),
            Field::Num(100.0 * self.level),
            Field::Text(self.method.to_string()),
            Field::Num(self.error_mean),
            Field::Num(self.single_error),
            Field::Num(self.reduction),
        ]
    }

    fn key_len() -> usize {
        3
    }
}

impl Record for SyntheticRow {
    fn header() -> &'static [&'static str] {
        &["dataset", "method", "members", "error"]
    }

    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Text(self.dataset.map_or_else(|| "mean".to_owned(), |d| (d + 1).to_string())),
            Field::Text(self.method.to_string()),
            Field::Int(self.members as u64),
            Field::Num(self.error),
        ]
    }

    fn key_len() -> usize {
        3
    }
}

fn sorted<R: Record>(rows: &[R]) -> Vec<Vec<Field>> {
    let mut out: Vec<Vec<Field>> = rows.iter().map(Record::fields).collect();
    let k = R::key_len();
    out.sort_by(|a, b| {
        a[..k]
            .iter()
            .zip(&b[..k])
            .map(|(x, y)| x.cmp_key(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });
    out
}

/// Writes sorted rows as CSV (optional `#` preamble lines, header, rows) or
/// as JSON `{"provenance": [...], "rows": [...]}`.
pub fn write_records<R: Record>(rows: &[R], out: &mut dyn Write, format: Format, provenance: &[String]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Results("nothing to emit".into()));
    }
    let io_err = |e: io::Error| Error::io("<output>", e);
    let body = sorted(rows);
    match format {
        Format::Csv => {
            for line in provenance {
                writeln!(out, "# {line}").map_err(io_err)?;
            }
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(R::header())?;
            for r in &body {
                w.write_record(r.iter().map(Field::csv))?;
            }
            w.flush().map_err(io_err)?;
        }
        Format::Json => {
            let rows: Vec<Value> = body
                .iter()
                .map(|r| {
                    let m: Map<String, Value> = R::header()
                        .iter()
                        .zip(r)
                        .map(|(h, f)| ((*h).to_owned(), f.json()))
                        .collect();
                    Value::Object(m)
                })
                .collect();
            let doc = json!({ "provenance": provenance, "rows": rows });
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out).map_err(io_err)?;
        }
    }
    Ok(())
}

/// [`write_records`] to a file, or to stdout when `out_path` is `None`.
pub fn emit_results<R: Record>(rows: &[R], out_path: Option<&Path>, format: Format, provenance: &[String]) -> Result<()> {
    let mut buf = Vec::new();
    write_records(rows, &mut buf, format, provenance)?;
    match out_path {
        Some(p) => fs::write(p, buf).map_err(|e| Error::io(p, e)),
        None => io::stdout().write_all(&buf).map_err(|e| Error::io("<stdout>", e)),
    }
}

/// Reads a report CSV, or a cells CSV aggregated with equal fold weights.
/// Lines starting with `#` are skipped.
pub fn load_results(path: impl AsRef<Path>) -> Result<Vec<ReportRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    parse_results(&body)
}

fn parse_results(body: &str) -> Result<Vec<ReportRow>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let bad = |m: String| Error::Results(m);
    let is = |h: &[&str]| header.iter().map(String::as_str).eq(h.iter().copied());
    let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| bad(format!("'{s}' is not a number"))) };
    let opt = |s: &str| -> Result<Option<f64>> { if s.is_empty() { Ok(None) } else { num(s).map(Some) } };
    let count = |s: &str| -> Result<usize> { s.parse().map_err(|_| bad(format!("'{s}' is not a count"))) };
    if is(ReportRow::header()) {
        reader
            .records()
            .map(|r| {
                let r = r?;
                Ok(ReportRow {
                    dataset: r[0].to_owned(),
                    learner: r[1].parse::<LearnerKind>()?,
                    method: r[2].parse::<Method>()?,
                    error_mean: num(&r[3])?,
                    error_sd: num(&r[4])?,
                    best_single: opt(&r[5])?,
                    pct_reduction: opt(&r[6])?,
                    ratio: opt(&r[7])?,
                })
            })
            .collect()
    } else if is(CellResult::header()) {
        let mut folds = Vec::new();
        for r in reader.records() {
            let r = r?;
            folds.push((
                (r[0].to_owned(), r[1].parse::<LearnerKind>()?, r[2].parse::<Method>()?),
                count(&r[3])?,
                count(&r[4])?,
                num(&r[6])? / 100.0,
                1.0,
            ));
        }
        aggregate_runs(folds)
    } else {
        Err(bad(format!("unrecognised header '{}'", header.join(","))))
    }
}
