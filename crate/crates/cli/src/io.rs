//! Reading and writing designs as CSV or JSON, in doubled or half units.

use std::path::Path;

use olhgen_core::metrics::CorrelationReport;
use olhgen_core::seeds::{seed_olh, Source};
use olhgen_core::{DesignMatrix, Recipe};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Integer levels, twice the true values.
    Doubled,
    /// True levels with one decimal digit, e.g. `-1.5`.
    Half,
}

/// A malformed input file, located by line and column (both 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

fn parse_level(field: &str, units: Units) -> Option<i64> {
    match units {
        Units::Doubled => field.parse().ok(),
        Units::Half => {
            let v: f64 = field.parse().ok()?;
            let doubled = v * 2.0;
            (doubled.is_finite() && doubled.fract() == 0.0).then_some(doubled as i64)
        }
    }
}

/// Rows of comma-separated levels; a first line made of labels is skipped.
pub fn parse_csv(text: &str, units: Units) -> Result<Vec<Vec<i64>>, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(1, |p| p.line() as usize);
            let message = match e.kind() {
                csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                    format!("expected {expected_len} fields, found {len}")
                }
                _ => e.to_string(),
            };
            ParseError {
                line,
                column: 1,
                message,
            }
        })?;
        let line = record.position().map_or(1, |p| p.line() as usize);
        let is_header = line == 1
            && record.iter().all(|f| f.trim().starts_with(|c: char| c.is_alphabetic()));
        if is_header || record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let mut column = 1;
        let mut row = Vec::with_capacity(record.len());
        for field in record.iter() {
            let value = field.trim();
            let at = column + field.chars().take_while(|c| c.is_whitespace()).count();
            row.push(parse_level(value, units).ok_or_else(|| ParseError {
                line,
                column: at,
                message: format!("'{value}' is not a valid {} level", units_name(units)),
            })?);
            column += field.chars().count() + 1;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "no design rows".into(),
        });
    }
    Ok(rows)
}

fn units_name(units: Units) -> &'static str {
    match units {
        Units::Doubled => "doubled (integer)",
        Units::Half => "half-unit",
    }
}

/// An output envelope, a catalog record, or a one-element array of either.
/// `doubled` takes precedence over `levels`.
pub fn parse_json(text: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let whole = |message: String| ParseError {
        line: 1,
        column: 1,
        message,
    };
    let record = match &value {
        Value::Array(items) if items.len() == 1 => &items[0],
        Value::Array(items) => {
            return Err(whole(format!("expected one design, found {}", items.len())));
        }
        other => other,
    };
    let (matrix, units) = if let Some(m) = record.get("doubled") {
        (m, Units::Doubled)
    } else if let Some(m) = record.get("levels") {
        (m, Units::Half)
    } else {
        return Err(whole("no \"doubled\" or \"levels\" matrix".into()));
    };
    let rows = matrix
        .as_array()
        .ok_or_else(|| whole("the design matrix must be an array of rows".into()))?;
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| whole(format!("row {} is not an array", r + 1)))?;
            row.iter()
                .enumerate()
                .map(|(c, v)| {
                    let level = match units {
                        Units::Doubled => v.as_i64(),
                        Units::Half => v
                            .as_f64()
                            .map(|x| x * 2.0)
                            .filter(|x| x.fract() == 0.0)
                            .map(|x| x as i64),
                    };
                    level.ok_or_else(|| {
                        whole(format!("row {}, entry {}: invalid level {v}", r + 1, c + 1))
                    })
                })
                .collect()
        })
        .collect()
}

/// Read a design; `.json` files and text starting with `{` or `[` are
/// parsed as JSON, everything else as CSV.
pub fn read_design(path: &Path, units: Units) -> Result<DesignMatrix, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let json = path.extension().is_some_and(|e| e == "json")
        || text.trim_start().starts_with(['{', '[']);
    let rows = if json {
        parse_json(&text)
    } else {
        parse_csv(&text, units)
    };
    let rows = rows.map_err(|e| format!("{}: {e}", path.display()))?;
    DesignMatrix::from_rows(rows).map_err(|e| format!("{}: {e}", path.display()))
}

fn half(v: i64) -> String {
    format!("{:.1}", v as f64 / 2.0)
}

pub fn to_csv(design: &DesignMatrix, units: Units, header: bool) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io_ok = "writing to memory cannot fail";
    if header {
        let labels = (1..=design.factors()).map(|j| format!("f{j}"));
        writer.write_record(labels).expect(io_ok);
    }
    for r in 0..design.runs() {
        let fields = design.row(r).iter().map(|&v| match units {
            Units::Doubled => v.to_string(),
            Units::Half => half(v),
        });
        writer.write_record(fields).expect(io_ok);
    }
    String::from_utf8(writer.into_inner().expect(io_ok)).expect("CSV of numbers is UTF-8")
}

/// Where a design came from, judged by the root of its recipe.
pub fn source_of(design: &DesignMatrix) -> Source {
    match design.recipe() {
        Some(Recipe::Search { .. }) => Source::Search,
        Some(Recipe::Seed { .. }) => seed_olh(design.runs())
            .ok()
            .filter(|e| e.design.entries() == design.entries())
            .map_or(Source::DerivedRecipe, |e| e.source),
        _ => Source::DerivedRecipe,
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    n: usize,
    m: usize,
    units: Units,
    source: &'static str,
    recipe_summary: Option<String>,
    rho_max: f64,
    rho_sq: f64,
    recipe: Option<&'a Recipe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    doubled: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    levels: Option<Vec<Vec<f64>>>,
}

pub fn to_json(design: &DesignMatrix, report: &CorrelationReport, units: Units) -> String {
    let rows = design.to_rows();
    let (doubled, levels) = match units {
        Units::Doubled => (Some(rows), None),
        Units::Half => (
            None,
            Some(rows.iter().map(|r| r.iter().map(|&v| v as f64 / 2.0).collect()).collect()),
        ),
    };
    let envelope = Envelope {
        n: design.runs(),
        m: design.factors(),
        units,
        source: source_of(design).as_str(),
        recipe_summary: design.recipe().map(Recipe::summary),
        rho_max: report.rho_max,
        rho_sq: report.rho_sq,
        recipe: design.recipe(),
        doubled,
        levels,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("envelope serializes");
    text.push('\n');
    text
}
