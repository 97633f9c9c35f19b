//! CSV matrix files and the structured analysis document.
//!
//! Two formats are accepted, both UTF-8, comma separated, with `.` as the
//! decimal point:
//!
//! * `csv-full`: `n` lines of `n` values each.
//! * `csv-upper`: the strict upper triangle, `n - 1` lines where line `i`
//!   holds `n - 1 - i` values. `"2,5\n3\n"` is the 3x3 matrix with
//!   `a_01 = 2`, `a_02 = 5`, `a_12 = 3`.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::indicators::{IndicatorReport, TriadRecord};
use crate::matrix::PcMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixFormat {
    #[serde(rename = "csv-full")]
    CsvFull,
    #[serde(rename = "csv-upper")]
    CsvUpper,
}

impl MatrixFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CsvFull => "csv-full",
            Self::CsvUpper => "csv-upper",
        }
    }
}

impl fmt::Display for MatrixFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv-full" => Ok(Self::CsvFull),
            "csv-upper" => Ok(Self::CsvUpper),
            other => Err(format!("unknown format `{other}` (expected csv-full or csv-upper)")),
        }
    }
}

/// Positions are 1-based, as a text editor shows them.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid matrix at line {line}, column {column}: {source}")]
    Validation {
        line: usize,
        column: usize,
        #[source]
        source: CoreError,
    },

    #[error("invalid matrix: {0}")]
    Matrix(#[source] CoreError),
}

struct Cell {
    line: usize,
    column: usize,
    value: f64,
}

fn read_cells(text: &str) -> Result<Vec<Vec<Cell>>, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IoError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            column: 1,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let cells = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                field
                    .parse::<f64>()
                    .map(|value| Cell {
                        line,
                        column: c + 1,
                        value,
                    })
                    .map_err(|_| IoError::Parse {
                        line,
                        column: c + 1,
                        message: format!("`{field}` is not a number"),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(cells);
    }
    Ok(rows)
}

fn check_cell(cell: &Cell, i: usize, j: usize) -> Result<(), IoError> {
    if cell.value.is_finite() && cell.value > 0.0 {
        Ok(())
    } else {
        Err(IoError::Validation {
            line: cell.line,
            column: cell.column,
            source: CoreError::NonPositiveEntry {
                i,
                j,
                value: cell.value,
            },
        })
    }
}

fn parse_full(rows: Vec<Vec<Cell>>) -> Result<PcMatrix, IoError> {
    let n = rows.len();
    for row in &rows {
        if row.len() != n {
            return Err(IoError::Parse {
                line: row.first().map_or(0, |c| c.line),
                column: row.len().min(n) + 1,
                message: format!("expected {n} values, found {}", row.len()),
            });
        }
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            check_cell(cell, i, j)?;
        }
    }
    let grid = rows.iter().map(|r| r.iter().map(|c| c.value).collect()).collect();
    PcMatrix::new(grid).map_err(|e| locate(&rows, e))
}

fn locate(rows: &[Vec<Cell>], e: CoreError) -> IoError {
    let at = match e {
        CoreError::ReciprocityViolation { i, j, .. } => Some((i, j)),
        CoreError::BadDiagonal { i, .. } => Some((i, i)),
        CoreError::NonPositiveEntry { i, j, .. } => Some((i, j)),
        _ => None,
    };
    match at.and_then(|(i, j)| rows.get(i).and_then(|r| r.get(j))) {
        Some(cell) => IoError::Validation {
            line: cell.line,
            column: cell.column,
            source: e,
        },
        None => IoError::Matrix(e),
    }
}

fn parse_upper(rows: Vec<Vec<Cell>>) -> Result<PcMatrix, IoError> {
    let n = rows.len() + 1;
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    for (i, row) in rows.iter().enumerate() {
        let expected = n - 1 - i;
        if row.len() != expected {
            return Err(IoError::Parse {
                line: row.first().map_or(0, |c| c.line),
                column: row.len().min(expected) + 1,
                message: format!(
                    "row {} of the upper triangle needs {expected} values, found {}",
                    i + 1,
                    row.len()
                ),
            });
        }
        for (offset, cell) in row.iter().enumerate() {
            check_cell(cell, i, i + 1 + offset)?;
            values.push(cell.value);
        }
    }
    PcMatrix::from_upper_triangle(n, &values).map_err(IoError::Matrix)
}

pub fn parse_matrix_str(text: &str, format: MatrixFormat) -> Result<PcMatrix, IoError> {
    let rows = read_cells(text)?;
    if rows.is_empty() {
        return Err(IoError::Parse {
            line: 1,
            column: 1,
            message: "no matrix rows found".into(),
        });
    }
    match format {
        MatrixFormat::CsvFull => parse_full(rows),
        MatrixFormat::CsvUpper => parse_upper(rows),
    }
}

pub fn parse_matrix(path: impl AsRef<Path>, format: MatrixFormat) -> Result<PcMatrix, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix_str(&text, format)
}

/// Writes a matrix in either format. Values use the shortest decimal form
/// that parses back to the same `f64`.
pub fn write_matrix(m: &PcMatrix, format: MatrixFormat) -> String {
    let mut out = String::new();
    let n = m.n();
    for i in 0..n {
        let cols = match format {
            MatrixFormat::CsvFull => 0..n,
            MatrixFormat::CsvUpper if i + 1 < n => (i + 1)..n,
            MatrixFormat::CsvUpper => break,
        };
        let line: Vec<String> = cols.map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Parameters echoed into an [`AnalysisDocument`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisParameters {
    pub input: Option<String>,
    pub format: Option<MatrixFormat>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstTriad {
    pub indices: (usize, usize, usize),
    pub kii: f64,
}

/// Structured analysis report; the JSON form is the machine-readable contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub tool: String,
    pub version: String,
    pub parameters: AnalysisParameters,
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
    pub triads: Vec<TriadRecord>,
    pub matrix_kii: f64,
    pub worst_triad: WorstTriad,
    pub ci: f64,
    pub consistent: bool,
    pub verdict: String,
}

pub const TOOL_NAME: &str = "pcii";

impl AnalysisDocument {
    pub fn new(m: &PcMatrix, report: &IndicatorReport, parameters: AnalysisParameters) -> Self {
        let verdict = if report.consistent {
            format!("consistent at tolerance {}", report.tolerance)
        } else {
            format!("inconsistent at tolerance {}", report.tolerance)
        };
        Self {
            tool: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            parameters,
            n: m.n(),
            matrix: m.to_rows(),
            triads: report.per_triad.clone(),
            matrix_kii: report.matrix_kii,
            worst_triad: WorstTriad {
                indices: report.worst_triad,
                kii: report.matrix_kii,
            },
            ci: report.ci,
            consistent: report.consistent,
            verdict,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Aligned-column rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "{}", render_matrix(&self.matrix));
        let _ = writeln!(
            out,
            "{:>11}  {:>12} {:>12} {:>12}  {:>12} {:>12} {:>12}",
            "triad", "x", "y", "z", "kii", "distance", "rel_error"
        );
        for t in &self.triads {
            let (i, j, k) = t.indices;
            let _ = writeln!(
                out,
                "{:>11}  {:>12.6} {:>12.6} {:>12.6}  {:>12.6} {:>12.6} {:>12.6}",
                format!("({i},{j},{k})"),
                t.x,
                t.y,
                t.z,
                t.kii,
                t.distance,
                t.relative_error
            );
        }
        let (i, j, k) = self.worst_triad.indices;
        let _ = writeln!(out);
        let _ = writeln!(out, "matrix kii   {:.10}", self.matrix_kii);
        let _ = writeln!(out, "worst triad  ({i},{j},{k})");
        let _ = writeln!(out, "ci           {:.10}", self.ci);
        let _ = writeln!(out, "verdict      {}", self.verdict);
        out
    }
}

pub fn render_matrix(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|v| format!("{v:>12.6}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}
