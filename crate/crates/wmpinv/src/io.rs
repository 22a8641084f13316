//! Matrix file formats.
//!
//! JSON is canonical: `{"rows": n, "cols": m, "data": [[re, im], ...]}` with
//! `data` row-major. CSV is a convenience importer: one row per line, cells
//! `a`, `a+bi` or `a-bi` with decimal literals and no whitespace. Values
//! survive a write/read cycle exactly (shortest round-trip float printing
//! on write, strict parsing on read).

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Json,
    Csv,
}

/// Format by file extension; `.csv` is CSV, everything else JSON.
pub fn format_for_path(path: &Path) -> MatrixFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => MatrixFormat::Csv,
        _ => MatrixFormat::Json,
    }
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    match format_for_path(path) {
        MatrixFormat::Json => parse_matrix_json(&text),
        MatrixFormat::Csv => parse_matrix_csv(&text),
    }
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    let text = match format_for_path(path) {
        MatrixFormat::Json => matrix_to_json(m),
        MatrixFormat::Csv => matrix_to_csv(m),
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn parse_matrix_json(text: &str) -> Result<CMatrix> {
    let m: CMatrix = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "matrix must have at least one row and one column".into(),
        });
    }
    if !m.all_finite() {
        return Err(Error::Parse {
            line: 1,
            msg: "matrix entries must be finite".into(),
        });
    }
    Ok(m)
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

pub fn parse_matrix_csv(text: &str) -> Result<CMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim_end_matches('\r');
        if trimmed.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in trimmed.split(',') {
            let z = parse_complex_cell(cell).map_err(|msg| Error::Parse {
                line: line_no,
                msg: format!("cell {cell:?}: {msg}"),
            })?;
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("cell {cell:?}: entries must be finite"),
                });
            }
            row.push(z);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!(
                        "row has {} cells, previous rows have {}",
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no rows found".into(),
        });
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(CMatrix::from_rows(r, c, rows.into_iter().flatten().collect()))
}

pub fn matrix_to_csv(m: &CMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            let z = m.get(i, j);
            if z.im == 0.0 {
                let _ = write!(out, "{}", z.re);
            } else if z.im > 0.0 {
                let _ = write!(out, "{}+{}i", z.re, z.im);
            } else {
                let _ = write!(out, "{}-{}i", z.re, -z.im);
            }
        }
        out.push('\n');
    }
    out
}

/// Parses `a`, `a+bi` or `a-bi`. The split point is the last sign that is
/// not leading and not part of an exponent, so `1e-3+2e+5i` parses.
fn parse_complex_cell(cell: &str) -> std::result::Result<Complex64, String> {
    if cell.is_empty() {
        return Err("empty cell".into());
    }
    if cell.contains(char::is_whitespace) {
        return Err("whitespace not allowed".into());
    }
    if let Some(body) = cell.strip_suffix('i') {
        let bytes = body.as_bytes();
        let mut split = None;
        for j in (1..bytes.len()).rev() {
            let b = bytes[j];
            if (b == b'+' || b == b'-') && bytes[j - 1] != b'e' && bytes[j - 1] != b'E' {
                split = Some(j);
                break;
            }
        }
        let j = split.ok_or_else(|| "complex cell must look like a+bi or a-bi".to_string())?;
        let re: f64 = body[..j]
            .parse()
            .map_err(|_| format!("bad real part {:?}", &body[..j]))?;
        let im: f64 = body[j..]
            .parse()
            .map_err(|_| format!("bad imaginary part {:?}", &body[j..]))?;
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = cell.parse().map_err(|_| format!("bad number {cell:?}"))?;
        Ok(Complex64::new(re, 0.0))
    }
}
