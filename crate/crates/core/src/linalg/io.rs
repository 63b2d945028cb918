//! Matrix file formats.
//!
//! JSON: `{"rows": m, "cols": n, "re": [...], "im": [...]}`, row-major.
//!
//! CSV: a first line `rows,cols` (the dimensions), then one `re,im` line per
//! entry in row-major order. A literal `rows,cols` label line before the
//! dimensions is tolerated.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{check_finite, ComplexMatrix, TransferMatrix, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { rows, cols, re, im }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        let n = m.rows * m.cols;
        if m.re.len() != n || m.im.len() != n {
            return Err(Error::InvalidDimension(format!(
                "{}x{} matrix needs {n} entries, got re: {}, im: {}",
                m.rows,
                m.cols,
                m.re.len(),
                m.im.len()
            )));
        }
        let out = ComplexMatrix::from_fn(m.rows, m.cols, |i, j| C64::new(m.re[i * m.cols + j], m.im[i * m.cols + j]));
        check_finite(&out)?;
        Ok(out)
    }
}

impl From<TransferMatrix> for MatrixJson {
    fn from(t: TransferMatrix) -> Self {
        MatrixJson::from(t.matrix())
    }
}

impl TryFrom<MatrixJson> for TransferMatrix {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        TransferMatrix::new(ComplexMatrix::try_from(m)?)
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("matrix serializes")
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    ComplexMatrix::try_from(serde_json::from_str::<MatrixJson>(text)?)
}

pub fn matrix_to_csv(m: &ComplexMatrix) -> String {
    let mut out = format!("{},{}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            writeln!(out, "{},{}", z.re, z.im).expect("write to string");
        }
    }
    out
}

pub fn matrix_from_csv(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().map(str::trim).enumerate().filter(|(_, l)| !l.is_empty());
    let bad = |line: usize, msg: &str| Error::config(format!("csv line {}", line + 1), msg.to_string());

    let mut header = lines.next().ok_or_else(|| bad(0, "empty matrix file"))?;
    if header.1.eq_ignore_ascii_case("rows,cols") {
        header = lines.next().ok_or_else(|| bad(header.0, "missing dimensions"))?;
    }
    let (rows, cols) = parse_pair::<usize>(header.1).ok_or_else(|| bad(header.0, "expected `rows,cols`"))?;
    let mut entries = Vec::with_capacity(rows * cols);
    for (no, line) in lines {
        let (re, im) = parse_pair::<f64>(line).ok_or_else(|| bad(no, "expected `re,im`"))?;
        entries.push(C64::new(re, im));
    }
    if entries.len() != rows * cols {
        return Err(Error::InvalidDimension(format!(
            "{rows}x{cols} matrix needs {} entries, got {}",
            rows * cols,
            entries.len()
        )));
    }
    let out = ComplexMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j]);
    check_finite(&out)?;
    Ok(out)
}

fn parse_pair<T: std::str::FromStr>(line: &str) -> Option<(T, T)> {
    let mut it = line.split(',').map(str::trim);
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Reads a matrix file, choosing CSV for a `.csv` extension and JSON otherwise.
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => matrix_from_csv(&text),
        _ => matrix_from_json(&text),
    }
}
