//! CSV matrix files: one row per line, comma-separated decimal values.
//!
//! Values are written in Rust's shortest round-trip notation, so reading a
//! written matrix reproduces every entry bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{OnmfError, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixFormat {
    #[default]
    Csv,
    /// CSV whose first line is a header and is skipped on read.
    CsvWithHeader,
}

pub fn parse_csv<T: Scalar>(text: &str, format: MatrixFormat) -> Result<DenseMatrix<T>> {
    let skip = usize::from(format == MatrixFormat::CsvWithHeader);
    let mut cols = None;
    let mut rows = 0;
    let mut data = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(skip) {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut count = 0;
        for cell in line.split(',') {
            let cell = cell.trim();
            let v: T = cell.parse().map_err(|_| OnmfError::Parse {
                line: line_no,
                msg: format!("not a number: {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(OnmfError::Parse {
                    line: line_no,
                    msg: format!("non-finite value {cell:?}"),
                });
            }
            data.push(v);
            count += 1;
        }
        match cols {
            None => cols = Some(count),
            Some(c) if c != count => {
                return Err(OnmfError::Parse {
                    line: line_no,
                    msg: format!("ragged row: {count} values, expected {c}"),
                })
            }
            _ => {}
        }
        rows += 1;
    }
    DenseMatrix::new(rows, cols.unwrap_or(0), data)
}

pub fn to_csv<T: Scalar>(m: &DenseMatrix<T>) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        for (c, v) in m.row(r).iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            write!(out, "{v:?}").expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix<T: Scalar>(
    path: impl AsRef<Path>,
    format: MatrixFormat,
) -> Result<DenseMatrix<T>> {
    parse_csv(&fs::read_to_string(path)?, format)
}

pub fn write_matrix<T: Scalar>(m: &DenseMatrix<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_csv(m))?;
    Ok(())
}
