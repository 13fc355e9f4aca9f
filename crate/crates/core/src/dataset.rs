//! Numeric sample matrices with named columns, and their CSV forms.
//!
//! CSV layout: a header row of column names, then one numeric row per sample,
//! comma-separated UTF-8. Covariance matrices use the same layout with exactly as many
//! rows as columns.

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::LabeledCovariance;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<String>,
    /// n x d, one sample per row.
    rows: DMatrix<f64>,
}

impl Dataset {
    pub fn new(columns: Vec<String>, rows: DMatrix<f64>) -> Result<Self> {
        if rows.ncols() != columns.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns named, {} present",
                columns.len(),
                rows.ncols()
            )));
        }
        if rows.nrows() == 0 {
            return Err(Error::TooFewRows { needed: 1, got: 0 });
        }
        let mut seen = HashSet::new();
        for c in &columns {
            if c.is_empty() || !seen.insert(c.as_str()) {
                return Err(Error::InvalidInput(format!("bad or duplicate column `{c}`")));
            }
        }
        if rows.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite value".into()));
        }
        Ok(Self { columns, rows })
    }

    pub(crate) fn from_parts_unchecked(columns: Vec<String>, rows: DMatrix<f64>) -> Self {
        Self { columns, rows }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// New dataset made of the given rows, in the given order (repeats allowed).
    pub fn select_rows(&self, idx: &[usize]) -> Dataset {
        let d = self.n_cols();
        let rows = DMatrix::from_fn(idx.len(), d, |i, j| self.rows[(idx[i], j)]);
        Dataset::from_parts_unchecked(self.columns.clone(), rows)
    }

    /// Multiplies one column by `factor`.
    pub fn scale_column(&mut self, name: &str, factor: f64) -> Result<()> {
        let j = self.column_index(name)?;
        self.rows.column_mut(j).scale_mut(factor);
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let (header, values) = read_numeric_csv(reader)?;
        let n = values.len();
        if n == 0 {
            return Err(Error::TooFewRows { needed: 1, got: 0 });
        }
        let d = header.len();
        let flat: Vec<f64> = values.into_iter().flatten().collect();
        Dataset::new(header, DMatrix::from_row_slice(n, d, &flat))
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.columns)?;
        for i in 0..self.n_rows() {
            w.write_record(self.rows.row(i).iter().map(|v| format_value(*v)))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip decimal form.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v}")
    }
}

fn read_numeric_csv<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(Error::parse(1, "missing header row"));
    }
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != header.len() {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, cell)| match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::parse(
                    line,
                    format!("non-numeric value `{cell}` in column `{}`", header[j]),
                )),
            })
            .collect::<Result<Vec<f64>>>()?;
        values.push(row);
    }
    Ok((header, values))
}

/// Reads a square covariance CSV (header row = labels).
pub fn read_covariance_csv<R: Read>(reader: R) -> Result<LabeledCovariance> {
    let (header, values) = read_numeric_csv(reader)?;
    let d = header.len();
    if values.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "covariance CSV has {d} columns but {} rows",
            values.len()
        )));
    }
    let flat: Vec<f64> = values.into_iter().flatten().collect();
    LabeledCovariance::new(header, DMatrix::from_row_slice(d, d, &flat))
}

pub fn write_covariance_csv<W: Write>(cov: &LabeledCovariance, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(cov.labels())?;
    let m = cov.matrix();
    for i in 0..cov.dim() {
        w.write_record(m.row(i).iter().map(|v| format_value(*v)))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_writes() {
        let text = "X,Y\n0,0\n2,2.5\n";
        let d = Dataset::read_csv(text.as_bytes()).unwrap();
        assert_eq!(d.n_rows(), 2);
        assert_eq!(d.rows()[(1, 1)], 2.5);
        let mut out = Vec::new();
        d.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn non_numeric_cell_names_line() {
        let err = Dataset::read_csv("X,Y\n1,2\n3,abc\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("abc"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ragged_and_duplicate() {
        assert!(Dataset::read_csv("X,Y\n1\n".as_bytes()).is_err());
        assert!(Dataset::read_csv("X,X\n1,2\n".as_bytes()).is_err());
        assert!(Dataset::read_csv("X,Y\n".as_bytes()).is_err());
    }

    #[test]
    fn covariance_csv() {
        let cov = read_covariance_csv("A,B\n1,0.5\n0.5,2\n".as_bytes()).unwrap();
        assert_eq!(cov.get("B", "B").unwrap(), 2.0);
        assert!(read_covariance_csv("A,B\n1,0.5\n".as_bytes()).is_err());
        let mut out = Vec::new();
        write_covariance_csv(&cov, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "A,B\n1,0.5\n0.5,2\n");
    }
}
