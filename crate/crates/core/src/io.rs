//! Plain-CSV matrix and vector files.
//!
//! A matrix file has one row per line with comma-separated entries and no
//! header; a vector file has one entry per line. Values are written in the
//! shortest decimal form that parses back to the same double.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(r)
}

fn parse_field(s: &str, line: u64) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("line {line}: non-finite value `{s}`")));
    }
    Ok(v)
}

pub fn parse_matrix<R: Read>(r: R) -> Result<DenseMatrix> {
    let mut rows = Vec::new();
    for rec in reader(r).records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let row = rec.iter().map(|f| parse_field(f, line)).collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix file has no rows".into()));
    }
    DenseMatrix::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_vector<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for rec in reader(r).records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        match rec.len() {
            0 => {}
            1 if rec[0].is_empty() => {}
            1 => out.push(parse_field(&rec[0], line)?),
            n => return Err(Error::Parse(format!("line {line}: expected one value, found {n}"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("vector file is empty".into()));
    }
    Ok(out)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    parse_matrix(File::open(path)?)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_vector(File::open(path)?)
}

pub fn write_matrix_to<W: Write>(w: W, a: &DenseMatrix) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for i in 0..a.rows() {
        wr.write_record(a.row(i).iter().map(|v| v.to_string()))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_vector_to<W: Write>(mut w: W, v: &[f64]) -> Result<()> {
    for x in v {
        writeln!(w, "{x}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_matrix(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    write_matrix_to(BufWriter::new(File::create(path)?), a)
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    write_vector_to(BufWriter::new(File::create(path)?), v)
}
