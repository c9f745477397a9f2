//! Plain-text field snapshots.
//!
//! Format: one ASCII header line
//!
//! ```text
//! gridflow-field n=<n> L=<L> t=<t>
//! ```
//!
//! followed by `n` lines of `n` comma-separated values. Line `j` holds the
//! values for y-index `j`, ordered by x-index. Values are written with 17
//! significant digits so that `f64` fields round-trip exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{CellField, GridSpec};
use crate::scalar::Scalar;

const MAGIC: &str = "gridflow-field";

/// Write a field (and the time it belongs to) to `w`.
pub fn write_field<T: Scalar, W: Write>(w: &mut W, field: &CellField<T>, t: T) -> Result<()> {
    let grid = field.grid();
    writeln!(w, "{MAGIC} n={} L={:.16e} t={:.16e}", grid.n(), grid.length(), t)?;
    let n = grid.n();
    for j in 0..n {
        for i in 0..n {
            if i > 0 {
                write!(w, ",")?;
            }
            write!(w, "{:.16e}", field[(i, j)])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Read a field written by [`write_field`]; returns the field and its time.
pub fn read_field<T: Scalar, R: BufRead>(r: &mut R) -> Result<(CellField<T>, T)> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let mut n: Option<usize> = None;
    let mut length: Option<f64> = None;
    let mut t: Option<f64> = None;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(Error::MalformedField(format!(
            "expected '{MAGIC}' header, got {:?}",
            header.trim()
        )));
    }
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::MalformedField(format!("bad header token {part:?}")))?;
        match key {
            "n" => n = value.parse().ok(),
            "L" => length = value.parse().ok(),
            "t" => t = value.parse().ok(),
            _ => return Err(Error::MalformedField(format!("unknown header key {key:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::MalformedField("missing n".into()))?;
    let length = length.ok_or_else(|| Error::MalformedField("missing L".into()))?;
    let t = t.ok_or_else(|| Error::MalformedField("missing t".into()))?;

    let grid = GridSpec::new(n, T::from_f64(length).unwrap())?;
    let mut field = CellField::zeros(grid);
    let mut line = String::new();
    for j in 0..n {
        line.clear();
        if r.read_line(&mut line)? == 0 {
            return Err(Error::MalformedField(format!("expected {n} data lines, got {j}")));
        }
        let mut count = 0;
        for (i, tok) in line.trim_end().split(',').enumerate() {
            if i >= n {
                return Err(Error::MalformedField(format!("line {j}: more than {n} values")));
            }
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::MalformedField(format!("line {j}: bad value {tok:?}")))?;
            field[(i, j)] = T::from_f64(v).unwrap();
            count += 1;
        }
        if count != n {
            return Err(Error::MalformedField(format!(
                "line {j}: expected {n} values, got {count}"
            )));
        }
    }
    Ok((field, T::from_f64(t).unwrap()))
}

pub fn save_field<T: Scalar>(path: &Path, field: &CellField<T>, t: T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field(&mut w, field, t)?;
    w.flush()?;
    Ok(())
}

pub fn load_field<T: Scalar>(path: &Path) -> Result<(CellField<T>, T)> {
    let mut r = BufReader::new(File::open(path)?);
    read_field(&mut r)
}
