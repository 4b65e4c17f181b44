//! The sequence-database b-file format: one `n value` pair per line, starting at
//! `n = 0`, each line ending in `\n`.

use std::io::{self, BufRead, Write};

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Writes `values` as consecutive `n value\n` lines.
pub fn write_bfile<W: Write>(values: &[BigUint], mut out: W) -> io::Result<()> {
    for (n, v) in values.iter().enumerate() {
        writeln!(out, "{n} {v}")?;
    }
    out.flush()
}

/// Renders `values` in b-file form.
pub fn to_bfile_string(values: &[BigUint]) -> String {
    let mut buf = Vec::new();
    write_bfile(values, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Reads a b-file. Blank lines and lines starting with `#` are skipped; indices
/// must run 0, 1, 2, ... without gaps.
pub fn read_bfile<R: BufRead>(input: R) -> Result<Vec<BigUint>> {
    let mut values = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line_no = k + 1;
        let line = line.map_err(|e| Error::BFile { line: line_no, reason: e.to_string() })?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| Error::BFile { line: line_no, reason: reason.to_string() };
        let mut parts = t.split_whitespace();
        let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected two fields"));
        };
        let idx: usize = idx.parse().map_err(|_| bad("index is not a nonnegative integer"))?;
        if idx != values.len() {
            return Err(bad(&format!("expected index {}, found {idx}", values.len())));
        }
        let val: BigUint = val.parse().map_err(|_| bad("value is not a nonnegative integer"))?;
        values.push(val);
    }
    Ok(values)
}
