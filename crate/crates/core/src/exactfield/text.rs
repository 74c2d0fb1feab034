//! Line-oriented text formats shared by the command line tools.
//!
//! Matrix format: `p nrows ncols`, then `nrows` lines of `ncols` base-10
//! residues separated by single spaces, every line ending in `\n`. Lines
//! starting with `#` are ignored by the readers.

use super::matrix::FieldMatrix;
use super::scalar::check_modulus;
use crate::error::{Error, Result};

/// Content lines of a text file, skipping `#` comments and blank lines.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty())
}

pub(crate) fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| Error::Parse(format!("line {lineno}: `{tok}` is not a nonnegative integer")))
        })
        .collect()
}

/// Reads a header line of exactly `n` integers.
pub(crate) fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    n: usize,
    what: &str,
) -> Result<Vec<u64>> {
    let (lineno, line) = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("missing {what} header")))?;
    let nums = parse_numbers(line, lineno)?;
    if nums.len() != n {
        return Err(Error::Parse(format!(
            "line {lineno}: {what} header needs {n} fields, found {}",
            nums.len()
        )));
    }
    Ok(nums)
}

/// Reads `nrows` lines of `ncols` residues below `p`.
pub(crate) fn parse_rows<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    p: u32,
    nrows: usize,
    ncols: usize,
) -> Result<Vec<u32>> {
    let mut data = Vec::with_capacity(nrows * ncols);
    // rows of width zero are blank lines, which the readers skip
    if ncols == 0 {
        return Ok(data);
    }
    for r in 0..nrows {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {nrows} rows, found {r}")))?;
        let nums = parse_numbers(line, lineno)?;
        if nums.len() != ncols {
            return Err(Error::Parse(format!(
                "line {lineno}: expected {ncols} entries, found {}",
                nums.len()
            )));
        }
        if let Some(bad) = nums.iter().find(|&&x| x >= p as u64) {
            return Err(Error::Parse(format!("line {lineno}: entry {bad} is not a residue mod {p}")));
        }
        data.extend(nums.into_iter().map(|x| x as u32));
    }
    Ok(data)
}

pub(crate) fn ensure_consumed<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<()> {
    match lines.next() {
        None => Ok(()),
        Some((lineno, _)) => Err(Error::Parse(format!("line {lineno}: unexpected trailing data"))),
    }
}

pub(crate) fn write_rows(out: &mut String, m: &FieldMatrix) {
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

impl FieldMatrix {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.modulus(), self.nrows(), self.ncols());
        write_rows(&mut out, self);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let h = parse_header(&mut lines, 3, "matrix")?;
        let p = check_modulus(h[0])?;
        let (nrows, ncols) = (h[1] as usize, h[2] as usize);
        let data = parse_rows(&mut lines, p, nrows, ncols)?;
        ensure_consumed(&mut lines)?;
        FieldMatrix::from_vec(p, nrows, ncols, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_text_format() {
        let m = FieldMatrix::from_rows(7, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let text = m.to_text();
        assert_eq!(text, "7 2 3\n1 2 3\n4 5 6\n");
        assert_eq!(FieldMatrix::from_text(&text).unwrap(), m);
    }

    #[test]
    fn malformed_matrices() {
        assert!(FieldMatrix::from_text("7 2 2\n1 2\n").is_err());
        assert!(FieldMatrix::from_text("7 1 2\n1 9\n").is_err());
        assert!(FieldMatrix::from_text("8 1 1\n1\n").is_err());
        assert!(FieldMatrix::from_text("7 1 1\n1\n2\n").is_err());
        assert!(FieldMatrix::from_text("7 1 1\nx\n").is_err());
    }
}
