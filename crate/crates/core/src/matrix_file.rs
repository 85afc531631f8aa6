//! Plain-text matrix files.
//!
//! ```text
//! # comment lines start with '#'
//! ring: mod 101
//! 2
//! 1 2
//! 3 4
//! ```
//!
//! Line one names the ring (`int`, `rational` or `mod <p>`), line two the
//! dimension `n >= 1`, followed by `n` rows of `n` whitespace-separated
//! literals. Comment lines, blank lines and trailing whitespace are ignored.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::RingSpec;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parse a `ring:` header value such as `int`, `rational`, `mod 7`.
pub fn parse_ring(text: &str) -> Result<RingSpec> {
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.as_slice() {
        ["int"] => Ok(RingSpec::Integer),
        ["rational"] => Ok(RingSpec::Rational),
        ["mod", p] => {
            let p: u64 = p.parse().map_err(|_| Error::InvalidModulus {
                modulus: 0,
                reason: "modulus is not a 64-bit unsigned integer",
            })?;
            RingSpec::prime_field(p)
        }
        _ => Err(Error::Unsupported(
            "ring must be `int`, `rational` or `mod <p>`",
        )),
    }
}

/// Parse a matrix file. When `ring` is given it overrides the header, and
/// the literals are read in that ring instead.
pub fn parse(text: &str, ring: Option<RingSpec>) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, 1, "missing ring header"))?;
    let rest = header
        .strip_prefix("ring:")
        .ok_or_else(|| parse_error(hline, 1, "expected `ring: int|rational|mod <p>`"))?;
    let header_ring = parse_ring(rest).map_err(|e| parse_error(hline, 6, e.to_string()))?;
    let spec = ring.unwrap_or(header_ring);

    let (dline, dim) = lines
        .next()
        .ok_or_else(|| parse_error(hline + 1, 1, "missing dimension line"))?;
    let dim_text = dim.trim_start();
    let dim_col = dim.len() - dim_text.len() + 1;
    let n: usize = dim_text
        .parse()
        .map_err(|_| parse_error(dline, dim_col, format!("invalid dimension {dim_text:?}")))?;
    if n == 0 {
        return Err(parse_error(dline, dim_col, "dimension must be at least 1"));
    }

    let mut entries = Vec::with_capacity(n * n);
    let mut last_line = dline;
    for row in 0..n {
        let (lno, line) = lines.next().ok_or_else(|| {
            parse_error(last_line + 1, 1, format!("expected {n} rows, found {row}"))
        })?;
        last_line = lno;
        let mut count = 0;
        for (col, token) in tokens(line) {
            count += 1;
            if count > n {
                return Err(parse_error(lno, col, format!("expected {n} entries")));
            }
            let e = spec
                .parse_literal(token)
                .map_err(|e| parse_error(lno, col, e.to_string()))?;
            entries.push(e);
        }
        if count < n {
            return Err(parse_error(
                lno,
                line.len() + 1,
                format!("expected {n} entries, found {count}"),
            ));
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(parse_error(lno, 1, "unexpected content after the last row"));
    }
    Matrix::new(spec, n, n, entries)
}

/// Whitespace-separated tokens with their 1-based byte columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

/// Render a square matrix in the file format.
pub fn print(m: &Matrix) -> String {
    let mut out = format!("ring: {}\n{}\n", m.spec(), m.rows());
    for i in 1..=m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_trailing_space() {
        let text = "# diag\nring: int  \n3\n1 0 0\n# middle\n0 2 0   \n\n0 0 3\n";
        let m = parse(text, None).unwrap();
        let expected =
            Matrix::from_i64_rows(RingSpec::Integer, &[[1, 0, 0], [0, 2, 0], [0, 0, 3]]).unwrap();
        assert_eq!(m, expected);
        assert_eq!(parse(&print(&m), None).unwrap(), m);
    }

    #[test]
    fn rational_and_modular_literals() {
        let m = parse("ring: rational\n2\n1/2 -4/6\n3 0\n", None).unwrap();
        assert_eq!(print(&m), "ring: rational\n2\n1/2 -2/3\n3 0\n");
        let m = parse("ring: mod 7\n1\n-1\n", None).unwrap();
        assert_eq!(print(&m), "ring: mod 7\n1\n6\n");
    }

    #[test]
    fn ring_override() {
        let m = parse("ring: int\n1\n9\n", Some(RingSpec::prime_field(7).unwrap())).unwrap();
        assert_eq!(print(&m), "ring: mod 7\n1\n2\n");
    }

    fn err_at(text: &str) -> (usize, usize) {
        match parse(text, None) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_locations() {
        assert_eq!(err_at(""), (1, 1));
        assert_eq!(err_at("rings: int\n1\n1\n"), (1, 1));
        assert_eq!(err_at("ring: mod 8\n1\n1\n"), (1, 6));
        assert_eq!(err_at("ring: int\nx\n"), (2, 1));
        assert_eq!(err_at("ring: int\n0\n"), (2, 1));
        assert_eq!(err_at("ring: int\n2\n1 2\n"), (4, 1));
        assert_eq!(err_at("ring: int\n2\n1 2\n3 x\n"), (4, 3));
        assert_eq!(err_at("ring: int\n2\n1 2\n3\n"), (4, 2));
        assert_eq!(err_at("ring: int\n2\n1 2 3\n"), (3, 5));
        assert_eq!(err_at("ring: int\n1\n1\n2\n"), (4, 1));
        assert_eq!(err_at("ring: int\n1\n1/2\n"), (3, 1));
    }
}
