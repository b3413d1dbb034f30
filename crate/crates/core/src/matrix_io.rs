//! Plain-text generator matrix format.
//!
//! ```text
//! 2 3
//! 101
//! 011
//! ```
//!
//! Line 1 holds `k n` as ASCII decimals separated by a single space. Each of
//! the next `k` lines holds exactly `n` characters from `{0, 1}`. A final
//! newline is optional; nothing else is accepted.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, GeneratorMatrix};

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn parse_decimal(s: &str, line: usize, col0: usize) -> Result<usize> {
    if s.is_empty() {
        return Err(parse_err(line, col0, "expected a decimal number"));
    }
    if let Some(pos) = s.bytes().position(|b| !b.is_ascii_digit()) {
        return Err(parse_err(line, col0 + pos, "expected a decimal digit"));
    }
    s.parse()
        .map_err(|_| parse_err(line, col0, "number out of range"))
}

pub fn parse_matrix(text: &str) -> Result<GeneratorMatrix> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Err(parse_err(1, 1, "empty input"));
    }
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or_default();
    let (ks, ns) = header
        .split_once(' ')
        .ok_or_else(|| parse_err(1, header.len() + 1, "expected \"k n\""))?;
    let k = parse_decimal(ks, 1, 1)?;
    let n = parse_decimal(ns, 1, ks.len() + 2)?;
    if k == 0 || k > n {
        return Err(Error::Shape { k, n });
    }

    let mut rows = Vec::with_capacity(k);
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        if idx >= k {
            return Err(parse_err(lineno, 1, format!("unexpected line after {k} rows")));
        }
        let row = BitVec::parse(line)
            .map_err(|col| parse_err(lineno, col + 1, "expected '0' or '1'"))?;
        if row.len() != n {
            return Err(parse_err(
                lineno,
                row.len().min(n) + 1,
                format!("row has {} characters, expected {n}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != k {
        return Err(parse_err(
            rows.len() + 2,
            1,
            format!("expected {k} rows, found {}", rows.len()),
        ));
    }
    GeneratorMatrix::new(BitMatrix::from_rows(rows, n)?)
}

/// Renders `g` in the text format, with a trailing newline.
pub fn format_matrix(g: &GeneratorMatrix) -> String {
    let mut out = format!("{} {}\n", g.k(), g.n());
    for row in g.bits().rows() {
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_trailing_newline() {
        let a = parse_matrix("2 3\n101\n011\n").unwrap();
        let b = parse_matrix("2 3\n101\n011").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.k(), 2);
        assert_eq!(format_matrix(&a), "2 3\n101\n011\n");
    }

    fn pos(text: &str) -> (usize, usize) {
        match parse_matrix(text) {
            Err(Error::Parse { line, col, .. }) => (line, col),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_and_column() {
        assert_eq!(pos(""), (1, 1));
        assert_eq!(pos("2  3\n101\n011\n"), (1, 3));
        assert_eq!(pos("2 3\n1x1\n011\n"), (2, 2));
        assert_eq!(pos("2 3\n101\n01\n"), (3, 3));
        assert_eq!(pos("2 3\n101\n"), (3, 1));
        assert_eq!(pos("2 3\n101\n011\n\n"), (4, 1));
        assert_eq!(pos("2 3\r\n101\n011\n"), (1, 4));
        assert_eq!(pos("1 2\n10\r\n"), (2, 3));
    }

    #[test]
    fn rejects_rate_above_one() {
        assert!(matches!(
            parse_matrix("3 2\n10\n01\n11\n"),
            Err(Error::Shape { k: 3, n: 2 })
        ));
    }
}
