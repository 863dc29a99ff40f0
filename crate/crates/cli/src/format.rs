//! Plain-text instance files.
//!
//! ```text
//! # comments and blank lines are ignored anywhere
//! m n
//! c11 c12 ... c1n
//! ...
//! cm1 cm2 ... cmn
//! a1 ... am
//! b1 ... bn
//! ```
//!
//! Numbers are integers or `p/q` fractions.

use std::str::FromStr;

use transport_core::{Matrix, Rational, TransportInstance};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    /// 1-based line and column.
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Instance(#[from] transport_core::Error),
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

struct DataLine<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (k, ch) in line.char_indices().chain([(line.len(), ' ')]) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(k),
            (true, Some(s)) => {
                tokens.push(Token {
                    column: line[..s].chars().count() + 1,
                    text: &line[s..k],
                });
                start = None;
            }
            _ => {}
        }
    }
    tokens
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_number(line: usize, tok: &Token<'_>) -> Result<Rational, FormatError> {
    let valid_shape = tok.text.split('/').enumerate().all(|(k, part)| {
        let digits = if k == 0 {
            part.strip_prefix('-').unwrap_or(part)
        } else {
            part
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    }) && tok.text.matches('/').count() <= 1;
    if !valid_shape {
        return Err(syntax(
            line,
            tok.column,
            format!("malformed number `{}`", tok.text),
        ));
    }
    Rational::from_str(tok.text).map_err(|e| {
        syntax(
            line,
            tok.column,
            format!("malformed number `{}`: {e}", tok.text),
        )
    })
}

fn parse_count(line: usize, tok: &Token<'_>, what: &str) -> Result<usize, FormatError> {
    match tok.text.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(syntax(
            line,
            tok.column,
            format!("{what} must be a positive integer, got `{}`", tok.text),
        )),
    }
}

fn parse_row(
    line: Option<&DataLine<'_>>,
    expected: usize,
    what: &str,
    eof_line: usize,
) -> Result<Vec<Rational>, FormatError> {
    let line = line.ok_or_else(|| {
        syntax(
            eof_line,
            1,
            format!("unexpected end of input, expected {what}"),
        )
    })?;
    if line.tokens.len() != expected {
        let column = line
            .tokens
            .get(expected)
            .map_or_else(|| line.tokens.last().map_or(1, |t| t.column), |t| t.column);
        return Err(syntax(
            line.number,
            column,
            format!(
                "{what}: expected {expected} values, found {}",
                line.tokens.len()
            ),
        ));
    }
    line.tokens
        .iter()
        .map(|t| parse_number(line.number, t))
        .collect()
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<TransportInstance, FormatError> {
    let lines: Vec<DataLine<'_>> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(k, l)| DataLine {
            number: k + 1,
            tokens: tokenize(l),
        })
        .collect();
    let eof_line = text.lines().count() + 1;
    let mut it = lines.iter();

    let header = it
        .next()
        .ok_or_else(|| syntax(eof_line, 1, "empty input, expected header `m n`"))?;
    if header.tokens.len() != 2 {
        return Err(syntax(
            header.number,
            header.tokens.get(2).map_or(1, |t| t.column),
            format!("header must be `m n`, found {} fields", header.tokens.len()),
        ));
    }
    let m = parse_count(header.number, &header.tokens[0], "row count")?;
    let n = parse_count(header.number, &header.tokens[1], "column count")?;

    let mut cost = Vec::with_capacity(m);
    for i in 0..m {
        cost.push(parse_row(
            it.next(),
            n,
            &format!("cost row {}", i + 1),
            eof_line,
        )?);
    }
    let supply = parse_row(it.next(), m, "supply line", eof_line)?;
    let demand = parse_row(it.next(), n, "demand line", eof_line)?;
    if let Some(extra) = it.next() {
        return Err(syntax(
            extra.number,
            extra.tokens[0].column,
            "unexpected trailing content",
        ));
    }
    let cost = Matrix::from_rows(cost)?;
    Ok(TransportInstance::new(cost, supply, demand)?)
}

fn join(values: &[Rational]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Canonical form: single spaces, no comments, trailing newline.
pub fn serialize_instance(instance: &TransportInstance) -> String {
    let mut out = format!("{} {}\n", instance.rows(), instance.cols());
    for i in 0..instance.rows() {
        out.push_str(&join(instance.cost().row(i)));
        out.push('\n');
    }
    out.push_str(&join(instance.supply()));
    out.push('\n');
    out.push_str(&join(instance.demand()));
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use transport_core::{int, ratio};

    const EXAMPLE: &str = "\
# worked example
3 4
10 7 3 6
1 6 8 3
7 4 5 3
3 5 7
3 2 6 4
";

    #[test]
    fn parses_example() {
        let inst = parse_instance(EXAMPLE).unwrap();
        assert_eq!(*inst.eta(), int(15));
        assert_eq!(inst.cost()[(0, 0)], int(10));
    }

    #[test]
    fn parses_tiny() {
        let inst = parse_instance("1 1\n0\n5\n5").unwrap();
        assert_eq!(*inst.eta(), int(5));
    }

    #[test]
    fn parses_fractions_and_comments_anywhere() {
        let inst = parse_instance("  # c\n1 2\n# mid\n1/2   -3\n\n4/2\n1 1\n# end\n").unwrap();
        assert_eq!(inst.cost()[(0, 0)], ratio(1, 2));
        assert_eq!(inst.supply()[0], int(2));
    }

    #[test]
    fn imbalance_reports_totals() {
        let err = parse_instance("2 2\n1 2\n3 4\n1 1\n1 2").unwrap_err();
        assert_eq!(
            err.to_string(),
            "instance is unbalanced: total supply 2 != total demand 3"
        );
    }

    #[test]
    fn errors_name_line_and_column() {
        let err = parse_instance("2 2\n1 x\n3 4\n1 1\n1 1").unwrap_err();
        assert_eq!(err.to_string(), "line 2, column 3: malformed number `x`");
        let err = parse_instance("2 2\n1 2 9\n3 4\n1 1\n1 1").unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 2, column 5: cost row 1: expected 2 values, found 3"
        );
        let err = parse_instance("1 1\n0\n5\n").unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 4, column 1: unexpected end of input, expected demand line"
        );
        let err = parse_instance("0 1\n").unwrap_err();
        assert!(err.to_string().starts_with("line 1, column 1: row count"));
        let err = parse_instance("1 1\n1/0\n1\n1").unwrap_err();
        assert!(err
            .to_string()
            .starts_with("line 2, column 1: malformed number"));
        let err = parse_instance("1 1\n1\n1\n1\n7").unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 5, column 1: unexpected trailing content"
        );
        assert!(parse_instance("1 1\n1.5\n1\n1").is_err());
        assert!(parse_instance("1 1\n--1\n1\n1").is_err());
    }

    #[test]
    fn canonical_form() {
        let inst = parse_instance(EXAMPLE).unwrap();
        assert_eq!(
            serialize_instance(&inst),
            "3 4\n10 7 3 6\n1 6 8 3\n7 4 5 3\n3 5 7\n3 2 6 4\n"
        );
        let inst = parse_instance("1 2\n 2/4  -6/3 \n1\n1/3 2/3\n").unwrap();
        assert_eq!(serialize_instance(&inst), "1 2\n1/2 -2\n1\n1/3 2/3\n");
    }
}
