//! Matrix files: a plain text layout and a JSON object.
//!
//! Text: the first line is the dimension `d`, then `d` lines of `d`
//! whitespace-separated decimal integers. JSON: `{"dim": d, "rows": [[..], ..]}`
//! where entries are integers (any magnitude) or decimal strings.

use std::path::Path;

use epclass_core::IntMatrix;
use num_bigint::BigInt;
use serde_json::Value;

use crate::CliError;

pub fn read_matrix_file(path: &Path) -> Result<IntMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_matrix(&text)
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix, CliError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

fn parse_int(tok: &str, line: usize) -> Result<BigInt, CliError> {
    let t = tok.strip_prefix('+').unwrap_or(tok);
    t.parse::<BigInt>()
        .map_err(|_| parse_err(line, format!("`{tok}` is not an integer")))
}

pub fn parse_text(text: &str) -> Result<IntMatrix, CliError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (first, dim_line) = lines
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let dim: usize = dim_line
        .parse()
        .map_err(|_| parse_err(first, format!("expected a dimension, found `{dim_line}`")))?;
    if dim == 0 {
        return Err(parse_err(first, "dimension must be positive"));
    }
    let mut rows = Vec::with_capacity(dim);
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        if rows.len() == dim {
            return Err(parse_err(no, format!("unexpected extra row; dimension is {dim}")));
        }
        let row = line
            .split_whitespace()
            .map(|t| parse_int(t, no))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != dim {
            return Err(parse_err(
                no,
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != dim {
        let last = text.lines().count().max(1);
        return Err(parse_err(last, format!("expected {dim} rows, found {}", rows.len())));
    }
    IntMatrix::from_rows(rows).map_err(CliError::Core)
}

fn json_int(v: &Value, line: usize) -> Result<BigInt, CliError> {
    match v {
        // arbitrary_precision keeps the literal digits
        Value::Number(n) => parse_int(&n.to_string(), line),
        Value::String(s) => parse_int(s.trim(), line),
        other => Err(parse_err(line, format!("`{other}` is not an integer"))),
    }
}

pub fn parse_json(text: &str) -> Result<IntMatrix, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err(1, "missing or invalid \"dim\""))? as usize;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(1, "missing \"rows\" array"))?;
    if rows.len() != dim {
        return Err(parse_err(1, format!("\"dim\" is {dim} but there are {} rows", rows.len())));
    }
    // JSON rows have no line numbers of their own; report the 1-based row index
    let mut out = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        let r = r
            .as_array()
            .ok_or_else(|| parse_err(i + 1, format!("row {} is not an array", i + 1)))?;
        if r.len() != dim {
            return Err(parse_err(
                i + 1,
                format!("row {} has {} entries, expected {dim}", i + 1, r.len()),
            ));
        }
        out.push(r.iter().map(|x| json_int(x, i + 1)).collect::<Result<Vec<_>, _>>()?);
    }
    IntMatrix::from_rows(out).map_err(CliError::Core)
}

/// Text layout, one row per line.
pub fn to_text(m: &IntMatrix) -> String {
    let mut s = format!("{}\n", m.dim());
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(ToString::to_string).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_matrix() {
        let m = parse_matrix("3\n1 2 -1\n-1 0 -2\n0 1 -1").unwrap();
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[1, 2, -1], &[-1, 0, -2], &[0, 1, -1]]).unwrap());
        assert_eq!(parse_matrix(&to_text(&m)).unwrap(), m);
    }

    #[test]
    fn json_matrix() {
        let m = parse_matrix(r#"{"dim":2,"rows":[[0,-1],[1,0]]}"#).unwrap();
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]).unwrap());
    }

    #[test]
    fn big_entries() {
        let m = parse_matrix(r#"{"dim":1,"rows":[[123456789012345678901234567890]]}"#).unwrap();
        assert_eq!(m.get(0, 0).to_string(), "123456789012345678901234567890");
        let t = parse_matrix("1\n-98765432109876543210987654321").unwrap();
        assert_eq!(t.get(0, 0).to_string(), "-98765432109876543210987654321");
    }

    #[test]
    fn ragged_rows_report_line() {
        match parse_matrix("3\n1 2 3\n4 5\n7 8 9") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_matrix(r#"{"dim":2,"rows":[[0,-1],[1]]}"#) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    proptest::proptest! {
        #[test]
        fn text_and_json_round_trip(d in 1usize..=5, digits in proptest::collection::vec("-?[1-9][0-9]{0,30}", 25)) {
            let rows: Vec<Vec<BigInt>> = (0..d).map(|i| (0..d).map(|j| digits[i * 5 + j].parse().unwrap()).collect()).collect();
            let m = IntMatrix::from_rows(rows.clone()).unwrap();
            proptest::prop_assert_eq!(&parse_matrix(&to_text(&m)).unwrap(), &m);
            let json = serde_json::json!({
                "dim": d,
                "rows": rows.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            proptest::prop_assert_eq!(&parse_matrix(&json.to_string()).unwrap(), &m);
        }
    }

    #[test]
    fn bad_tokens() {
        assert!(matches!(parse_matrix("2\n1 x\n0 1"), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix("2\n1 0"), Err(CliError::Parse { .. })));
        assert!(matches!(parse_matrix(""), Err(CliError::Parse { .. })));
        assert!(matches!(parse_matrix("1.5\n"), Err(CliError::Parse { line: 1, .. })));
    }
}
