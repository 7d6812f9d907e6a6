//! Text formats: the native `.poly` format, cdd-style `.ine` H-representations
//! and the `.plp` problem format.
//!
//! `.poly`: `#` starts a comment; a `vars x y ..` header; then one row
//! `a1 .. an c` per inequality `a.y <= c`.
//!
//! `.plp`: headers `vars`, `params` and `minimize c1 .. cn`, then rows
//! `a1 .. an d1 .. dp c` meaning `a.x + d.theta <= c`.

use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix, RatVector};
use crate::plp::PlpProblem;
use crate::polyhedron::{normalize_system, HSystem, Inequality};

/// A whitespace token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Non-empty lines with comments removed, as `(line number, tokens)`.
fn tokenized(text: &str, comment: char) -> Vec<(usize, Vec<Token<'_>>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split(comment).next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in line
                .char_indices()
                .chain(std::iter::once((line.len(), ' ')))
            {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &line[s..pos],
                            column: line[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some((i + 1, tokens))
        })
        .collect()
}

fn parse_rat(tok: &Token<'_>, line: usize) -> Result<Rat> {
    Rat::from_str(tok.text)
        .ok()
        .filter(|_| !tok.text.ends_with('/'))
        .ok_or_else(|| {
            Error::parse(
                line,
                tok.column,
                format!("`{}` is not a rational number", tok.text),
            )
        })
}

fn parse_row(tokens: &[Token<'_>], line: usize, width: usize) -> Result<RatVector> {
    if tokens.len() != width {
        return Err(Error::parse(
            line,
            tokens.first().map_or(1, |t| t.column),
            format!("expected {width} numbers, found {}", tokens.len()),
        ));
    }
    tokens.iter().map(|t| parse_rat(t, line)).collect()
}

fn parse_names(tokens: &[Token<'_>], line: usize) -> Result<Vec<String>> {
    let mut names: Vec<String> = Vec::with_capacity(tokens.len());
    for t in tokens {
        let valid = t
            .text
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && t.text.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::parse(
                line,
                t.column,
                format!("invalid variable name `{}`", t.text),
            ));
        }
        if names.iter().any(|n| n == t.text) {
            return Err(Error::parse(
                line,
                t.column,
                format!("duplicate variable `{}`", t.text),
            ));
        }
        names.push(t.text.to_string());
    }
    Ok(names)
}

pub fn parse_poly(text: &str) -> Result<HSystem> {
    let lines = tokenized(text, '#');
    let Some((first_line, header)) = lines.first() else {
        return Err(Error::parse(1, 1, "missing `vars` header"));
    };
    if header[0].text != "vars" {
        return Err(Error::parse(
            *first_line,
            header[0].column,
            "expected `vars` header",
        ));
    }
    let names = parse_names(&header[1..], *first_line)?;
    let n = names.len();
    let mut ineqs = Vec::with_capacity(lines.len() - 1);
    for (line, tokens) in &lines[1..] {
        let row = parse_row(tokens, *line, n + 1)?;
        ineqs.push(Inequality::new(row[..n].to_vec(), row[n].clone()));
    }
    normalize_system(&HSystem::new(names, ineqs)?)
}

fn join(values: &[Rat]) -> String {
    values
        .iter()
        .map(Rat::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn emit_poly(s: &HSystem) -> String {
    let mut out = String::new();
    out.push_str("vars");
    for name in &s.var_names {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for l in &s.ineqs {
        let mut row = l.coeffs.clone();
        row.push(l.rhs.clone());
        out.push_str(&join(&row));
        out.push('\n');
    }
    out
}

/// Reads an H-representation; each row `b a1 .. an` is `b + a.x >= 0`.
pub fn parse_ine(text: &str) -> Result<HSystem> {
    let lines = tokenized(text, '*');
    let mut iter = lines.iter();
    loop {
        let Some((line, tokens)) = iter.next() else {
            return Err(Error::parse(1, 1, "missing `begin`"));
        };
        match tokens[0].text {
            "begin" => break,
            "V-representation" => {
                return Err(Error::parse(
                    *line,
                    tokens[0].column,
                    "V-representations are not supported",
                ))
            }
            "linearity" => {
                return Err(Error::parse(
                    *line,
                    tokens[0].column,
                    "linearity lines are not supported",
                ))
            }
            _ => {}
        }
    }
    let Some((line, header)) = iter.next() else {
        return Err(Error::parse(1, 1, "missing size line after `begin`"));
    };
    if header.len() != 3 {
        return Err(Error::parse(*line, 1, "expected `m n+1 rational`"));
    }
    let size = |t: &Token<'_>| {
        t.text
            .parse::<usize>()
            .map_err(|_| Error::parse(*line, t.column, format!("`{}` is not a count", t.text)))
    };
    let m = size(&header[0])?;
    let width = size(&header[1])?;
    if width == 0 {
        return Err(Error::parse(
            *line,
            header[1].column,
            "column count must be at least 1",
        ));
    }
    match header[2].text {
        "rational" | "integer" => {}
        other => return Err(Error::UnsupportedNumberType(other.to_string())),
    }
    let n = width - 1;
    let mut ineqs = Vec::with_capacity(m);
    for _ in 0..m {
        let Some((line, tokens)) = iter.next() else {
            return Err(Error::parse(
                lines.last().map_or(1, |l| l.0),
                1,
                format!("expected {m} rows"),
            ));
        };
        let row = parse_row(tokens, *line, width)?;
        let coeffs = row[1..].iter().map(|x| -x.clone()).collect();
        ineqs.push(Inequality::new(coeffs, row[0].clone()));
    }
    match iter.next() {
        Some((_, tokens)) if tokens[0].text == "end" => {}
        Some((line, tokens)) => {
            return Err(Error::parse(*line, tokens[0].column, "expected `end`"))
        }
        None => {
            return Err(Error::parse(
                lines.last().map_or(1, |l| l.0),
                1,
                "missing `end`",
            ))
        }
    }
    normalize_system(&HSystem::new(HSystem::numbered_vars("x", n), ineqs)?)
}

pub fn emit_ine(s: &HSystem) -> String {
    let mut out = String::from("H-representation\nbegin\n");
    out.push_str(&format!("{} {} rational\n", s.len(), s.dim() + 1));
    for l in &s.ineqs {
        let mut row = vec![l.rhs.clone()];
        row.extend(l.coeffs.iter().map(|x| -x.clone()));
        out.push_str(&join(&row));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn parse_plp(text: &str) -> Result<PlpProblem> {
    let lines = tokenized(text, '#');
    let mut vars = None;
    let mut params = None;
    let mut objective = None;
    let mut rows = Vec::new();
    for (line, tokens) in &lines {
        match tokens[0].text {
            "vars" => vars = Some(parse_names(&tokens[1..], *line)?),
            "params" => params = Some(parse_names(&tokens[1..], *line)?),
            "minimize" => objective = Some((*line, &tokens[1..])),
            _ => rows.push((*line, tokens)),
        }
    }
    let vars = vars.ok_or_else(|| Error::parse(1, 1, "missing `vars` header"))?;
    let params = params.unwrap_or_default();
    let (obj_line, obj_tokens) =
        objective.ok_or_else(|| Error::parse(1, 1, "missing `minimize` line"))?;
    let c = parse_row(obj_tokens, obj_line, vars.len())?;
    let n = vars.len();
    let p = params.len();
    let mut a = Vec::with_capacity(rows.len());
    let mut b_theta = Vec::with_capacity(rows.len());
    let mut b = Vec::with_capacity(rows.len());
    for (line, tokens) in rows {
        let row = parse_row(tokens, line, n + p + 1)?;
        a.push(row[..n].to_vec());
        b_theta.push(row[n..n + p].iter().map(|x| -x.clone()).collect());
        b.push(row[n + p].clone());
    }
    let m = a.len();
    let a = RatMatrix::from_rows(a, n)?;
    let b_theta = if m == 0 {
        RatMatrix::zeros(0, p)
    } else {
        RatMatrix::from_rows(b_theta, p)?
    };
    PlpProblem::new(a, b_theta, b, c, vars, params)
}

/// Parses `a1 .. an c` into `a.y <= c`.
pub fn parse_inequality(text: &str, n: usize) -> Result<Inequality> {
    let lines = tokenized(text, '#');
    let [(line, tokens)] = lines.as_slice() else {
        return Err(Error::parse(1, 1, "expected a single line `a1 .. an c`"));
    };
    let row = parse_row(tokens, *line, n + 1)?;
    if row[..n].iter().all(Zero::is_zero) {
        return Err(Error::TrivialInequality);
    }
    Ok(Inequality::new(row[..n].to_vec(), row[n].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_examples() {
        let s = parse_poly("vars x\n1 1\n-1 0\n").unwrap();
        assert_eq!(s, HSystem::from_i64_rows(&["x"], &[(&[1], 1), (&[-1], 0)]));
        let s = parse_poly("# comment\nvars x y\n1 1 1  # trailing\n").unwrap();
        assert_eq!(s, HSystem::from_i64_rows(&["x", "y"], &[(&[1, 1], 1)]));
        let s = parse_poly("vars x\n1/2 1\n").unwrap();
        assert_eq!(s, HSystem::from_i64_rows(&["x"], &[(&[1], 2)]));
    }

    #[test]
    fn poly_errors() {
        assert!(matches!(parse_poly(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_poly("vars x\n1 2 3\n"),
            Err(Error::Parse {
                line: 2,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_poly("vars x\n1 abc\n"),
            Err(Error::Parse {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(parse_poly("vars x x\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_poly("vars x\n0 -1\n"),
            Err(Error::TriviallyInfeasible(_))
        ));
    }

    #[test]
    fn poly_round_trip() {
        let text = "vars a b\n2 4 6\n-1/3 0 1\n";
        let once = emit_poly(&parse_poly(text).unwrap());
        assert_eq!(once, "vars a b\n1 2 3\n-1 0 3\n");
        assert_eq!(emit_poly(&parse_poly(&once).unwrap()), once);
    }

    #[test]
    fn ine_examples() {
        let one = |row: &str| {
            parse_ine(&format!(
                "H-representation\nbegin\n1 2 rational\n{row}\nend\n"
            ))
            .unwrap()
        };
        assert_eq!(one("1 -1"), HSystem::from_i64_rows(&["x1"], &[(&[1], 1)]));
        assert_eq!(one("0 1"), HSystem::from_i64_rows(&["x1"], &[(&[-1], 0)]));
        let d2 = "* simplex\nH-representation\nbegin\n3 3 integer\n0 1 0\n0 0 1\n1 -1 -1\nend\n";
        assert_eq!(
            parse_ine(d2).unwrap(),
            HSystem::from_i64_rows(&["x1", "x2"], &[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 1], 1)])
        );
        let emitted = emit_ine(&parse_ine(d2).unwrap());
        assert_eq!(emit_ine(&parse_ine(&emitted).unwrap()), emitted);
    }

    #[test]
    fn ine_errors() {
        assert_eq!(
            parse_ine("begin\n1 2 real\n1 -1\nend\n"),
            Err(Error::UnsupportedNumberType("real".into()))
        );
        assert!(matches!(
            parse_ine("H-representation\nlinearity 1 1\nbegin\n1 2 rational\n1 -1\nend\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_ine("begin\n2 2 rational\n1 -1\nend\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_ine("begin\n1 2 rational\n1 -1\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn plp_format() {
        let text = "vars x\nparams t\nminimize 1\n-1 0 0\n1 -1 0\n0 1 1\n0 -1 0\n";
        let p = parse_plp(text).unwrap();
        assert_eq!(p.a, RatMatrix::from_i64_rows(&[&[-1], &[1], &[0], &[0]]));
        assert_eq!(
            p.b_theta,
            RatMatrix::from_i64_rows(&[&[0], &[1], &[-1], &[1]])
        );
        assert!(matches!(
            parse_plp("vars x\n1 1\n"),
            Err(Error::Parse { .. })
        ));
        assert_eq!(
            parse_plp("vars x\nminimize 0\n1 1\n"),
            Err(Error::ZeroObjective)
        );
    }

    #[test]
    fn inequality_argument() {
        assert_eq!(
            parse_inequality("1 -1 0", 2).unwrap(),
            Inequality::from_i64(&[1, -1], 0)
        );
        assert_eq!(parse_inequality("0 0 1", 2), Err(Error::TrivialInequality));
        assert!(parse_inequality("1 2", 2).is_err());
    }
}
