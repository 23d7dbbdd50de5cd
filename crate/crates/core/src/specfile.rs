//! Line-oriented algebra description files.
//!
//! ```text
//! # A3 with its diagram flip
//! rank 3
//! 2 -1 0
//! -1 2 -1
//! 0 -1 2
//! omega 3 2 1
//! weight 1 0 1
//! ```
//!
//! `#` starts a comment. After `rank n` come `n` rows of rationals, then the
//! directives in any order: `omega` (1-based images, identity if absent),
//! any number of `weight` lines, and `symmetrizer d1 ... dn`, which declares
//! that the rows are a symmetrizable matrix `A` and the algebra is `DA`.

use crate::automorphism::DiagramAutomorphism;
use crate::cartan::{scale_rows, CartanDatum};
use crate::error::{Error, Result};
use crate::rational::{parse_q, Q};

#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    pub cartan: CartanDatum,
    pub automorphism: DiagramAutomorphism,
    pub weights: Vec<Vec<Q>>,
    /// The matrix as written, before any declared symmetrizer is applied.
    pub rows: Vec<Vec<Q>>,
    pub symmetrizer: Option<Vec<Q>>,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_rationals(line: usize, fields: &[&str], n: usize, what: &str) -> Result<Vec<Q>> {
    if fields.len() != n {
        return Err(perr(
            line,
            format!("{what}: expected {n} entries, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| parse_q(f).ok_or_else(|| perr(line, format!("{what}: bad number `{f}`"))))
        .collect()
}

/// Attaches the line of the offending row (or of the `omega` line) to a
/// validation error.
fn locate(e: Error, row_lines: &[usize], omega_line: Option<usize>) -> Error {
    let row = |i: usize| row_lines.get(i.wrapping_sub(1)).copied().unwrap_or(1);
    let line = match &e {
        Error::NotSymmetric { i, .. }
        | Error::PositiveOffDiagonal { i, .. }
        | Error::AsymmetricZeroPattern { i, .. }
        | Error::NonIntegralQuotient { i, .. }
        | Error::NotSymmetrizable { i, .. } => row(*i),
        Error::NotPermutation { .. } | Error::MatrixNotPreserved { .. } => {
            omega_line.unwrap_or(row_lines.last().copied().unwrap_or(1))
        }
        _ => return e,
    };
    perr(line, e.to_string())
}

pub fn parse_spec(text: &str) -> Result<AlgebraSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, first) = lines
        .next()
        .ok_or_else(|| perr(1, "empty spec: expected `rank n`"))?;
    let fields: Vec<&str> = first.split_whitespace().collect();
    if fields.first() != Some(&"rank") || fields.len() != 2 {
        return Err(perr(line, "expected `rank n`"));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| perr(line, format!("bad rank `{}`", fields[1])))?;
    if n == 0 {
        return Err(perr(line, Error::EmptyIndexSet.to_string()));
    }

    let mut rows = Vec::with_capacity(n);
    let mut row_lines = Vec::with_capacity(n);
    for r in 0..n {
        let (line, text) = lines
            .next()
            .ok_or_else(|| perr(line + r + 1, format!("missing matrix row {}", r + 1)))?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        rows.push(parse_rationals(
            line,
            &fields,
            n,
            &format!("row {}", r + 1),
        )?);
        row_lines.push(line);
    }

    let mut omega: Option<(usize, Vec<usize>)> = None;
    let mut weights = Vec::new();
    let mut symmetrizer: Option<Vec<Q>> = None;
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        match fields[0] {
            "omega" => {
                if omega.is_some() {
                    return Err(perr(line, "duplicate `omega`"));
                }
                if fields.len() != n + 1 {
                    return Err(perr(line, format!("omega: expected {n} entries")));
                }
                let image = fields[1..]
                    .iter()
                    .map(|f| {
                        f.parse::<usize>()
                            .map_err(|_| perr(line, format!("omega: bad index `{f}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                omega = Some((line, image));
            }
            "weight" => weights.push(parse_rationals(line, &fields[1..], n, "weight")?),
            "symmetrizer" => {
                if symmetrizer.is_some() {
                    return Err(perr(line, "duplicate `symmetrizer`"));
                }
                let d = parse_rationals(line, &fields[1..], n, "symmetrizer")?;
                if d.iter().any(|x| *x <= Q::from_integer(0.into())) {
                    return Err(perr(line, "symmetrizer entries must be positive"));
                }
                symmetrizer = Some(d);
            }
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }

    let matrix = match &symmetrizer {
        Some(d) => scale_rows(&rows, d),
        None => rows.clone(),
    };
    let cartan = CartanDatum::validate(matrix).map_err(|e| locate(e, &row_lines, None))?;
    let automorphism = match omega {
        Some((line, image)) => DiagramAutomorphism::validate_one_based(&cartan, &image)
            .map_err(|e| locate(e, &row_lines, Some(line)))?,
        None => DiagramAutomorphism::identity(n),
    };
    Ok(AlgebraSpec {
        cartan,
        automorphism,
        weights,
        rows,
        symmetrizer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const A3: &str = "# A3\nrank 3\n2 -1 0\n-1 2 -1\n0 -1 2\nomega 3 2 1\nweight 1 0 1\n";

    #[test]
    fn parses_a3() {
        let s = parse_spec(A3).unwrap();
        assert_eq!(s.cartan.rank(), 3);
        assert_eq!(s.automorphism.image(), &[2, 1, 0]);
        assert_eq!(s.weights, vec![vec![q(1), q(0), q(1)]]);
    }

    #[test]
    fn symmetrizer_directive() {
        let s = parse_spec("rank 2\n2 -1\n-2 2\nomega 1 2\nsymmetrizer 2 1\n").unwrap();
        assert_eq!(s.cartan.entry(0, 1), &q(-2));
        assert_eq!(s.cartan.entry(0, 0), &q(4));
    }

    #[test]
    fn reports_lines() {
        let err = parse_spec("rank 2\n2 -1\n-2 2\nomega 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_spec("rank 2\n2 -1\n-1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_spec("rank 2\n4 -2\n-2 2\nomega 2 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = parse_spec("\n\nrank 2\n2 -1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
        let err = parse_spec("rank 1\n2\nfrobnicate\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn omega_defaults_to_identity() {
        let s = parse_spec("rank 1\n2\n").unwrap();
        assert!(s.automorphism.is_identity());
    }
}
