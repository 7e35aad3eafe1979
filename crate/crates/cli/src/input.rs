//! Reading command arguments: literal text, `@path` files, or `-` for stdin.

use std::io::Read;

use infinitesimal::expr::{parse_lc, parse_seq, ParseError};
use infinitesimal::hyperspace::FiniteMagma;
use infinitesimal::lc::LCNumber;
use infinitesimal::monoid::{Carrier, MonoidElement, MonoidInstance};
use infinitesimal::seq::SymbolicSequence;
use infinitesimal::{BigInt, BigUint, Rational};

/// A failure that maps to exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

pub fn read_arg(arg: &str) -> Result<String, UsageError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s.trim().to_string())
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| UsageError(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_failure(src: &str, e: ParseError) -> UsageError {
    UsageError(e.render(src))
}

pub fn lc(arg: &str) -> Result<LCNumber, UsageError> {
    let src = read_arg(arg)?;
    if src.starts_with('{') {
        return Ok(serde_json::from_str(&src)?);
    }
    parse_lc(&src).map_err(|e| parse_failure(&src, e))
}

pub fn seq(arg: &str) -> Result<SymbolicSequence, UsageError> {
    let src = read_arg(arg)?;
    if src.starts_with('{') {
        return Ok(serde_json::from_str(&src)?);
    }
    parse_seq(&src).map_err(|e| parse_failure(&src, e))
}

pub fn rational(text: &str) -> Result<Rational, UsageError> {
    infinitesimal::json::parse_rational(text.trim()).map_err(UsageError)
}

pub fn rational_list(text: &str) -> Result<Vec<Rational>, UsageError> {
    text.split(',').map(rational).collect()
}

/// An element of the instance's carrier: a natural number, a tuple such as
/// `(1, 0)`, a field expression, a sequence expression, or tagged JSON.
pub fn element(inst: &MonoidInstance, arg: &str) -> Result<MonoidElement, UsageError> {
    let src = read_arg(arg)?;
    let x = if src.starts_with('{') {
        serde_json::from_str(&src)?
    } else {
        match inst.carrier() {
            Carrier::NatAdd => MonoidElement::Nat(
                src.trim()
                    .parse::<BigUint>()
                    .map_err(|e| UsageError(format!("{src:?} is not a natural number: {e}")))?,
            ),
            Carrier::Lex { .. } => {
                let inner = src.trim().trim_start_matches('(').trim_end_matches(')');
                let coords = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|c| c.trim().parse::<BigInt>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| UsageError(format!("{src:?} is not an integer tuple: {e}")))?
                };
                MonoidElement::Lex(coords)
            }
            Carrier::LcAdd => MonoidElement::Lc(parse_lc(&src).map_err(|e| parse_failure(&src, e))?),
            Carrier::SeqAdd => MonoidElement::Seq(parse_seq(&src).map_err(|e| parse_failure(&src, e))?),
        }
    };
    if !inst.contains(&x) {
        return Err(UsageError(format!("{x} is not an element of {}", inst.name())));
    }
    Ok(x)
}

/// A magma table: JSON, rows separated by `;` with comma or space separated
/// entries, or rows of single digits.
pub fn magma(arg: &str) -> Result<FiniteMagma, UsageError> {
    let src = read_arg(arg)?;
    if src.starts_with('{') {
        return Ok(serde_json::from_str(&src)?);
    }
    let rows: Vec<Vec<usize>> = src
        .split(';')
        .map(|row| {
            let row = row.trim();
            if row.contains(',') || row.contains(' ') {
                row.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(UsageError::from))
                    .collect()
            } else {
                row.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| UsageError(format!("bad table entry {c:?}")))
                    })
                    .collect()
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(FiniteMagma::new(rows)?)
}
