//! The small expression language of the command-line front-end.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" exponent)?
//! exponent := INT | "(" "-"? INT ("/" INT)? ")"
//! atom   := INT | "eps" | "n" | "(" expr ")"
//!         | "ratfn" "(" expr "," expr ")"
//!         | "alt" "(" INT ")" "{" INT ":" expr (";" INT ":" expr)* "}"
//! ```
//!
//! Exponents are rational literals only. `n`, `ratfn` and `alt` belong to
//! sequence expressions, `eps` to field expressions.

mod eval;
mod parser;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::Rational;

pub use eval::{parse_lc, parse_seq, to_lc, to_seq};
pub use parser::parse;

/// Byte offsets `[start, end)` into the source.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    /// Nonnegative integer literal.
    Num(BigInt),
    Eps,
    N,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
    Ratfn(Box<Expr>, Box<Expr>),
    /// `alt(m){r: e; …}`: one branch per residue modulo `m`.
    Alt(u64, Vec<(u64, Expr)>),
}

/// A syntax tree node. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Num(a), Num(b)) => a == b,
            (Eps, Eps) | (N, N) => true,
            (Neg(a), Neg(b)) => a == b,
            (Bin(o, a, b), Bin(p, c, d)) => o == p && a == c && b == d,
            (Pow(a, e), Pow(b, f)) => a == b && e == f,
            (Ratfn(a, b), Ratfn(c, d)) => a == c && b == d,
            (Alt(m, a), Alt(k, b)) => m == k && a == b,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Expr {
    /// A node with an empty span, for building trees in code.
    pub fn new(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: Span::default(),
        }
    }

    pub fn num(v: i64) -> Self {
        let e = Expr::new(ExprKind::Num(BigInt::from(v.abs())));
        if v < 0 {
            Expr::new(ExprKind::Neg(Box::new(e)))
        } else {
            e
        }
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::new(ExprKind::Bin(op, Box::new(a), Box::new(b)))
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Bin(op, ..) => op.precedence(),
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn fmt_exponent(e: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_integer() && !e.is_negative() {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

fn fmt_operand(e: &Expr, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(v) => write!(f, "{v}"),
            ExprKind::Eps => write!(f, "eps"),
            ExprKind::N => write!(f, "n"),
            ExprKind::Neg(x) => {
                write!(f, "-")?;
                fmt_operand(x, x.precedence() < 3, f)
            }
            ExprKind::Bin(op, a, b) => {
                let p = op.precedence();
                fmt_operand(a, a.precedence() < p, f)?;
                write!(f, " {} ", op.symbol())?;
                // operators are left-associative, so an equal-precedence
                // right operand needs parentheses
                fmt_operand(b, b.precedence() <= p, f)
            }
            ExprKind::Pow(x, e) => {
                fmt_operand(x, x.precedence() < 5, f)?;
                write!(f, "^")?;
                fmt_exponent(e, f)
            }
            ExprKind::Ratfn(p, q) => write!(f, "ratfn({p}, {q})"),
            ExprKind::Alt(m, branches) => {
                write!(f, "alt({m}){{")?;
                for (i, (r, e)) in branches.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{r}: {e}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {position}: expected {}", expected.join(" or "))]
    Syntax { position: usize, expected: Vec<String> },
    #[error("{message} at {}..{}", span.start, span.end)]
    Semantic { span: Span, message: String },
}

impl ParseError {
    fn semantic(span: Span, message: impl Into<String>) -> Self {
        ParseError::Semantic {
            span,
            message: message.into(),
        }
    }

    /// The message followed by the source line with a caret underline.
    pub fn render(&self, source: &str) -> String {
        let (start, end) = match self {
            ParseError::Syntax { position, .. } => (*position, *position + 1),
            ParseError::Semantic { span, .. } => (span.start, span.end.max(span.start + 1)),
        };
        let width = source.chars().count();
        let lead = source[..start.min(source.len())].chars().count();
        let marks = end.saturating_sub(start).min(width.saturating_sub(lead).max(1));
        format!("{self}\n  {source}\n  {}{}", " ".repeat(lead), "^".repeat(marks))
    }
}
