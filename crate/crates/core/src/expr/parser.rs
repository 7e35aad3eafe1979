use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{BinOp, Expr, ExprKind, ParseError, Span};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(ParseError::semantic(
                    Span::new(start, i + 1),
                    "decimal literals are not exact; write a fraction such as 1/10",
                ));
            }
            out.push(Token {
                tok: Tok::Int(src[start..i].parse().unwrap()),
                span: Span::new(start, i),
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                span: Span::new(start, i),
            });
        } else if "+-*/^(){},:;".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                span: Span::new(i, i + 1),
            });
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                position: i,
                expected: vec!["an operator, a number or a symbol".into()],
            });
        }
    }
    out.push(Token {
        tok: Tok::End,
        span: Span::new(src.len(), src.len()),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

/// Parse a field or sequence expression.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.expected(&["an operator", "end of input"]));
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expected(&self, what: &[&str]) -> ParseError {
        ParseError::Syntax {
            position: self.span().start,
            expected: what.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == &Tok::Sym(c)
    }

    fn eat(&mut self, c: char) -> Result<Span, ParseError> {
        if self.is_sym(c) {
            Ok(self.bump().span)
        } else {
            Err(self.expected(&[&format!("'{c}'")]))
        }
    }

    fn int(&mut self) -> Result<(BigInt, Span), ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => Ok((v, self.bump().span)),
            _ => Err(self.expected(&["an integer"])),
        }
    }

    fn small_int(&mut self) -> Result<(u64, Span), ParseError> {
        let (v, span) = self.int()?;
        v.to_u64()
            .map(|v| (v, span))
            .ok_or_else(|| ParseError::semantic(span, "integer too large here"))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_sym('-') {
            let start = self.bump().span;
            let inner = self.unary()?;
            let span = start.join(inner.span);
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.bump();
        let (e, espan) = self.exponent()?;
        let span = base.span.join(espan);
        Ok(Expr {
            kind: ExprKind::Pow(Box::new(base), e),
            span,
        })
    }

    /// A rational literal, or a semantic error spanning whatever else
    /// stands in exponent position.
    fn exponent(&mut self) -> Result<(Rational, Span), ParseError> {
        let save = self.pos;
        if let Some(lit) = self.literal_exponent()? {
            return Ok(lit);
        }
        self.pos = save;
        let start = self.span();
        let other = self.atom()?;
        Err(ParseError::semantic(
            start.join(other.span),
            "exponent must be a rational literal",
        ))
    }

    fn literal_exponent(&mut self) -> Result<Option<(Rational, Span)>, ParseError> {
        if let Tok::Int(_) = self.peek() {
            let (v, span) = self.int()?;
            return Ok(Some((Rational::from_integer(v), span)));
        }
        if !self.is_sym('(') {
            return Ok(None);
        }
        let open = self.bump().span;
        let negative = self.is_sym('-');
        if negative {
            self.bump();
        }
        let Tok::Int(_) = self.peek() else {
            return Ok(None);
        };
        let (mut num, _) = self.int()?;
        let mut den = BigInt::from(1);
        if self.is_sym('/') {
            self.bump();
            let Tok::Int(_) = self.peek() else {
                return Ok(None);
            };
            let (d, dspan) = self.int()?;
            if d.is_zero() {
                return Err(ParseError::semantic(dspan, "zero denominator in exponent"));
            }
            den = d;
        }
        if !self.is_sym(')') {
            return Ok(None);
        }
        let close = self.bump().span;
        if negative {
            num = -num;
        }
        Ok(Some((Rational::new(num, den), open.join(close))))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Num(v),
                    span: start,
                })
            }
            Tok::Sym('(') => {
                self.bump();
                let mut e = self.expr()?;
                let close = self.eat(')')?;
                e.span = start.join(close);
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "eps" => Ok(Expr {
                        kind: ExprKind::Eps,
                        span: start,
                    }),
                    "n" => Ok(Expr {
                        kind: ExprKind::N,
                        span: start,
                    }),
                    "ratfn" => {
                        self.eat('(')?;
                        let p = self.expr()?;
                        self.eat(',')?;
                        let q = self.expr()?;
                        let close = self.eat(')')?;
                        Ok(Expr {
                            kind: ExprKind::Ratfn(Box::new(p), Box::new(q)),
                            span: start.join(close),
                        })
                    }
                    "alt" => self.alt(start),
                    _ => Err(ParseError::semantic(start, format!("unknown symbol '{name}'"))),
                }
            }
            _ => Err(self.expected(&["a number", "'eps'", "'n'", "'('", "'ratfn'", "'alt'"])),
        }
    }

    fn alt(&mut self, start: Span) -> Result<Expr, ParseError> {
        self.eat('(')?;
        let (m, mspan) = self.small_int()?;
        self.eat(')')?;
        if m == 0 {
            return Err(ParseError::semantic(mspan, "modulus must be positive"));
        }
        self.eat('{')?;
        let mut branches: Vec<(u64, Expr)> = Vec::new();
        loop {
            let (r, rspan) = self.small_int()?;
            if r >= m {
                return Err(ParseError::semantic(rspan, format!("residue {r} is not below {m}")));
            }
            if branches.iter().any(|(s, _)| *s == r) {
                return Err(ParseError::semantic(rspan, format!("residue {r} appears twice")));
            }
            self.eat(':')?;
            branches.push((r, self.expr()?));
            if self.is_sym(';') {
                self.bump();
                continue;
            }
            let close = self.eat('}')?;
            let span = start.join(close);
            if branches.len() as u64 != m {
                return Err(ParseError::semantic(
                    span,
                    format!("alt({m}) needs one branch for each of the {m} residues"),
                ));
            }
            return Ok(Expr {
                kind: ExprKind::Alt(m, branches),
                span,
            });
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.join(rhs.span);
    Expr {
        kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
        span,
    }
}
