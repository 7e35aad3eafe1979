use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::{parse, BinOp, Expr, ExprKind, ParseError};
use crate::lc::{LCNumber, LcError};
use crate::poly::Poly;
use crate::seq::{least_natural_root, SymbolicSequence};
use crate::Rational;

/// Largest integer power expanded for a base with more than one term.
const MAX_EXPANDED_POWER: i64 = 256;

pub fn parse_lc(src: &str) -> Result<LCNumber, ParseError> {
    to_lc(&parse(src)?)
}

pub fn parse_seq(src: &str) -> Result<SymbolicSequence, ParseError> {
    to_seq(&parse(src)?)
}

fn lc_error(e: &Expr, err: LcError) -> ParseError {
    ParseError::semantic(e.span, err.to_string())
}

/// Evaluate in the field. `n`, `ratfn` and `alt` are rejected.
pub fn to_lc(e: &Expr) -> Result<LCNumber, ParseError> {
    Ok(match &e.kind {
        ExprKind::Num(v) => LCNumber::from_rational(Rational::from_integer(v.clone())),
        ExprKind::Eps => LCNumber::eps(),
        ExprKind::N => return Err(ParseError::semantic(e.span, "'n' only appears in sequence expressions")),
        ExprKind::Ratfn(..) | ExprKind::Alt(..) => {
            return Err(ParseError::semantic(e.span, "sequence constructor in a field expression"))
        }
        ExprKind::Neg(x) => -to_lc(x)?,
        ExprKind::Bin(op, a, b) => {
            let (x, y) = (to_lc(a)?, to_lc(b)?);
            match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                BinOp::Mul => &x * &y,
                BinOp::Div => x.checked_div(&y).map_err(|err| lc_error(b, err))?,
            }
        }
        ExprKind::Pow(x, k) => {
            let base = to_lc(x)?;
            if base.is_monomial().is_none() && !base.is_zero() && k.abs() > Rational::from_integer(MAX_EXPANDED_POWER.into()) {
                return Err(ParseError::semantic(e.span, "exponent too large to expand exactly"));
            }
            base.pow(k).map_err(|err| lc_error(e, err))?
        }
    })
}

/// One residue class of a sequence value, kept as an unreduced fraction.
#[derive(Clone)]
struct Part {
    num: Poly,
    den: Poly,
}

#[derive(Clone)]
struct SeqVal {
    modulus: u64,
    parts: Vec<Part>,
}

impl SeqVal {
    fn uniform(num: Poly, den: Poly) -> Self {
        SeqVal {
            modulus: 1,
            parts: vec![Part { num, den }],
        }
    }

    fn part(&self, n: u64) -> &Part {
        &self.parts[(n % self.modulus) as usize]
    }

    fn zip(&self, other: &SeqVal, f: impl Fn(&Part, &Part) -> Part) -> SeqVal {
        let l = self.modulus.lcm(&other.modulus);
        SeqVal {
            modulus: l,
            parts: (0..l).map(|r| f(self.part(r), other.part(r))).collect(),
        }
    }

    fn map(&self, f: impl Fn(&Part) -> Part) -> SeqVal {
        SeqVal {
            modulus: self.modulus,
            parts: self.parts.iter().map(f).collect(),
        }
    }

    /// Least index in `dom` where the value is 0.
    fn least_zero(&self, dom: &Domain) -> Option<u64> {
        let k = self.modulus.lcm(&dom.modulus);
        (0..k)
            .filter(|rho| dom.contains(*rho))
            .filter_map(|rho| least_natural_root(&self.part(rho).num, k, rho))
            .min()
    }
}

/// The indices an expression is evaluated on: a union of residue classes.
#[derive(Clone)]
struct Domain {
    modulus: u64,
    residues: Vec<u64>,
}

impl Domain {
    fn all() -> Self {
        Domain {
            modulus: 1,
            residues: vec![0],
        }
    }

    fn contains(&self, n: u64) -> bool {
        self.residues.contains(&(n % self.modulus))
    }

    /// Restrict to `n ≡ r (mod m)`.
    fn restrict(&self, m: u64, r: u64) -> Domain {
        let k = self.modulus.lcm(&m);
        Domain {
            modulus: k,
            residues: (0..k).filter(|&rho| self.contains(rho) && rho % m == r).collect(),
        }
    }
}

fn add(a: &Part, b: &Part) -> Part {
    Part {
        num: &(&a.num * &b.den) + &(&b.num * &a.den),
        den: &a.den * &b.den,
    }
}

fn mul(a: &Part, b: &Part) -> Part {
    Part {
        num: &a.num * &b.num,
        den: &a.den * &b.den,
    }
}

fn div(a: &Part, b: &Part) -> Part {
    Part {
        num: &a.num * &b.den,
        den: &a.den * &b.num,
    }
}

/// Divide, refusing any index where the divisor vanishes.
fn checked_div(a: &SeqVal, b: &SeqVal, divisor: &Expr, dom: &Domain) -> Result<SeqVal, ParseError> {
    if let Some(n) = b.least_zero(dom) {
        return Err(ParseError::semantic(
            divisor.span,
            format!("denominator vanishes at n = {n}, so the sequence is undefined there"),
        ));
    }
    Ok(a.zip(b, div))
}

fn seq_val(e: &Expr, dom: &Domain) -> Result<SeqVal, ParseError> {
    Ok(match &e.kind {
        ExprKind::Num(v) => SeqVal::uniform(Poly::constant(Rational::from_integer(v.clone())), Poly::one()),
        ExprKind::N => SeqVal::uniform(Poly::x(), Poly::one()),
        ExprKind::Eps => return Err(ParseError::semantic(e.span, "'eps' only appears in field expressions")),
        ExprKind::Neg(x) => seq_val(x, dom)?.map(|p| Part {
            num: -&p.num,
            den: p.den.clone(),
        }),
        ExprKind::Bin(op, a, b) => {
            let (x, y) = (seq_val(a, dom)?, seq_val(b, dom)?);
            match op {
                BinOp::Add => x.zip(&y, add),
                BinOp::Sub => x.zip(&y, |p, q| {
                    add(
                        p,
                        &Part {
                            num: -&q.num,
                            den: q.den.clone(),
                        },
                    )
                }),
                BinOp::Mul => x.zip(&y, mul),
                BinOp::Div => checked_div(&x, &y, b, dom)?,
            }
        }
        ExprKind::Ratfn(p, q) => checked_div(&seq_val(p, dom)?, &seq_val(q, dom)?, q, dom)?,
        ExprKind::Pow(x, k) => {
            let base = seq_val(x, dom)?;
            let k = k
                .is_integer()
                .then(|| k.to_integer().to_i64())
                .flatten()
                .filter(|k| k.abs() <= MAX_EXPANDED_POWER)
                .ok_or_else(|| {
                    ParseError::semantic(e.span, "sequence exponents must be integers of moderate size")
                })?;
            let mut acc = SeqVal::uniform(Poly::one(), Poly::one());
            for _ in 0..k.unsigned_abs() {
                acc = acc.zip(&base, mul);
            }
            if k < 0 {
                checked_div(&SeqVal::uniform(Poly::one(), Poly::one()), &acc, x, dom)?
            } else {
                acc
            }
        }
        ExprKind::Alt(m, branches) => {
            let mut vals: Vec<Option<SeqVal>> = vec![None; *m as usize];
            for (r, b) in branches {
                vals[*r as usize] = Some(seq_val(b, &dom.restrict(*m, *r))?);
            }
            let vals: Vec<SeqVal> = vals.into_iter().map(|v| v.expect("parser checks residues")).collect();
            let l = vals.iter().fold(*m, |acc, v| acc.lcm(&v.modulus));
            SeqVal {
                modulus: l,
                parts: (0..l).map(|rho| vals[(rho % m) as usize].part(rho).clone()).collect(),
            }
        }
    })
}

/// Evaluate as a sequence. Every division is checked on its own residue
/// classes, so a pole that cancels later is still reported.
pub fn to_seq(e: &Expr) -> Result<SymbolicSequence, ParseError> {
    let v = seq_val(e, &Domain::all())?;
    let parts = v.parts.into_iter().map(|p| (p.num, p.den)).collect();
    SymbolicSequence::from_fractions(v.modulus, parts).map_err(|err| ParseError::semantic(e.span, err.to_string()))
}
