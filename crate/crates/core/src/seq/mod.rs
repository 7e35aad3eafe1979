//! The sequence algebra `ℚ^ℕ` with pointwise operations, restricted to
//! sequences that are a rational function of `n` on each residue class
//! modulo some `m`.
//!
//! Inside this class the subsets of null, convergent and bounded sequences
//! are decidable by comparing degrees, which is what makes the chain
//! `{0} ⊊ null ⊊ convergent ⊊ bounded ⊊ all` checkable exactly.

mod json;
mod ratfn;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::Rational;

pub use ratfn::{least_natural_root, Limit, RatFn};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("sequence is undefined at n = {0}")]
    UndefinedAt(u64),
    #[error("modulus must be positive and match the number of branches")]
    InvalidModulus,
}

/// Where a sequence sits in `{0} ⊊ null ⊊ convergent ⊊ bounded ⊊ ℚ^ℕ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqClass {
    /// Converges to 0.
    Null,
    /// Converges to a nonzero limit.
    Convergent(Rational),
    BoundedDivergent,
    Unbounded,
}

impl SeqClass {
    pub fn is_null(&self) -> bool {
        matches!(self, SeqClass::Null)
    }

    pub fn is_convergent(&self) -> bool {
        matches!(self, SeqClass::Null | SeqClass::Convergent(_))
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, SeqClass::Unbounded)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SeqClass::Null => "null",
            SeqClass::Convergent(_) => "convergent",
            SeqClass::BoundedDivergent => "bounded-divergent",
            SeqClass::Unbounded => "unbounded",
        }
    }
}

impl fmt::Display for SeqClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqClass::Convergent(l) => write!(f, "convergent (limit {l})"),
            other => f.write_str(other.name()),
        }
    }
}

/// A total sequence `ℕ → ℚ` given by one reduced rational function of `n`
/// per residue class modulo `modulus`.
///
/// Invariants: no branch denominator vanishes at a natural number of its
/// class, and the modulus is minimal, so equal sequences are structurally
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicSequence {
    modulus: u64,
    branches: Vec<RatFn>,
}

impl SymbolicSequence {
    /// Build from unreduced `(numerator, denominator)` pairs, one per residue.
    /// Definedness is checked before any cancellation, so a removable pole
    /// such as `(n-3)/(n-3)` is still reported.
    pub fn from_fractions(modulus: u64, parts: Vec<(Poly, Poly)>) -> Result<Self, SeqError> {
        if modulus == 0 || parts.len() as u64 != modulus {
            return Err(SeqError::InvalidModulus);
        }
        let bad = parts
            .iter()
            .enumerate()
            .filter_map(|(r, (_, q))| least_natural_root(q, modulus, r as u64))
            .min();
        if let Some(n) = bad {
            return Err(SeqError::UndefinedAt(n));
        }
        let branches = parts.into_iter().map(|(p, q)| RatFn::new(p, q)).collect();
        Ok(SymbolicSequence::normalized(modulus, branches))
    }

    /// `p(n)/q(n)` on every index.
    pub fn ratfn(p: Poly, q: Poly) -> Result<Self, SeqError> {
        SymbolicSequence::from_fractions(1, vec![(p, q)])
    }

    /// The constant sequence `(x, x, x, …)`.
    pub fn embed(x: Rational) -> Self {
        SymbolicSequence {
            modulus: 1,
            branches: vec![RatFn::constant(x)],
        }
    }

    pub fn zero() -> Self {
        SymbolicSequence::embed(Rational::zero())
    }

    pub fn one() -> Self {
        SymbolicSequence::embed(Rational::one())
    }

    /// The sequence `n ↦ n`.
    pub fn index() -> Self {
        SymbolicSequence {
            modulus: 1,
            branches: vec![RatFn::new(Poly::x(), Poly::one())],
        }
    }

    /// Periodic constants: `values[n mod len]`.
    pub fn periodic(values: Vec<Rational>) -> Result<Self, SeqError> {
        if values.is_empty() {
            return Err(SeqError::InvalidModulus);
        }
        let m = values.len() as u64;
        Ok(SymbolicSequence::normalized(
            m,
            values.into_iter().map(RatFn::constant).collect(),
        ))
    }

    /// Takes `parts[r]` on the indices `n ≡ r (mod modulus)`.
    pub fn piecewise(modulus: u64, parts: &[SymbolicSequence]) -> Result<Self, SeqError> {
        if modulus == 0 || parts.len() as u64 != modulus {
            return Err(SeqError::InvalidModulus);
        }
        let l = parts.iter().fold(modulus, |acc, s| acc.lcm(&s.modulus));
        let branches = (0..l)
            .map(|rho| parts[(rho % modulus) as usize].branch_at(rho).clone())
            .collect();
        Ok(SymbolicSequence::normalized(l, branches))
    }

    fn normalized(modulus: u64, branches: Vec<RatFn>) -> Self {
        let mut d = 1;
        while d < modulus {
            if modulus.is_multiple_of(d) && (0..modulus).all(|r| branches[r as usize] == branches[(r % d) as usize]) {
                break;
            }
            d += 1;
        }
        let mut branches = branches;
        branches.truncate(d as usize);
        SymbolicSequence { modulus: d, branches }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn branches(&self) -> &[RatFn] {
        &self.branches
    }

    fn branch_at(&self, n: u64) -> &RatFn {
        &self.branches[(n % self.modulus) as usize]
    }

    pub fn eval(&self, n: u64) -> Rational {
        self.branch_at(n).eval(n)
    }

    pub fn is_zero(&self) -> bool {
        self.modulus == 1 && self.branches[0].is_zero()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&RatFn, &RatFn) -> RatFn) -> Self {
        let l = self.modulus.lcm(&other.modulus);
        let branches = (0..l)
            .map(|r| f(self.branch_at(r), other.branch_at(r)))
            .collect();
        SymbolicSequence::normalized(l, branches)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, RatFn::add)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, RatFn::mul)
    }

    pub fn neg(&self) -> Self {
        SymbolicSequence {
            modulus: self.modulus,
            branches: self.branches.iter().map(RatFn::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.mul(&SymbolicSequence::embed(c.clone()))
    }

    pub fn limits(&self) -> Vec<Limit> {
        self.branches.iter().map(RatFn::limit).collect()
    }

    pub fn classify(&self) -> SeqClass {
        let limits = self.limits();
        if limits.iter().any(|l| !l.is_finite()) {
            return SeqClass::Unbounded;
        }
        let finite: Vec<&Rational> = limits
            .iter()
            .map(|l| match l {
                Limit::Finite(v) => v,
                _ => unreachable!(),
            })
            .collect();
        if finite.iter().all(|v| v == &finite[0]) {
            if finite[0].is_zero() {
                SeqClass::Null
            } else {
                SeqClass::Convergent(finite[0].clone())
            }
        } else {
            SeqClass::BoundedDivergent
        }
    }

    /// `n ↦ 1/s(n)`, or the least index where `s` vanishes.
    pub fn pointwise_invert(&self) -> Result<Self, SeqError> {
        let m = self.modulus;
        let zero_at = self
            .branches
            .iter()
            .enumerate()
            .filter_map(|(r, f)| least_natural_root(f.num(), m, r as u64))
            .min();
        if let Some(n) = zero_at {
            return Err(SeqError::UndefinedAt(n));
        }
        let branches = self
            .branches
            .iter()
            .map(|f| RatFn::new(f.den().clone(), f.num().clone()))
            .collect();
        Ok(SymbolicSequence::normalized(m, branches))
    }

    /// Idempotent for pointwise multiplication: every value is 0 or 1.
    pub fn is_mul_idempotent(&self) -> bool {
        &self.mul(self) == self
    }

    /// Pointwise partial order: `Less` iff `self(n) ≤ other(n)` for all `n`
    /// and the sequences differ; `None` when they are incomparable.
    pub fn pointwise_cmp(&self, other: &Self) -> Option<Ordering> {
        let d = self.sub(other);
        if d.is_zero() {
            return Some(Ordering::Equal);
        }
        let (mut neg, mut pos) = (false, false);
        for (r, f) in d.branches.iter().enumerate() {
            let s = f.signs_on_class(d.modulus, r as u64);
            neg |= s.negative;
            pos |= s.positive;
        }
        match (neg, pos) {
            (true, true) => None,
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => Some(Ordering::Equal),
        }
    }

    /// The least common multiple of every coefficient denominator in a
    /// branch; scaling numerator and denominator by it gives integer
    /// coefficients for the text and JSON forms.
    pub(crate) fn integer_branch(f: &RatFn) -> (Vec<BigInt>, Vec<BigInt>) {
        let l = f.num().denominator_lcm().lcm(&f.den().denominator_lcm());
        (f.num().to_integer_coeffs(&l), f.den().to_integer_coeffs(&l))
    }
}

struct InVar<'a>(&'a Poly);

impl fmt::Display for InVar<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_in("n", f)
    }
}

fn fmt_branch(b: &RatFn, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (num, den) = SymbolicSequence::integer_branch(b);
    let num = Poly::from_coeffs(num.into_iter().map(Rational::from_integer).collect());
    let den = Poly::from_coeffs(den.into_iter().map(Rational::from_integer).collect());
    write!(f, "ratfn({}, {})", InVar(&num), InVar(&den))
}

impl fmt::Display for SymbolicSequence {
    /// `ratfn(p, q)` for a single class, `alt(m){0: ratfn(..); 1: ...}`
    /// otherwise, always with integer coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 1 {
            return fmt_branch(&self.branches[0], f);
        }
        write!(f, "alt({}){{", self.modulus)?;
        for (r, b) in self.branches.iter().enumerate() {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{r}: ")?;
            fmt_branch(b, f)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalExt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_pair(n, d)
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c.iter().copied())
    }

    fn recip_n1() -> SymbolicSequence {
        SymbolicSequence::ratfn(p(&[1]), p(&[1, 1])).unwrap()
    }

    #[test]
    fn embed_examples() {
        assert!(SymbolicSequence::embed(q(0, 1)).is_zero());
        assert_eq!(SymbolicSequence::embed(q(3, 1)).eval(7), q(3, 1));
        let s = SymbolicSequence::embed(q(2, 1)).add(&SymbolicSequence::embed(q(5, 1)));
        assert_eq!(s, SymbolicSequence::embed(q(7, 1)));
    }

    #[test]
    fn arithmetic_examples() {
        let s = recip_n1();
        assert!(s.add(&s.neg()).is_zero());
        assert_eq!(SymbolicSequence::embed(q(2, 1)).mul(&s).eval(3), q(1, 2));
        let a = SymbolicSequence::periodic(vec![q(0, 1), q(1, 1)]).unwrap();
        let b = SymbolicSequence::periodic(vec![q(1, 1), q(2, 1), q(5, 1)]).unwrap();
        assert_eq!(a.add(&b).modulus(), 6);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(SymbolicSequence::embed(q(5, 1)).eval(123), q(5, 1));
        assert_eq!(recip_n1().eval(9), q(1, 10));
        let alt = SymbolicSequence::periodic(vec![q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(alt.eval(4), q(0, 1));
        assert_eq!(alt.eval(5), q(1, 1));
    }

    #[test]
    fn modulus_is_minimized() {
        let s = SymbolicSequence::periodic(vec![q(1, 1), q(2, 1), q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(s.modulus(), 2);
        let c = SymbolicSequence::periodic(vec![q(4, 1); 3]).unwrap();
        assert_eq!(c, SymbolicSequence::embed(q(4, 1)));
    }

    #[test]
    fn definedness_is_checked_before_cancellation() {
        let r = SymbolicSequence::ratfn(p(&[-3, 1]), p(&[-3, 1]));
        assert_eq!(r, Err(SeqError::UndefinedAt(3)));
        // a pole outside the class is harmless
        let even_only = SymbolicSequence::from_fractions(2, vec![(p(&[1]), p(&[-1, 1])), (p(&[0]), p(&[1]))]);
        assert!(even_only.is_ok());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(recip_n1().classify(), SeqClass::Null);
        let alt = SymbolicSequence::periodic(vec![q(1, 1), q(-1, 1)]).unwrap();
        assert_eq!(alt.classify(), SeqClass::BoundedDivergent);
        assert_eq!(SymbolicSequence::index().classify(), SeqClass::Unbounded);
        assert_eq!(SymbolicSequence::one().classify(), SeqClass::Convergent(q(1, 1)));
        assert_eq!(SymbolicSequence::zero().classify(), SeqClass::Null);
    }

    #[test]
    fn inversion_examples() {
        let inv = recip_n1().pointwise_invert().unwrap();
        assert_eq!(inv, SymbolicSequence::ratfn(p(&[1, 1]), p(&[1])).unwrap());
        assert_eq!(inv.classify(), SeqClass::Unbounded);

        let spiky = SymbolicSequence::from_fractions(2, vec![(p(&[0]), p(&[1])), (p(&[2]), p(&[1, 1]))]).unwrap();
        assert_eq!(spiky.classify(), SeqClass::Null);
        assert!(!spiky.is_zero());
        assert_eq!(spiky.pointwise_invert(), Err(SeqError::UndefinedAt(0)));

        assert_eq!(SymbolicSequence::one().pointwise_invert(), Ok(SymbolicSequence::one()));
    }

    #[test]
    fn idempotents_are_indicators() {
        let even = SymbolicSequence::periodic(vec![q(1, 1), q(0, 1)]).unwrap();
        assert!(even.is_mul_idempotent());
        assert!(!SymbolicSequence::embed(q(2, 1)).is_mul_idempotent());
    }

    #[test]
    fn pointwise_order() {
        let n = SymbolicSequence::index();
        let one = SymbolicSequence::one();
        // n vs 1: n(0) = 0 < 1, n(2) = 2 > 1
        assert_eq!(n.pointwise_cmp(&one), None);
        assert_eq!(n.add(&one).pointwise_cmp(&n), Some(Ordering::Greater));
        assert_eq!(recip_n1().pointwise_cmp(&one), Some(Ordering::Less));
    }

    #[test]
    fn text_form() {
        assert_eq!(recip_n1().to_string(), "ratfn(1, n + 1)");
        let s = SymbolicSequence::from_fractions(2, vec![(p(&[0]), p(&[1])), (p(&[2]), p(&[1, 1]))]).unwrap();
        assert_eq!(s.to_string(), "alt(2){0: ratfn(0, 1); 1: ratfn(2, n + 1)}");
        let half = SymbolicSequence::ratfn(p(&[1]), p(&[0, 2])).err();
        assert_eq!(half, Some(SeqError::UndefinedAt(0)));
        let h = SymbolicSequence::ratfn(p(&[1]), p(&[2, 2])).unwrap();
        assert_eq!(h.to_string(), "ratfn(1, 2*n + 2)");
    }
}
