use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::puiseux::PuiseuxPoly;
use super::LcError;
use crate::Rational;

/// An exact element of the fraction field of Puiseux polynomials in one
/// positive infinitesimal `ε`.
///
/// The representation is canonical: numerator and denominator share no
/// common factor (after rescaling exponents to integer powers of
/// `ε^(1/L)`), and the denominator's least term is exactly `1·ε^0`. Two
/// values are equal iff their representations are structurally equal, so
/// `Eq` and `Hash` are derived.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LCNumber {
    num: PuiseuxPoly,
    den: PuiseuxPoly,
}

/// Order-of-magnitude class of a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Zero,
    Infinitesimal,
    /// Finite with a nonzero standard part.
    Appreciable,
    Infinite,
}

impl Classification {
    /// Membership in the monad of zero.
    pub fn in_monad(self) -> bool {
        matches!(self, Classification::Zero | Classification::Infinitesimal)
    }

    /// Membership in the finite elements.
    pub fn is_finite(self) -> bool {
        !matches!(self, Classification::Infinite)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Zero => "zero",
            Classification::Infinitesimal => "infinitesimal",
            Classification::Appreciable => "appreciable",
            Classification::Infinite => "infinite",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Valuation of a value: a rational exponent, or `+∞` for zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("+inf"),
        }
    }
}

impl LCNumber {
    pub fn zero() -> Self {
        LCNumber {
            num: PuiseuxPoly::zero(),
            den: PuiseuxPoly::one(),
        }
    }

    pub fn one() -> Self {
        LCNumber::from_rational(Rational::one())
    }

    /// The distinguished positive infinitesimal.
    pub fn eps() -> Self {
        LCNumber::monomial(Rational::one(), Rational::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        LCNumber::from_poly(PuiseuxPoly::monomial(c, Rational::zero()))
    }

    pub fn from_int(c: i64) -> Self {
        LCNumber::from_rational(Rational::from_integer(BigInt::from(c)))
    }

    /// `c·ε^q`.
    pub fn monomial(coeff: Rational, exponent: Rational) -> Self {
        LCNumber::from_poly(PuiseuxPoly::monomial(coeff, exponent))
    }

    /// A polynomial is already canonical over the unit denominator.
    pub fn from_poly(num: PuiseuxPoly) -> Self {
        LCNumber {
            num,
            den: PuiseuxPoly::one(),
        }
    }

    /// Build `num/den` in canonical form.
    pub fn from_fraction(num: PuiseuxPoly, den: PuiseuxPoly) -> Result<Self, LcError> {
        if den.is_zero() {
            return Err(LcError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(LCNumber::zero());
        }
        if den.terms().len() == 1 {
            let (e, c) = &den.terms()[0];
            return Ok(LCNumber::from_poly(num.scale(&c.recip()).shift(&-e)));
        }
        let scale = num
            .exponent_denominator_lcm()
            .lcm(&den.exponent_denominator_lcm());
        let (num_shift, num_dense) = num.to_dense(&scale);
        let (den_shift, den_dense) = den.to_dense(&scale);
        let g = num_dense.gcd(&den_dense);
        let (mut n, mut d) = if g.degree() == Some(0) {
            (num_dense, den_dense)
        } else {
            (num_dense.div_exact(&g), den_dense.div_exact(&g))
        };
        // both constant terms are nonzero, so the gcd has none of the
        // factor ε^(1/L) and the shifts survive reduction unchanged
        let c0 = d.coeff(0).recip();
        n = n.scale(&c0);
        d = d.scale(&c0);
        let shift = num_shift - den_shift;
        Ok(LCNumber {
            num: PuiseuxPoly::from_dense(&shift, &n, &scale),
            den: PuiseuxPoly::from_dense(&BigInt::zero(), &d, &scale),
        })
    }

    pub fn numerator(&self) -> &PuiseuxPoly {
        &self.num
    }

    pub fn denominator(&self) -> &PuiseuxPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value is a Puiseux polynomial (unit denominator).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// -1, 0 or 1. The canonical denominator is positive (its leading term is
    /// `1·ε^0`), so the sign is that of the numerator's lowest term.
    pub fn signum(&self) -> i8 {
        match self.num.leading_coeff() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, LcError> {
        LCNumber::from_fraction(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, LcError> {
        if rhs.is_zero() {
            return Err(LcError::DivisionByZero);
        }
        LCNumber::from_fraction(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LCNumber::zero();
        }
        LCNumber {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, k: i64) -> Result<Self, LcError> {
        if k < 0 {
            return self.recip()?.powi(-k);
        }
        let mut base = self.clone();
        let mut acc = LCNumber::one();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Rational power. Integer exponents work on every value; fractional
    /// exponents only on monomials `c·ε^q` whose coefficient has an exact
    /// rational root.
    pub fn pow(&self, exponent: &Rational) -> Result<Self, LcError> {
        if exponent.is_integer() {
            let k: i64 = exponent
                .to_integer()
                .try_into()
                .map_err(|_| LcError::ExponentTooLarge)?;
            return self.powi(k);
        }
        let (q, c) = self.is_monomial().ok_or(LcError::IrrationalPower)?;
        let root = rational_root(&c, exponent.denom()).ok_or(LcError::IrrationalPower)?;
        let k: i64 = exponent
            .numer()
            .try_into()
            .map_err(|_| LcError::ExponentTooLarge)?;
        let coeff = LCNumber::from_rational(root).powi(k)?;
        Ok(&coeff * &LCNumber::monomial(Rational::one(), q * exponent))
    }

    pub fn valuation(&self) -> Valuation {
        match self.num.valuation() {
            Some(v) => Valuation::Finite(v.clone()),
            None => Valuation::Infinity,
        }
    }

    pub fn classify(&self) -> Classification {
        match self.num.valuation() {
            None => Classification::Zero,
            Some(v) if v.is_positive() => Classification::Infinitesimal,
            Some(v) if v.is_zero() => Classification::Appreciable,
            Some(_) => Classification::Infinite,
        }
    }

    /// The unique rational within infinitesimal distance.
    ///
    /// Read off directly: for valuation 0 it is the numerator's constant
    /// coefficient over the denominator's, which is 1.
    pub fn standard_part(&self) -> Result<Rational, LcError> {
        match self.classify() {
            Classification::Zero | Classification::Infinitesimal => Ok(Rational::zero()),
            Classification::Appreciable => Ok(self.num.leading_coeff().unwrap().clone()),
            Classification::Infinite => Err(LcError::NotFinite),
        }
    }

    /// A Puiseux polynomial `p` with `valuation(self - p) > order`: the
    /// expansion of `num/den` with every term of exponent `<= order`.
    pub fn truncated_series(&self, order: &Rational) -> PuiseuxPoly {
        if self.is_polynomial() {
            return self.num.truncate(order);
        }
        let scale = self
            .num
            .exponent_denominator_lcm()
            .lcm(&self.den.exponent_denominator_lcm())
            .lcm(order.denom());
        let (shift, n) = self.num.to_dense(&scale);
        let (_, d) = self.den.to_dense(&scale);
        // last integer power of ε^(1/scale) to keep
        let last = (order * Rational::from_integer(scale.clone())).floor().to_integer() - &shift;
        if last.is_negative() {
            return PuiseuxPoly::zero();
        }
        let last: usize = last.try_into().expect("series order too large");
        // power-series long division by d, whose constant term is 1
        let mut c: Vec<Rational> = Vec::with_capacity(last + 1);
        for j in 0..=last {
            let mut v = n.coeff(j);
            for (i, di) in d.coeffs().iter().enumerate().skip(1).take(j) {
                if !di.is_zero() {
                    v -= di * &c[j - i];
                }
            }
            c.push(v);
        }
        PuiseuxPoly::from_dense(&shift, &crate::poly::Poly::from_coeffs(c), &scale)
    }

    /// `Some((q, c))` iff `self = c·ε^q` with `c ≠ 0`.
    pub fn is_monomial(&self) -> Option<(Rational, Rational)> {
        if self.den.is_one() && self.num.terms().len() == 1 {
            let (e, c) = &self.num.terms()[0];
            Some((e.clone(), c.clone()))
        } else {
            None
        }
    }

    /// The rational `c` with `self = c·other`, if the two nonzero values lie
    /// on one scalar line.
    pub fn line_ratio(&self, other: &Self) -> Result<Option<Rational>, LcError> {
        if self.is_zero() || other.is_zero() {
            return Err(LcError::ZeroArgument);
        }
        let q = self.checked_div(other)?;
        Ok(match q.is_monomial() {
            Some((e, c)) if e.is_zero() => Some(c),
            _ => None,
        })
    }

    /// Whether the scalar lines `ℚ·self` and `ℚ·other` coincide, which
    /// happens exactly when they meet outside zero.
    pub fn same_line(&self, other: &Self) -> Result<bool, LcError> {
        Ok(self.line_ratio(other)?.is_some())
    }
}

/// Exact `k`-th root of a rational, when one exists.
fn rational_root(c: &Rational, k: &BigInt) -> Option<Rational> {
    let k: u32 = k.try_into().ok()?;
    if c.is_negative() && k.is_even() {
        return None;
    }
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.nth_root(k);
        (r.pow(k) == *x).then_some(r)
    };
    Some(Rational::new(root(c.numer())?, root(c.denom())?))
}

impl Default for LCNumber {
    fn default() -> Self {
        LCNumber::zero()
    }
}

impl From<Rational> for LCNumber {
    fn from(c: Rational) -> Self {
        LCNumber::from_rational(c)
    }
}

impl From<i64> for LCNumber {
    fn from(c: i64) -> Self {
        LCNumber::from_int(c)
    }
}

impl Ord for LCNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

impl PartialOrd for LCNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &LCNumber {
    type Output = LCNumber;

    fn add(self, rhs: &LCNumber) -> LCNumber {
        if self.den.is_one() && rhs.den.is_one() {
            return LCNumber::from_poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            return LCNumber::from_fraction(self.num.add(&rhs.num), self.den.clone())
                .expect("nonzero denominator");
        }
        LCNumber::from_fraction(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
        .expect("nonzero denominator")
    }
}

impl Sub for &LCNumber {
    type Output = LCNumber;

    fn sub(self, rhs: &LCNumber) -> LCNumber {
        self + &(-rhs)
    }
}

impl Mul for &LCNumber {
    type Output = LCNumber;

    fn mul(self, rhs: &LCNumber) -> LCNumber {
        if self.den.is_one() && rhs.den.is_one() {
            return LCNumber::from_poly(self.num.mul(&rhs.num));
        }
        LCNumber::from_fraction(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
            .expect("nonzero denominator")
    }
}

impl Div for &LCNumber {
    type Output = LCNumber;

    /// Panics on division by zero; see [`LCNumber::checked_div`].
    fn div(self, rhs: &LCNumber) -> LCNumber {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &LCNumber {
    type Output = LCNumber;

    fn neg(self) -> LCNumber {
        LCNumber {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LCNumber {
            type Output = LCNumber;
            fn $m(self, rhs: LCNumber) -> LCNumber {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for LCNumber {
    type Output = LCNumber;

    fn neg(self) -> LCNumber {
        -&self
    }
}

impl fmt::Display for LCNumber {
    /// `num` alone over a unit denominator, `(num)/(den)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
