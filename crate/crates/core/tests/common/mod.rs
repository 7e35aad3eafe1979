#![allow(dead_code)]

use infinitesimal::lc::{LCNumber, PuiseuxPoly};
use infinitesimal::poly::RationalExt;
use infinitesimal::Rational;
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_pair(n, d)
}

/// Up to three terms `c·ε^e` with small rational `c` and `e`.
pub fn raw_poly() -> impl Strategy<Value = PuiseuxPoly> {
    prop::collection::vec(((-6i64..=6, 1i64..=3), (-4i64..=4, 1i64..=2)), 1..=3)
        .prop_map(|ts| PuiseuxPoly::from_terms(ts.into_iter().map(|((cn, cd), (en, ed))| (q(en, ed), q(cn, cd)))))
}

pub fn nonzero_raw_poly() -> impl Strategy<Value = PuiseuxPoly> {
    raw_poly().prop_filter("nonzero", |p| !p.is_zero())
}

/// A quotient kept in raw, unreduced form next to its canonical value.
#[derive(Clone, Debug)]
pub struct Raw {
    pub num: PuiseuxPoly,
    pub den: PuiseuxPoly,
    pub value: LCNumber,
}

pub fn raw_lc() -> impl Strategy<Value = Raw> {
    (raw_poly(), nonzero_raw_poly()).prop_map(|(num, den)| Raw {
        value: LCNumber::from_fraction(num.clone(), den.clone()).unwrap(),
        num,
        den,
    })
}

pub fn lc() -> impl Strategy<Value = LCNumber> {
    raw_lc().prop_map(|r| r.value)
}

pub fn nonzero_lc() -> impl Strategy<Value = LCNumber> {
    lc().prop_filter("nonzero", |x| !x.is_zero())
}

/// Sign of `n/d` read from lowest-order coefficients of the raw parts.
pub fn raw_sign(num: &PuiseuxPoly, den: &PuiseuxPoly) -> i8 {
    let s = |p: &PuiseuxPoly| match p.leading_coeff() {
        None => 0,
        Some(c) if *c > Rational::from_integer_i64(0) => 1,
        Some(_) => -1,
    };
    s(num) * s(den)
}

/// Sign of `a - b` by cross-multiplying the raw quotients.
pub fn raw_cmp(a: &Raw, b: &Raw) -> std::cmp::Ordering {
    let diff = a.num.mul(&b.den).sub(&b.num.mul(&a.den));
    raw_sign(&diff, &a.den.mul(&b.den)).cmp(&0)
}
