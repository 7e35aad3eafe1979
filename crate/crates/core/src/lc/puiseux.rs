use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;
use crate::Rational;

/// A finite sum `Σ c·ε^q` with rational exponents and coefficients.
///
/// Terms are kept sorted by strictly increasing exponent and carry no zero
/// coefficients; the empty list is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PuiseuxPoly {
    terms: Vec<(Rational, Rational)>,
}

impl PuiseuxPoly {
    pub fn zero() -> Self {
        PuiseuxPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        PuiseuxPoly::monomial(Rational::one(), Rational::zero())
    }

    pub fn monomial(coeff: Rational, exponent: Rational) -> Self {
        if coeff.is_zero() {
            return PuiseuxPoly::zero();
        }
        PuiseuxPoly {
            terms: vec![(exponent, coeff)],
        }
    }

    /// Collects `(exponent, coefficient)` pairs in any order, merging equal
    /// exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Rational)>>(terms: I) -> Self {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *merged.entry(e).or_insert_with(Rational::zero) += c;
        }
        PuiseuxPoly {
            terms: merged.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    /// Least exponent, `None` for zero.
    pub fn valuation(&self) -> Option<&Rational> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Coefficient of the least exponent.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn coeff_at(&self, exponent: &Rational) -> Rational {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exponent))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PuiseuxPoly::zero();
        }
        PuiseuxPoly {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiply by `ε^q`.
    pub fn shift(&self, q: &Rational) -> Self {
        PuiseuxPoly {
            terms: self.terms.iter().map(|(e, a)| (e + q, a.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        // merge of two sorted lists
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                std::cmp::Ordering::Less => {
                    out.push((ea.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((eb.clone(), cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((ea.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        PuiseuxPoly { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PuiseuxPoly::zero();
        }
        PuiseuxPoly::from_terms(self.terms.iter().flat_map(|(ea, ca)| {
            other
                .terms
                .iter()
                .map(move |(eb, cb)| (ea + eb, ca * cb))
        }))
    }

    /// Keep only the terms with exponent `<= order`.
    pub fn truncate(&self, order: &Rational) -> Self {
        PuiseuxPoly {
            terms: self
                .terms
                .iter()
                .take_while(|(e, _)| e <= order)
                .cloned()
                .collect(),
        }
    }

    /// Least common multiple of all exponent denominators.
    pub fn exponent_denominator_lcm(&self) -> BigInt {
        self.terms
            .iter()
            .fold(BigInt::one(), |acc, (e, _)| acc.lcm(e.denom()))
    }

    /// Write `self = ε^(shift/scale) · P(ε^(1/scale))` with `P(0) ≠ 0`.
    /// `scale` must clear every exponent denominator. Returns `(shift, P)`.
    pub(crate) fn to_dense(&self, scale: &BigInt) -> (BigInt, Poly) {
        let Some(v) = self.valuation() else {
            return (BigInt::zero(), Poly::zero());
        };
        let scale_q = Rational::from_integer(scale.clone());
        let shift = (v * &scale_q).to_integer();
        let mut coeffs: Vec<Rational> = Vec::new();
        for (e, c) in &self.terms {
            let k = (e * &scale_q).to_integer() - &shift;
            let k: usize = k.try_into().expect("exponent span too large");
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        (shift, Poly::from_coeffs(coeffs))
    }

    /// Inverse of [`PuiseuxPoly::to_dense`].
    pub(crate) fn from_dense(shift: &BigInt, p: &Poly, scale: &BigInt) -> Self {
        PuiseuxPoly {
            terms: p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| {
                    (
                        Rational::new(shift + BigInt::from(k), scale.clone()),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }
}

pub(crate) fn fmt_exponent(e: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "eps^({e})")
}

impl fmt::Display for PuiseuxPoly {
    /// Canonical text: `c` for the constant term, `c*eps^(p/q)` otherwise,
    /// joined by ` + ` / ` - `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*")?;
                fmt_exponent(e, f)?;
            }
        }
        Ok(())
    }
}
