use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::poly::Poly;
use crate::Rational;

/// Reduced quotient of two polynomials in the index `n`: coprime, with a
/// monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

/// Limit of a rational function as `n → ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(Rational),
    PosInfinity,
    NegInfinity,
}

impl RatFn {
    /// Reduce `num/den`. The caller has already checked that `den` is
    /// nonzero on the indices that matter.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFn::constant(Rational::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = den.leading().unwrap().recip();
        RatFn {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFn {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, n: u64) -> Rational {
        self.num.eval_int(n) / self.den.eval_int(n)
    }

    pub fn limit(&self) -> Limit {
        let Some(dn) = self.num.degree() else {
            return Limit::Finite(Rational::zero());
        };
        let dd = self.den.degree().unwrap();
        let ratio = self.num.leading().unwrap() / self.den.leading().unwrap();
        match dn.cmp(&dd) {
            Ordering::Less => Limit::Finite(Rational::zero()),
            Ordering::Equal => Limit::Finite(ratio),
            Ordering::Greater if ratio.is_positive() => Limit::PosInfinity,
            Ordering::Greater => Limit::NegInfinity,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFn::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFn::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// Which signs the function takes on the naturals `n ≡ residue (mod m)`.
    pub(crate) fn signs_on_class(&self, modulus: u64, residue: u64) -> SignSet {
        let mut set = SignSet::default();
        if self.num.is_zero() {
            set.zero = true;
            return set;
        }
        let bound = [self.num.root_bound(), self.den.root_bound()]
            .into_iter()
            .flatten()
            .max()
            .unwrap_or_else(BigInt::zero);
        let bound = bound.to_u64().expect("root bound too large to scan");
        let mut n = residue;
        while n <= bound {
            match self.eval(n).numer().sign() {
                Sign::Minus => set.negative = true,
                Sign::NoSign => set.zero = true,
                Sign::Plus => set.positive = true,
            }
            n += modulus;
        }
        // past every real root of num and den the sign is fixed, and the
        // class has infinitely many members there
        match (self.num.eventual_sign(), self.den.eventual_sign()) {
            (a, b) if a == b => set.positive = true,
            _ => set.negative = true,
        }
        set
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct SignSet {
    pub negative: bool,
    pub zero: bool,
    pub positive: bool,
}

/// Least natural `n ≡ residue (mod modulus)` with `p(n) = 0`.
pub fn least_natural_root(p: &Poly, modulus: u64, residue: u64) -> Option<u64> {
    let Some(k) = p.order() else {
        return Some(residue);
    };
    if k > 0 && residue == 0 {
        return Some(0);
    }
    let reduced = p.unshift(k);
    if reduced.degree() == Some(0) {
        return None;
    }
    let ints = reduced.to_integer_coeffs(&reduced.denominator_lcm());
    let c0 = ints[0].abs();
    // every natural root divides the constant term and lies below the
    // Cauchy bound
    let bound = reduced.root_bound().unwrap().min(c0.clone());
    let bound = bound.to_u64().expect("root bound too large to scan");
    let mut n = if residue == 0 { modulus } else { residue };
    while n <= bound {
        let nb = BigInt::from(n);
        if (&c0 % &nb).is_zero() {
            let v = ints.iter().rev().fold(BigInt::zero(), |acc, c| acc * &nb + c);
            if v.is_zero() {
                return Some(n);
            }
        }
        n += modulus;
    }
    None
}

impl Limit {
    pub fn is_finite(&self) -> bool {
        matches!(self, Limit::Finite(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalExt;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c.iter().copied())
    }

    #[test]
    fn roots_in_residue_classes() {
        // (n-3)(n-8)
        let q = &p(&[-3, 1]) * &p(&[-8, 1]);
        assert_eq!(least_natural_root(&q, 1, 0), Some(3));
        assert_eq!(least_natural_root(&q, 2, 0), Some(8));
        assert_eq!(least_natural_root(&q, 2, 1), Some(3));
        assert_eq!(least_natural_root(&q, 5, 2), None);
        assert_eq!(least_natural_root(&p(&[0, 1]), 2, 0), Some(0));
        assert_eq!(least_natural_root(&p(&[0, 1]), 2, 1), None);
        assert_eq!(least_natural_root(&Poly::zero(), 3, 2), Some(2));
        assert_eq!(least_natural_root(&p(&[1, 1]), 1, 0), None);
        // 2n - 1 has the non-integer root 1/2
        assert_eq!(least_natural_root(&p(&[-1, 2]), 1, 0), None);
    }

    #[test]
    fn limits_by_degree() {
        let f = RatFn::new(p(&[1]), p(&[1, 1]));
        assert_eq!(f.limit(), Limit::Finite(Rational::zero()));
        let f = RatFn::new(p(&[0, 3]), p(&[1, 2]));
        assert_eq!(f.limit(), Limit::Finite(Rational::from_pair(3, 2)));
        let f = RatFn::new(p(&[0, 0, -1]), p(&[1, 1]));
        assert_eq!(f.limit(), Limit::NegInfinity);
    }

    #[test]
    fn reduction_is_canonical() {
        let a = RatFn::new(&p(&[1, 1]) * &p(&[2]), &p(&[1, 1]) * &p(&[3]));
        assert_eq!(a, RatFn::constant(Rational::from_pair(2, 3)));
    }

    #[test]
    fn sign_scan() {
        // n - 4 on all naturals: negative, zero and positive
        let f = RatFn::new(p(&[-4, 1]), p(&[1]));
        let s = f.signs_on_class(1, 0);
        assert!(s.negative && s.zero && s.positive);
        // on odd n never zero
        let s = f.signs_on_class(2, 1);
        assert!(s.negative && !s.zero && s.positive);
    }
}
