use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::{MonoidElement, MonoidError};
use crate::lc::{LCNumber, Valuation};
use crate::poly::RationalExt;
use crate::seq::SymbolicSequence;
use crate::Rational;

/// The registered carriers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Carrier {
    /// `(ℕ, +, ≤)`.
    NatAdd,
    /// `(ℤ^k, +)` under the lexicographic order.
    Lex { arity: usize },
    /// The additive group of the non-Archimedean field.
    LcAdd,
    /// The additive group of the sequence algebra under the pointwise
    /// (partial) order.
    SeqAdd,
}

/// A registered ordered monoid `(E, +, ≤)` together with the exactness
/// oracles its carrier supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoidInstance {
    name: String,
    carrier: Carrier,
}

/// A statement about an instance that is either proved, refuted with a
/// reason, or left open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fact {
    Holds(String),
    Fails(String),
    Unknown,
}

/// How the cyclic sub-semigroups generated by two elements meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CyclicIntersection {
    /// Only the neutral element is shared.
    Trivial { reason: String },
    /// `common = n_a·a = n_b·b` with `common` not neutral.
    Shared {
        common: MonoidElement,
        n_a: BigInt,
        n_b: BigInt,
    },
}

pub const REGISTERED: [&str; 5] = ["nat-add", "lex-z2", "lex-z3", "lc-add", "seq-add-pointwise"];

fn lead_index(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|c| !c.is_zero())
}

fn valuation_text(v: &Valuation) -> String {
    v.to_string()
}

impl MonoidInstance {
    pub fn nat_add() -> Self {
        MonoidInstance {
            name: "nat-add".into(),
            carrier: Carrier::NatAdd,
        }
    }

    pub fn lex(arity: usize) -> Self {
        MonoidInstance {
            name: format!("lex-z{arity}"),
            carrier: Carrier::Lex { arity },
        }
    }

    pub fn lc_add() -> Self {
        MonoidInstance {
            name: "lc-add".into(),
            carrier: Carrier::LcAdd,
        }
    }

    pub fn seq_add() -> Self {
        MonoidInstance {
            name: "seq-add-pointwise".into(),
            carrier: Carrier::SeqAdd,
        }
    }

    /// Look an instance up by its registry name. `lex-zK` works for any `K`.
    pub fn by_name(name: &str) -> Result<Self, MonoidError> {
        match name {
            "nat-add" => Ok(MonoidInstance::nat_add()),
            "lc-add" => Ok(MonoidInstance::lc_add()),
            "seq-add-pointwise" => Ok(MonoidInstance::seq_add()),
            _ => name
                .strip_prefix("lex-z")
                .and_then(|k| k.parse().ok())
                .map(MonoidInstance::lex)
                .ok_or_else(|| MonoidError::UnknownInstance(name.to_string())),
        }
    }

    pub fn registry() -> Vec<MonoidInstance> {
        REGISTERED
            .iter()
            .map(|n| MonoidInstance::by_name(n).unwrap())
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn contains(&self, x: &MonoidElement) -> bool {
        matches!(
            (&self.carrier, x),
            (Carrier::NatAdd, MonoidElement::Nat(_))
                | (Carrier::LcAdd, MonoidElement::Lc(_))
                | (Carrier::SeqAdd, MonoidElement::Seq(_))
        ) || matches!((&self.carrier, x), (Carrier::Lex { arity }, MonoidElement::Lex(v)) if v.len() == *arity)
    }

    pub(crate) fn check(&self, x: &MonoidElement) -> Result<(), MonoidError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(MonoidError::ForeignElement {
                instance: self.name.clone(),
                element: x.to_string(),
            })
        }
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self.carrier, Carrier::SeqAdd)
    }

    /// Every element has an additive inverse.
    pub fn is_group(&self) -> bool {
        !matches!(self.carrier, Carrier::NatAdd)
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.carrier, Carrier::Lex { arity: 0 })
    }

    pub fn neutral(&self) -> MonoidElement {
        match &self.carrier {
            Carrier::NatAdd => MonoidElement::Nat(BigUint::zero()),
            Carrier::Lex { arity } => MonoidElement::Lex(vec![BigInt::zero(); *arity]),
            Carrier::LcAdd => MonoidElement::Lc(LCNumber::zero()),
            Carrier::SeqAdd => MonoidElement::Seq(SymbolicSequence::zero()),
        }
    }

    pub fn is_neutral(&self, x: &MonoidElement) -> bool {
        *x == self.neutral()
    }

    pub fn op(&self, a: &MonoidElement, b: &MonoidElement) -> Result<MonoidElement, MonoidError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (MonoidElement::Nat(x), MonoidElement::Nat(y)) => MonoidElement::Nat(x + y),
            (MonoidElement::Lex(x), MonoidElement::Lex(y)) => {
                MonoidElement::Lex(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (MonoidElement::Lc(x), MonoidElement::Lc(y)) => MonoidElement::Lc(x + y),
            (MonoidElement::Seq(x), MonoidElement::Seq(y)) => MonoidElement::Seq(x.add(y)),
            _ => unreachable!("checked above"),
        })
    }

    pub fn negate(&self, x: &MonoidElement) -> Result<Option<MonoidElement>, MonoidError> {
        self.check(x)?;
        Ok(match x {
            MonoidElement::Nat(v) => v.is_zero().then(|| x.clone()),
            MonoidElement::Lex(v) => Some(MonoidElement::Lex(v.iter().map(|c| -c).collect())),
            MonoidElement::Lc(v) => Some(MonoidElement::Lc(-v)),
            MonoidElement::Seq(v) => Some(MonoidElement::Seq(v.neg())),
        })
    }

    /// `None` when the elements are incomparable (partial orders only).
    pub fn compare(&self, a: &MonoidElement, b: &MonoidElement) -> Result<Option<Ordering>, MonoidError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (MonoidElement::Nat(x), MonoidElement::Nat(y)) => Some(x.cmp(y)),
            (MonoidElement::Lex(x), MonoidElement::Lex(y)) => Some(x.cmp(y)),
            (MonoidElement::Lc(x), MonoidElement::Lc(y)) => Some(x.cmp(y)),
            (MonoidElement::Seq(x), MonoidElement::Seq(y)) => x.pointwise_cmp(y),
            _ => unreachable!("checked above"),
        })
    }

    pub fn leq(&self, a: &MonoidElement, b: &MonoidElement) -> Result<bool, MonoidError> {
        Ok(matches!(
            self.compare(a, b)?,
            Some(Ordering::Less | Ordering::Equal)
        ))
    }

    pub fn lt(&self, a: &MonoidElement, b: &MonoidElement) -> Result<bool, MonoidError> {
        Ok(self.compare(a, b)? == Some(Ordering::Less))
    }

    /// Membership in `E₊ = {x | x ≥ 0}`.
    pub fn is_nonnegative(&self, x: &MonoidElement) -> Result<bool, MonoidError> {
        self.leq(&self.neutral(), x)
    }

    pub fn is_positive(&self, x: &MonoidElement) -> Result<bool, MonoidError> {
        self.lt(&self.neutral(), x)
    }

    /// `u + u + … + u` (`n` times) by repeated doubling; neutral for `n = 0`.
    pub fn nfold(&self, u: &MonoidElement, n: &BigUint) -> Result<MonoidElement, MonoidError> {
        self.check(u)?;
        let mut acc = self.neutral();
        let mut base = u.clone();
        let bits = n.bits();
        for i in 0..bits {
            if n.bit(i) {
                acc = self.op(&acc, &base)?;
            }
            if i + 1 < bits {
                base = self.op(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn nfold_u64(&self, u: &MonoidElement, n: u64) -> Result<MonoidElement, MonoidError> {
        self.nfold(u, &BigUint::from(n))
    }

    /// `n·u` for any integer `n`; negative multiples need a group.
    pub fn zfold(&self, u: &MonoidElement, n: &BigInt) -> Result<MonoidElement, MonoidError> {
        let m = self.nfold(u, n.magnitude())?;
        if n.is_negative() {
            self.negate(&m)?.ok_or(MonoidError::NotAGroup)
        } else {
            Ok(m)
        }
    }

    /// Some nonzero element above the neutral element, if any exists.
    pub fn default_positive(&self) -> Option<MonoidElement> {
        match &self.carrier {
            Carrier::NatAdd => Some(MonoidElement::nat(1)),
            Carrier::Lex { arity: 0 } => None,
            Carrier::Lex { arity } => {
                let mut v = vec![0i64; *arity];
                v[arity - 1] = 1;
                Some(MonoidElement::lex(v))
            }
            Carrier::LcAdd => Some(MonoidElement::Lc(LCNumber::eps())),
            Carrier::SeqAdd => Some(MonoidElement::Seq(SymbolicSequence::one())),
        }
    }

    pub fn has_dominator(&self) -> bool {
        matches!(self.carrier, Carrier::LcAdd)
    }

    /// For `u ≥ 0`, an element `x` with `n·u ≤ x` for every `n`. Only
    /// instances where no unit dominates every element provide one.
    ///
    /// On the field carrier `x = (1 + u)/ε`: its valuation
    /// `min(0, v(u)) - 1` is below `v(u)` and its leading coefficient is
    /// positive, so it beats every multiple of `u`.
    pub fn dominate(&self, u: &MonoidElement) -> Result<MonoidElement, MonoidError> {
        self.check(u)?;
        if !self.is_nonnegative(u)? {
            return Err(MonoidError::NotNonNegative(u.to_string()));
        }
        match u {
            MonoidElement::Lc(v) => {
                let x = (&LCNumber::one() + &v.abs()) / LCNumber::eps();
                Ok(MonoidElement::Lc(x))
            }
            _ => Err(MonoidError::OracleMissing(self.name.clone())),
        }
    }

    /// The rational `c` with `a = c·b`, for nonzero `b`.
    fn scalar_ratio(&self, a: &MonoidElement, b: &MonoidElement) -> Option<Rational> {
        match (a, b) {
            (MonoidElement::Nat(x), MonoidElement::Nat(y)) => Some(Rational::new(
                BigInt::from(x.clone()),
                BigInt::from(y.clone()),
            )),
            (MonoidElement::Lex(x), MonoidElement::Lex(y)) => {
                let k = lead_index(y)?;
                let c = Rational::new(x[k].clone(), y[k].clone());
                let ok = x.iter().zip(y).all(|(p, q)| {
                    Rational::from_integer(p.clone()) == &c * Rational::from_integer(q.clone())
                });
                ok.then_some(c)
            }
            (MonoidElement::Lc(x), MonoidElement::Lc(y)) => x.line_ratio(y).ok().flatten(),
            (MonoidElement::Seq(x), MonoidElement::Seq(y)) => {
                // a nonzero branch has finitely many zeros, so some index
                // within a short scan has y(n) ≠ 0
                let n = (0..).find(|&n| !y.eval(n).is_zero())?;
                let c = x.eval(n) / y.eval(n);
                (*x == y.scale(&c)).then_some(c)
            }
            _ => None,
        }
    }

    /// Solve `y = n·u` for an integer `n` (natural for semigroup carriers).
    pub fn solve(&self, y: &MonoidElement, u: &MonoidElement) -> Result<Option<BigInt>, MonoidError> {
        self.check(y)?;
        self.check(u)?;
        if self.is_neutral(u) {
            return Ok(self.is_neutral(y).then(BigInt::zero));
        }
        Ok(self
            .scalar_ratio(y, u)
            .filter(|c| c.is_integer())
            .map(|c| c.to_integer()))
    }

    fn independence_reason(&self, a: &MonoidElement, b: &MonoidElement) -> String {
        match (a, b) {
            (MonoidElement::Lc(x), MonoidElement::Lc(y)) => {
                let (vx, vy) = (x.valuation(), y.valuation());
                if vx != vy {
                    format!(
                        "valuations {} and {} differ, so no nonzero multiples coincide",
                        valuation_text(&vx),
                        valuation_text(&vy)
                    )
                } else {
                    "the ratio of the generators is not a rational constant".into()
                }
            }
            (MonoidElement::Lex(_), MonoidElement::Lex(_)) => {
                "generators are linearly independent over the rationals".into()
            }
            (MonoidElement::Seq(_), MonoidElement::Seq(_)) => {
                "no rational c makes one generator c times the other".into()
            }
            _ => "no common nonzero multiple".into(),
        }
    }

    /// Exact intersection of the cyclic sub-semigroups (subgroups, on group
    /// carriers) generated by `a` and `b`; `None` when the carrier cannot
    /// decide it.
    pub fn intersect_cyclic(
        &self,
        a: &MonoidElement,
        b: &MonoidElement,
    ) -> Result<Option<CyclicIntersection>, MonoidError> {
        self.check(a)?;
        self.check(b)?;
        if self.is_neutral(a) || self.is_neutral(b) {
            return Ok(Some(CyclicIntersection::Trivial {
                reason: "one generator is the neutral element".into(),
            }));
        }
        let found = match self.scalar_ratio(a, b) {
            Some(c) => {
                // a = (p/q)·b  ⇒  q·a = p·b
                let (p, q) = (c.numer().clone(), c.denom().clone());
                if !self.is_group() && p.is_negative() {
                    return Ok(Some(CyclicIntersection::Trivial {
                        reason: "generators point in opposite directions".into(),
                    }));
                }
                let common = self.zfold(a, &q)?;
                CyclicIntersection::Shared {
                    common,
                    n_a: q,
                    n_b: p,
                }
            }
            None => CyclicIntersection::Trivial {
                reason: self.independence_reason(a, b),
            },
        };
        Ok(Some(found))
    }

    /// Exact decision of `∃ n: n·u ≥ x`, where the carrier supports it.
    pub fn decide_reaches(&self, u: &MonoidElement, x: &MonoidElement) -> Result<Option<bool>, MonoidError> {
        self.check(u)?;
        self.check(x)?;
        if !self.is_linear() {
            return Ok(None);
        }
        if self.leq(x, &self.neutral())? {
            return Ok(Some(true));
        }
        if !self.is_positive(u)? {
            return Ok(Some(false));
        }
        Ok(Some(match (u, x) {
            (MonoidElement::Nat(_), MonoidElement::Nat(_)) => true,
            (MonoidElement::Lex(a), MonoidElement::Lex(b)) => lead_index(a) <= lead_index(b),
            (MonoidElement::Lc(a), MonoidElement::Lc(b)) => a.valuation() <= b.valuation(),
            _ => return Ok(None),
        }))
    }

    /// A proof that `n·x ≤ y` for every `n`, where one is available.
    pub fn certify_bounded_orbit(&self, x: &MonoidElement, y: &MonoidElement) -> Result<Option<String>, MonoidError> {
        self.check(x)?;
        self.check(y)?;
        if !self.is_nonnegative(x)? || !self.is_nonnegative(y)? {
            return Ok(None);
        }
        if self.is_neutral(x) {
            return Ok(Some("the orbit of the neutral element is constant".into()));
        }
        Ok(match (x, y) {
            (MonoidElement::Lex(a), MonoidElement::Lex(b)) => {
                match (lead_index(a), lead_index(b)) {
                    (Some(i), Some(j)) if j < i => Some(format!(
                        "every multiple of x vanishes in coordinate {j}, where y is positive"
                    )),
                    _ => None,
                }
            }
            (MonoidElement::Lc(a), MonoidElement::Lc(b)) if !b.is_zero() => {
                let (va, vb) = (a.valuation(), b.valuation());
                (va > vb).then(|| {
                    format!(
                        "valuation(x) = {} exceeds valuation(y) = {}",
                        valuation_text(&va),
                        valuation_text(&vb)
                    )
                })
            }
            _ => None,
        })
    }

    /// A single element `u ≥ 0` whose multiples eventually pass every
    /// element, with the reason, when the carrier has one.
    pub fn archimedean_unit(&self) -> Option<(MonoidElement, String)> {
        match &self.carrier {
            Carrier::NatAdd => Some((MonoidElement::nat(1), "n = x gives n·1 ≥ x".into())),
            Carrier::Lex { arity: 0 } => Some((
                self.neutral(),
                "the carrier has a single element".into(),
            )),
            Carrier::Lex { arity } => {
                let mut v = vec![0i64; *arity];
                v[0] = 1;
                Some((
                    MonoidElement::lex(v),
                    "n = x₀ + 1 puts the first coordinate of n·u above x₀".into(),
                ))
            }
            Carrier::LcAdd | Carrier::SeqAdd => None,
        }
    }

    /// Whether some `u ≥ 0` has multiples reaching every element.
    pub fn unit_condition(&self) -> Fact {
        match &self.carrier {
            Carrier::LcAdd => Fact::Fails(
                "for every u ≥ 0 the element (1 + u)/ε lies above all multiples of u".into(),
            ),
            Carrier::SeqAdd => Fact::Fails(
                "for every u ≥ 0 the sequence (n + 1)·(u + 1) is above N·u at every index n ≥ N"
                    .into(),
            ),
            _ => match self.archimedean_unit() {
                Some((u, why)) => Fact::Holds(format!("u = {u}: {why}")),
                None => Fact::Unknown,
            },
        }
    }

    /// Whether the only `x ≥ 0` with bounded multiples is the neutral one.
    pub fn orbit_condition(&self) -> Fact {
        match &self.carrier {
            Carrier::NatAdd => Fact::Holds("n·x ≥ n whenever x ≥ 1".into()),
            Carrier::Lex { arity } if *arity <= 1 => {
                Fact::Holds("the carrier embeds in the integers".into())
            }
            Carrier::Lex { .. } => Fact::Fails(
                "multiples of the last unit vector stay below the first unit vector".into(),
            ),
            Carrier::LcAdd => Fact::Fails("every multiple of ε stays below 1".into()),
            Carrier::SeqAdd => Fact::Holds(
                "pointwise, n·x(k) ≤ y(k) for all n forces x(k) = 0 at every index".into(),
            ),
        }
    }

    /// A deterministic sample of elements, simplest first.
    pub fn standard_sample(&self, size: usize) -> Vec<MonoidElement> {
        match &self.carrier {
            Carrier::NatAdd => (0..size as u64).map(MonoidElement::nat).collect(),
            Carrier::Lex { arity } => lex_sample(*arity, size),
            Carrier::LcAdd => lc_sample(size).into_iter().map(MonoidElement::Lc).collect(),
            Carrier::SeqAdd => seq_sample(size).into_iter().map(MonoidElement::Seq).collect(),
        }
    }
}

fn lex_sample(arity: usize, size: usize) -> Vec<MonoidElement> {
    if arity == 0 {
        return vec![MonoidElement::Lex(Vec::new())];
    }
    let mut radius: i64 = 1;
    loop {
        let side = (2 * radius + 1) as usize;
        let total = side.checked_pow(arity as u32).unwrap_or(usize::MAX);
        if total >= size || total == usize::MAX {
            break;
        }
        radius += 1;
    }
    let side = 2 * radius + 1;
    let mut all: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..arity {
        all = all
            .into_iter()
            .flat_map(|v| {
                (0..side).map(move |d| {
                    let mut w = v.clone();
                    w.push(d - radius);
                    w
                })
            })
            .collect();
    }
    all.sort_by_key(|v| (v.iter().map(|c| c.abs()).sum::<i64>(), v.clone()));
    all.into_iter().take(size).map(MonoidElement::lex).collect()
}

fn lc_sample(size: usize) -> Vec<LCNumber> {
    let coeffs: Vec<Rational> = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-3, 1)]
        .iter()
        .map(|&(n, d)| Rational::from_pair(n, d))
        .collect();
    let exps: Vec<Rational> = [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-3, 1)]
        .iter()
        .map(|&(n, d)| Rational::from_pair(n, d))
        .collect();
    let monomials: Vec<LCNumber> = exps
        .iter()
        .flat_map(|e| coeffs.iter().map(move |c| LCNumber::monomial(c.clone(), e.clone())))
        .collect();
    let mut out = vec![LCNumber::zero()];
    out.extend(monomials.iter().cloned());
    'outer: for (i, a) in monomials.iter().enumerate() {
        for b in &monomials[i + 1..] {
            if out.len() >= size {
                break 'outer;
            }
            let s = a + b;
            if !s.is_zero() && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out.truncate(size);
    out
}

fn seq_sample(size: usize) -> Vec<SymbolicSequence> {
    use crate::poly::Poly;
    let mut base = vec![
        SymbolicSequence::zero(),
        SymbolicSequence::one(),
        SymbolicSequence::index(),
        SymbolicSequence::ratfn(Poly::one(), Poly::from_ints([1, 1])).unwrap(),
        SymbolicSequence::periodic(vec![Rational::one(), -Rational::one()]).unwrap(),
        SymbolicSequence::periodic(vec![Rational::zero(), Rational::one()]).unwrap(),
    ];
    let seeds = base.clone();
    let mut k = 2i64;
    while base.len() < size {
        let c = Rational::from_integer_i64(k / 2 * if k % 2 == 0 { 1 } else { -1 });
        for s in &seeds[1..] {
            if base.len() >= size {
                break;
            }
            base.push(s.scale(&c));
        }
        k += 1;
    }
    base.truncate(size);
    base
}
