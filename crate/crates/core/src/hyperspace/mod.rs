//! Sub-structures, disjointness up to idempotents, family certificates and
//! finite magma scans.
//!
//! Two sub-structures count as disjoint when every element they share is
//! idempotent in the ambient operation. The idempotent set is computed per
//! ambient rather than assumed to be `{0}`.

mod certificate;
mod magma;

pub use certificate::{
    build_family_powers, build_line_family, certificate_from_chain, verify_certificate, DisjointFamilyCertificate,
    Host, Member, Members, PairCheck, PairProof, PowerKind, VerifyReport, CERTIFICATE_SCHEMA,
};
pub use magma::{finite_magma_scan, FiniteMagma, ScanReport, DEFAULT_SCAN_BOUND};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json::rational_str;
use crate::lc::{LCNumber, LcError, Valuation};
use crate::monoid::chain::{bounded_common_multiple, Disjointness};
use crate::monoid::{CyclicIntersection, MonoidElement, MonoidError, MonoidInstance};
use crate::seq::SymbolicSequence;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("base is {found}, expected an {expected} base")]
    WrongKind { expected: String, found: String },
    #[error("exponent {0} is below 1")]
    ExponentBelowOne(String),
    #[error("exponent {0} appears twice")]
    DuplicateExponent(String),
    #[error("fractional exponent {0} needs a monomial base")]
    NonMonomialBase(String),
    #[error("{0}")]
    NoProperFamily(String),
    #[error("magma of size {size} exceeds the exhaustive bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("invalid magma table: {0}")]
    InvalidMagma(String),
    #[error("element {element} does not belong to {ambient}")]
    ForeignElement { ambient: String, element: String },
    #[error("{0} is not supported in this ambient")]
    Unsupported(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Field(#[from] LcError),
}

/// The structure that sub-structures live in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Ambient {
    /// The additive group of the non-Archimedean field.
    LcAdditive,
    /// The additive group of the rationals alone, with no infinitesimals.
    RationalScalars,
    /// A registered ordered monoid.
    Monoid { instance: String },
    /// The sequence algebra under pointwise multiplication.
    SeqMultiplicative,
    Finite { magma: FiniteMagma },
}

impl Ambient {
    pub fn name(&self) -> String {
        match self {
            Ambient::LcAdditive => "lc-additive".into(),
            Ambient::RationalScalars => "rational-scalars".into(),
            Ambient::Monoid { instance } => format!("monoid {instance}"),
            Ambient::SeqMultiplicative => "seq-multiplicative".into(),
            Ambient::Finite { magma } => format!("finite magma of size {}", magma.size()),
        }
    }

    /// A readable description of the idempotent set.
    pub fn idempotent_description(&self) -> String {
        match self {
            Ambient::LcAdditive | Ambient::RationalScalars => "{0}".into(),
            Ambient::Monoid { .. } => "{neutral element}".into(),
            Ambient::SeqMultiplicative => "sequences taking only the values 0 and 1".into(),
            Ambient::Finite { magma } => {
                let ids: Vec<String> = magma.idempotents().iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", ids.join(", "))
            }
        }
    }

    fn instance(&self) -> Result<MonoidInstance, HyperError> {
        match self {
            Ambient::Monoid { instance } => Ok(MonoidInstance::by_name(instance)?),
            _ => Err(HyperError::Unsupported("a monoid operation".into())),
        }
    }
}

/// An element of some ambient; the variant must match the ambient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Element {
    Lc(LCNumber),
    Rational(#[serde(with = "rational_str")] Rational),
    Monoid(MonoidElement),
    Seq(SymbolicSequence),
    Finite(usize),
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Element::Lc(v) => write!(f, "{v}"),
            Element::Rational(v) => write!(f, "{v}"),
            Element::Monoid(v) => write!(f, "{v}"),
            Element::Seq(v) => write!(f, "{v}"),
            Element::Finite(v) => write!(f, "#{v}"),
        }
    }
}

fn foreign(ambient: &Ambient, x: &Element) -> HyperError {
    HyperError::ForeignElement {
        ambient: ambient.name(),
        element: x.to_string(),
    }
}

/// Whether `x op x = x`.
pub fn is_idempotent(ambient: &Ambient, x: &Element) -> Result<bool, HyperError> {
    match (ambient, x) {
        (Ambient::LcAdditive, Element::Lc(v)) => Ok(v.is_zero()),
        (Ambient::RationalScalars, Element::Rational(v)) => Ok(num_traits::Zero::is_zero(v)),
        (Ambient::Monoid { .. }, Element::Monoid(v)) => {
            let inst = ambient.instance()?;
            Ok(inst.op(v, v)? == *v)
        }
        (Ambient::SeqMultiplicative, Element::Seq(s)) => Ok(s.is_mul_idempotent()),
        (Ambient::Finite { magma }, Element::Finite(i)) if *i < magma.size() => Ok(magma.op(*i, *i) == *i),
        _ => Err(foreign(ambient, x)),
    }
}

/// Named subsets used as hosts `F`. Each is closed under addition and
/// rational scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostPredicate {
    /// Zero and the infinitesimals.
    Monad,
    /// Elements with a standard part.
    FinitePart,
    /// Values with denominator 1.
    Polynomials,
    Whole,
}

impl HostPredicate {
    pub fn contains(self, ambient: &Ambient, x: &Element) -> Result<bool, HyperError> {
        match (self, ambient, x) {
            (HostPredicate::Whole, _, _) => Ok(true),
            (HostPredicate::Monad, Ambient::LcAdditive, Element::Lc(v)) => Ok(v.classify().in_monad()),
            (HostPredicate::FinitePart, Ambient::LcAdditive, Element::Lc(v)) => Ok(v.classify().is_finite()),
            (HostPredicate::Polynomials, Ambient::LcAdditive, Element::Lc(v)) => Ok(v.is_polynomial()),
            (HostPredicate::Polynomials, Ambient::Monoid { instance }, Element::Monoid(MonoidElement::Lc(v)))
                if instance == "lc-add" =>
            {
                Ok(v.is_polynomial())
            }
            (HostPredicate::Monad, Ambient::Monoid { instance }, Element::Monoid(MonoidElement::Lc(v)))
                if instance == "lc-add" =>
            {
                Ok(v.classify().in_monad())
            }
            _ => Err(HyperError::Unsupported(format!("predicate {self:?} on {}", ambient.name()))),
        }
    }
}

/// A sub-structure together with the way membership is decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SubStructure {
    /// `ℤu`, or `ℕu` when the ambient has no inverses.
    Cyclic { generator: Element },
    /// `ℚ·g`.
    ScalarLine { generator: Element },
    /// Closure of the generators under the table, iterated `depth` times.
    Generated { generators: Vec<usize>, depth: usize },
    Predicate { name: HostPredicate },
}

impl SubStructure {
    /// `None` when membership cannot be decided.
    pub fn contains(&self, ambient: &Ambient, x: &Element) -> Result<Option<bool>, HyperError> {
        match (self, ambient, x) {
            (SubStructure::ScalarLine { generator: Element::Lc(g) }, Ambient::LcAdditive, Element::Lc(v)) => {
                Ok(Some(v.is_zero() || (!g.is_zero() && v.same_line(g)?)))
            }
            (
                SubStructure::ScalarLine {
                    generator: Element::Rational(g),
                },
                Ambient::RationalScalars,
                Element::Rational(v),
            ) => Ok(Some(num_traits::Zero::is_zero(v) || !num_traits::Zero::is_zero(g))),
            (SubStructure::Cyclic { generator: Element::Monoid(g) }, Ambient::Monoid { .. }, Element::Monoid(v)) => {
                let inst = ambient.instance()?;
                Ok(Some(match inst.solve(v, g)? {
                    Some(n) => inst.is_group() || !num_traits::Signed::is_negative(&n),
                    None => false,
                }))
            }
            (SubStructure::Generated { generators, depth }, Ambient::Finite { magma }, Element::Finite(i)) => {
                let (set, closed) = magma.closure(generators, *depth);
                Ok(if set.contains(i) || closed { Some(set.contains(i)) } else { None })
            }
            (SubStructure::Predicate { name }, _, _) => name.contains(ambient, x).map(Some),
            _ => Err(HyperError::Unsupported(format!(
                "membership of {x} in this sub-structure of {}",
                ambient.name()
            ))),
        }
    }

    pub fn generator(&self) -> Option<&Element> {
        match self {
            SubStructure::Cyclic { generator } | SubStructure::ScalarLine { generator } => Some(generator),
            _ => None,
        }
    }
}

/// How a pair of members was shown to meet only in idempotents, or where
/// they overlap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "proof", rename_all = "kebab-case")]
pub enum PairOutcome {
    /// Two monomial lines `ℚε^a`, `ℚε^b` with `a ≠ b`.
    ExponentMismatch {
        #[serde(with = "rational_str")]
        exponent_i: Rational,
        #[serde(with = "rational_str")]
        exponent_j: Rational,
    },
    /// Nonzero multiples keep their valuation, and the two differ.
    Valuation {
        #[serde(with = "rational_str")]
        valuation_i: Rational,
        #[serde(with = "rational_str")]
        valuation_j: Rational,
    },
    /// The membership solver shows no nonzero common element.
    SolvedMembership { reason: String },
    /// Both closures enumerated; the common elements are all idempotent.
    Exhaustive { common: Vec<usize> },
    /// No common non-idempotent element within the search bound.
    Bounded { bound: u64 },
    Overlap { witness: Element },
}

impl PairOutcome {
    pub fn is_exact_disjoint(&self) -> bool {
        !matches!(self, PairOutcome::Bounded { .. } | PairOutcome::Overlap { .. })
    }
}

fn finite_valuation(v: &LCNumber) -> Option<Rational> {
    match v.valuation() {
        Valuation::Finite(q) => Some(q),
        Valuation::Infinity => None,
    }
}

/// Lines `ℚg`, `ℚh` in the field meet outside 0 exactly when `g/h` is a
/// rational constant.
fn lc_lines(g: &LCNumber, h: &LCNumber) -> Result<PairOutcome, HyperError> {
    if g.is_zero() || h.is_zero() {
        return Ok(PairOutcome::SolvedMembership {
            reason: "one line is {0}".into(),
        });
    }
    if let (Some((a, _)), Some((b, _))) = (g.is_monomial(), h.is_monomial()) {
        if a != b {
            return Ok(PairOutcome::ExponentMismatch {
                exponent_i: a,
                exponent_j: b,
            });
        }
    }
    let (vg, vh) = (finite_valuation(g).unwrap(), finite_valuation(h).unwrap());
    if vg != vh {
        return Ok(PairOutcome::Valuation {
            valuation_i: vg,
            valuation_j: vh,
        });
    }
    Ok(if g.same_line(h)? {
        PairOutcome::Overlap {
            witness: Element::Lc(g.clone()),
        }
    } else {
        PairOutcome::SolvedMembership {
            reason: "the ratio of the generators is not a rational constant".into(),
        }
    })
}

fn cyclic_pair(
    ambient: &Ambient,
    g: &MonoidElement,
    h: &MonoidElement,
    bound: u64,
) -> Result<PairOutcome, HyperError> {
    let inst = ambient.instance()?;
    if let (MonoidElement::Lc(a), MonoidElement::Lc(b)) = (g, h) {
        if let (Some(va), Some(vb)) = (finite_valuation(a), finite_valuation(b)) {
            if va != vb {
                return Ok(PairOutcome::Valuation {
                    valuation_i: va,
                    valuation_j: vb,
                });
            }
        }
    }
    Ok(match inst.intersect_cyclic(g, h)? {
        Some(CyclicIntersection::Trivial { reason }) => PairOutcome::SolvedMembership { reason },
        Some(CyclicIntersection::Shared { common, .. }) => PairOutcome::Overlap {
            witness: Element::Monoid(common),
        },
        None => match bounded_common_multiple(&inst, g, h, bound)? {
            Disjointness::Overlap { common, .. } => PairOutcome::Overlap {
                witness: Element::Monoid(common),
            },
            _ => PairOutcome::Bounded { bound },
        },
    })
}

/// Decide, or check up to `bound`, that every element shared by `a` and `b`
/// is idempotent.
pub fn disjoint_up_to_idempotents(
    ambient: &Ambient,
    a: &SubStructure,
    b: &SubStructure,
    bound: u64,
) -> Result<PairOutcome, HyperError> {
    use SubStructure::*;
    match (ambient, a, b) {
        (Ambient::LcAdditive, ScalarLine { generator: Element::Lc(g) }, ScalarLine { generator: Element::Lc(h) }) => {
            lc_lines(g, h)
        }
        (
            Ambient::RationalScalars,
            ScalarLine {
                generator: Element::Rational(g),
            },
            ScalarLine {
                generator: Element::Rational(h),
            },
        ) => Ok(if num_traits::Zero::is_zero(g) || num_traits::Zero::is_zero(h) {
            PairOutcome::SolvedMembership {
                reason: "one line is {0}".into(),
            }
        } else {
            PairOutcome::Overlap {
                witness: Element::Rational(g.clone()),
            }
        }),
        (Ambient::Monoid { .. }, Cyclic { generator: Element::Monoid(g) }, Cyclic { generator: Element::Monoid(h) }) => {
            cyclic_pair(ambient, g, h, bound)
        }
        (
            Ambient::Finite { magma },
            Generated {
                generators: ga,
                depth: da,
            },
            Generated {
                generators: gb,
                depth: db,
            },
        ) => {
            let (sa, ca) = magma.closure(ga, *da);
            let (sb, cb) = magma.closure(gb, *db);
            let common: BTreeSet<usize> = sa.intersection(&sb).copied().collect();
            if let Some(&w) = common.iter().find(|&&i| magma.op(i, i) != i) {
                return Ok(PairOutcome::Overlap {
                    witness: Element::Finite(w),
                });
            }
            Ok(if ca && cb {
                PairOutcome::Exhaustive {
                    common: common.into_iter().collect(),
                }
            } else {
                PairOutcome::Bounded {
                    bound: (*da).max(*db) as u64,
                }
            })
        }
        _ => Err(HyperError::Unsupported(format!(
            "disjointness of these sub-structures in {}",
            ambient.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalExt;

    fn line(x: LCNumber) -> SubStructure {
        SubStructure::ScalarLine {
            generator: Element::Lc(x),
        }
    }

    #[test]
    fn idempotents() {
        assert!(is_idempotent(&Ambient::LcAdditive, &Element::Lc(LCNumber::zero())).unwrap());
        assert!(!is_idempotent(&Ambient::LcAdditive, &Element::Lc(LCNumber::eps())).unwrap());
        let even = SymbolicSequence::periodic(vec![Rational::from_integer_i64(1), Rational::from_integer_i64(0)]).unwrap();
        assert!(is_idempotent(&Ambient::SeqMultiplicative, &Element::Seq(even)).unwrap());
        let nat = Ambient::Monoid {
            instance: "nat-add".into(),
        };
        assert!(!is_idempotent(&nat, &Element::Monoid(MonoidElement::nat(1))).unwrap());
        assert!(is_idempotent(&nat, &Element::Monoid(MonoidElement::nat(0))).unwrap());
        assert!(is_idempotent(&nat, &Element::Lc(LCNumber::zero())).is_err());
    }

    #[test]
    fn monomial_lines() {
        let e = LCNumber::eps();
        let r = disjoint_up_to_idempotents(&Ambient::LcAdditive, &line(e.clone()), &line(&e * &e), 10).unwrap();
        assert!(matches!(r, PairOutcome::ExponentMismatch { .. }));
        let two_e = e.scale(&Rational::from_integer_i64(2));
        let r = disjoint_up_to_idempotents(&Ambient::LcAdditive, &line(e.clone()), &line(two_e), 10).unwrap();
        assert_eq!(
            r,
            PairOutcome::Overlap {
                witness: Element::Lc(e.clone())
            }
        );
        let r = disjoint_up_to_idempotents(&Ambient::LcAdditive, &line(e.clone()), &line(&e + &(&e * &e)), 10).unwrap();
        assert!(matches!(r, PairOutcome::SolvedMembership { .. }));
    }

    #[test]
    fn line_membership() {
        let e = LCNumber::eps();
        let l = line(e.clone());
        let half = e.scale(&Rational::from_pair(1, 2));
        assert_eq!(l.contains(&Ambient::LcAdditive, &Element::Lc(half)).unwrap(), Some(true));
        assert_eq!(l.contains(&Ambient::LcAdditive, &Element::Lc(&e * &e)).unwrap(), Some(false));
    }

    #[test]
    fn cyclic_membership_respects_semigroups() {
        let nat = Ambient::Monoid {
            instance: "nat-add".into(),
        };
        let c = SubStructure::Cyclic {
            generator: Element::Monoid(MonoidElement::nat(3)),
        };
        assert_eq!(c.contains(&nat, &Element::Monoid(MonoidElement::nat(9))).unwrap(), Some(true));
        assert_eq!(c.contains(&nat, &Element::Monoid(MonoidElement::nat(10))).unwrap(), Some(false));
    }
}
