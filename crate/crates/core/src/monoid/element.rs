use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::json::JsonInt;
use crate::lc::LCNumber;
use crate::seq::SymbolicSequence;

/// An element of one of the registered carriers. The tag must match the
/// instance it is used with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonoidElement {
    Nat(BigUint),
    Lex(Vec<BigInt>),
    Lc(LCNumber),
    Seq(SymbolicSequence),
}

impl MonoidElement {
    pub fn nat(v: u64) -> Self {
        MonoidElement::Nat(BigUint::from(v))
    }

    pub fn lex<I: IntoIterator<Item = i64>>(v: I) -> Self {
        MonoidElement::Lex(v.into_iter().map(BigInt::from).collect())
    }

    pub fn tag(&self) -> &'static str {
        match self {
            MonoidElement::Nat(_) => "nat",
            MonoidElement::Lex(_) => "lex",
            MonoidElement::Lc(_) => "lc",
            MonoidElement::Seq(_) => "seq",
        }
    }

    pub fn as_lc(&self) -> Option<&LCNumber> {
        match self {
            MonoidElement::Lc(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for MonoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidElement::Nat(v) => write!(f, "{v}"),
            MonoidElement::Lex(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            MonoidElement::Lc(v) => write!(f, "{v}"),
            MonoidElement::Seq(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Repr {
    Nat(JsonInt),
    Lex(Vec<JsonInt>),
    Lc(LCNumber),
    Seq(SymbolicSequence),
}

impl Serialize for MonoidElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = match self {
            MonoidElement::Nat(v) => Repr::Nat(JsonInt(BigInt::from(v.clone()))),
            MonoidElement::Lex(v) => Repr::Lex(v.iter().cloned().map(JsonInt).collect()),
            MonoidElement::Lc(v) => Repr::Lc(v.clone()),
            MonoidElement::Seq(v) => Repr::Seq(v.clone()),
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonoidElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Nat(v) => MonoidElement::Nat(
                v.0.try_into()
                    .map_err(|_| de::Error::custom("natural number must be nonnegative"))?,
            ),
            Repr::Lex(v) => MonoidElement::Lex(v.into_iter().map(|i| i.0).collect()),
            Repr::Lc(v) => MonoidElement::Lc(v),
            Repr::Seq(v) => MonoidElement::Seq(v),
        })
    }
}
