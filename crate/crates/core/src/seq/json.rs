use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::SymbolicSequence;
use crate::json::JsonInt;
use crate::poly::Poly;
use crate::Rational;

/// Integer coefficients, lowest degree first.
#[derive(Serialize, Deserialize)]
struct Branch {
    num: Vec<JsonInt>,
    den: Vec<JsonInt>,
}

#[derive(Serialize, Deserialize)]
struct Repr {
    modulus: u64,
    branches: Vec<Branch>,
}

fn poly(c: Vec<JsonInt>) -> Poly {
    Poly::from_coeffs(c.into_iter().map(|i| Rational::from_integer(i.0)).collect())
}

impl Serialize for SymbolicSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let branches = self
            .branches()
            .iter()
            .map(|b| {
                let (num, den) = SymbolicSequence::integer_branch(b);
                Branch {
                    num: num.into_iter().map(JsonInt).collect(),
                    den: den.into_iter().map(JsonInt).collect(),
                }
            })
            .collect();
        Repr {
            modulus: self.modulus(),
            branches,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        let parts = r
            .branches
            .into_iter()
            .map(|b| (poly(b.num), poly(b.den)))
            .collect();
        SymbolicSequence::from_fractions(r.modulus, parts).map_err(de::Error::custom)
    }
}
