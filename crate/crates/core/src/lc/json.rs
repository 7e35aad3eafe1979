use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::{LCNumber, PuiseuxPoly};
use crate::json::JsonInt;
use crate::Rational;

/// `[exponent-num, exponent-den, coeff-num, coeff-den]`
type TermRow = [JsonInt; 4];

#[derive(Serialize, Deserialize)]
struct Repr {
    num: Vec<TermRow>,
    den: Vec<TermRow>,
}

fn rows(p: &PuiseuxPoly) -> Vec<TermRow> {
    p.terms()
        .iter()
        .map(|(e, c)| {
            [
                JsonInt(e.numer().clone()),
                JsonInt(e.denom().clone()),
                JsonInt(c.numer().clone()),
                JsonInt(c.denom().clone()),
            ]
        })
        .collect()
}

fn from_rows(rows: Vec<TermRow>) -> Result<PuiseuxPoly, String> {
    let zero = BigInt::from(0);
    let mut terms = Vec::with_capacity(rows.len());
    for [en, ed, cn, cd] in rows {
        if ed.0 <= zero || cd.0 <= zero {
            return Err("term denominators must be positive".into());
        }
        terms.push((Rational::new(en.0, ed.0), Rational::new(cn.0, cd.0)));
    }
    Ok(PuiseuxPoly::from_terms(terms))
}

impl Serialize for LCNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            num: rows(self.numerator()),
            den: rows(self.denominator()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LCNumber {
    /// Accepts any representation and canonicalizes it.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        let num = from_rows(r.num).map_err(de::Error::custom)?;
        let den = from_rows(r.den).map_err(de::Error::custom)?;
        LCNumber::from_fraction(num, den).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let e = LCNumber::eps();
        let one = LCNumber::one();
        let a = &(&LCNumber::from_int(3) + &e) / &(&one + &e);
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(
            j,
            r#"{"num":[[0,1,3,1],[1,1,1,1]],"den":[[0,1,1,1],[1,1,1,1]]}"#
        );
        let back: LCNumber = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn non_canonical_input_is_normalized() {
        // 2ε / 2ε
        let j = r#"{"num":[[1,1,2,1]],"den":[[1,1,2,1]]}"#;
        let v: LCNumber = serde_json::from_str(j).unwrap();
        assert_eq!(v, LCNumber::one());
        assert!(serde_json::from_str::<LCNumber>(r#"{"num":[[1,1,1,1]],"den":[]}"#).is_err());
    }
}
