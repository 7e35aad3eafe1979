//! Certificates for families of pairwise disjoint proper sub-structures
//! inside a proper host `F`, and their independent re-verification.

use std::collections::{BTreeSet, HashMap};

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{
    cyclic_pair, is_idempotent, lc_lines, Ambient, Element, HostPredicate, HyperError, PairOutcome, SubStructure,
};
use crate::json::rational_vec;
use crate::lc::{Classification, LCNumber};
use crate::monoid::chain::SubgroupFamily;
use crate::monoid::MonoidElement;
use crate::Rational;

pub const CERTIFICATE_SCHEMA: &str = "infinitesimal/disjoint-family/v1";

const NOT_CHECKED: &str = "not-checked";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerKind {
    Infinitesimal,
    Infinite,
}

/// The host `F` and an ambient element outside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Host {
    pub predicate: HostPredicate,
    pub outside_witness: Element,
}

/// A member `I ⊊ F` with an element of `F` that is not in `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub sub: SubStructure,
    pub outside_witness: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum Members {
    Explicit {
        list: Vec<Member>,
    },
    /// Lines `ℚ·base^a`, one per exponent, stored symbolically.
    Powers {
        base: LCNumber,
        #[serde(with = "rational_vec")]
        exponents: Vec<Rational>,
        kind: PowerKind,
        outside_witnesses: Vec<Element>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairProof {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub outcome: PairOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointFamilyCertificate {
    pub schema: String,
    pub ambient: Ambient,
    pub host: Host,
    pub members: Members,
    pub pair_proofs: Vec<PairProof>,
    pub idempotents: String,
    /// Why the listed members extend to an infinite family, if they do.
    pub infinite_extension: Option<String>,
    pub maximality: String,
}

impl DisjointFamilyCertificate {
    pub fn materialize(&self) -> Result<Vec<Member>, HyperError> {
        match &self.members {
            Members::Explicit { list } => Ok(list.clone()),
            Members::Powers {
                base,
                exponents,
                outside_witnesses,
                ..
            } => {
                if exponents.len() != outside_witnesses.len() {
                    return Err(HyperError::NoProperFamily(
                        "one outside witness is needed per exponent".into(),
                    ));
                }
                exponents
                    .iter()
                    .zip(outside_witnesses)
                    .map(|(a, w)| {
                        Ok(Member {
                            sub: SubStructure::ScalarLine {
                                generator: Element::Lc(power_generator(base, a)?),
                            },
                            outside_witness: w.clone(),
                        })
                    })
                    .collect()
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }
}

/// Generator of the line `ℚ·base^a`. On a monomial base `c·ε^q` with a
/// fractional exponent the line is `ℚ·ε^(qa)`; the coefficient's root may
/// not be rational, but it does not change the line over the reals.
fn power_generator(base: &LCNumber, a: &Rational) -> Result<LCNumber, HyperError> {
    if a.is_integer() {
        return Ok(base.pow(a)?);
    }
    match base.is_monomial() {
        Some((q, _)) => Ok(LCNumber::monomial(Rational::one(), q * a)),
        None => Err(HyperError::NonMonomialBase(a.to_string())),
    }
}

fn polynomial_host_witness() -> LCNumber {
    // 1/(1+ε) has an infinite expansion, so it is not a polynomial
    LCNumber::one().checked_div(&(&LCNumber::one() + &LCNumber::eps())).unwrap()
}

fn off_line_witness(g: &LCNumber) -> LCNumber {
    g * &LCNumber::eps()
}

fn validate_exponents(exponents: &[Rational]) -> Result<(), HyperError> {
    let mut seen = BTreeSet::new();
    for a in exponents {
        if a < &Rational::one() {
            return Err(HyperError::ExponentBelowOne(a.to_string()));
        }
        if !seen.insert(a.clone()) {
            return Err(HyperError::DuplicateExponent(a.to_string()));
        }
    }
    Ok(())
}

fn check_kind(base: &LCNumber, kind: PowerKind) -> Result<(), HyperError> {
    let c = base.classify();
    let ok = match kind {
        PowerKind::Infinitesimal => c == Classification::Infinitesimal,
        PowerKind::Infinite => c == Classification::Infinite,
    };
    if ok {
        Ok(())
    } else {
        Err(HyperError::WrongKind {
            expected: match kind {
                PowerKind::Infinitesimal => "infinitesimal",
                PowerKind::Infinite => "infinite",
            }
            .into(),
            found: c.as_str().into(),
        })
    }
}

fn pair_proofs(n: usize, mut f: impl FnMut(usize, usize) -> Result<PairOutcome, HyperError>) -> Result<Vec<PairProof>, HyperError> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(PairProof { i, j, outcome: f(i, j)? });
        }
    }
    Ok(out)
}

fn refuse_overlaps(proofs: &[PairProof]) -> Result<(), HyperError> {
    match proofs.iter().find(|p| matches!(p.outcome, PairOutcome::Overlap { .. })) {
        Some(PairProof {
            i,
            j,
            outcome: PairOutcome::Overlap { witness },
        }) => Err(HyperError::NoProperFamily(format!(
            "members {i} and {j} share the non-idempotent element {witness}"
        ))),
        _ => Ok(()),
    }
}

/// The family of lines `ℚ·base^a`, `a` in `exponents`. Infinitesimal bases
/// live in the monad; infinite ones in the Puiseux polynomials, which miss
/// `1/(1+ε)`.
pub fn build_family_powers(
    base: &LCNumber,
    exponents: &[Rational],
    kind: PowerKind,
) -> Result<DisjointFamilyCertificate, HyperError> {
    check_kind(base, kind)?;
    validate_exponents(exponents)?;
    let (host, infinite_extension) = match kind {
        PowerKind::Infinitesimal => (
            Host {
                predicate: HostPredicate::Monad,
                outside_witness: Element::Lc(LCNumber::one()),
            },
            "every rational a ≥ 1 gives a line of valuation a·v(base) inside the monad, distinct for distinct a",
        ),
        PowerKind::Infinite => {
            if !base.is_polynomial() {
                return Err(HyperError::NoProperFamily(
                    "an infinite base must be a Puiseux polynomial to have a proper host".into(),
                ));
            }
            (
                Host {
                    predicate: HostPredicate::Polynomials,
                    outside_witness: Element::Lc(polynomial_host_witness()),
                },
                "every rational a ≥ 1 gives a line of valuation a·v(base) inside the polynomials, distinct for distinct a",
            )
        }
    };
    let gens: Vec<LCNumber> = exponents
        .iter()
        .map(|a| power_generator(base, a))
        .collect::<Result<_, _>>()?;
    let proofs = pair_proofs(gens.len(), |i, j| lc_lines(&gens[i], &gens[j]))?;
    refuse_overlaps(&proofs)?;
    Ok(DisjointFamilyCertificate {
        schema: CERTIFICATE_SCHEMA.into(),
        ambient: Ambient::LcAdditive,
        host,
        members: Members::Powers {
            base: base.clone(),
            exponents: exponents.to_vec(),
            kind,
            outside_witnesses: gens.iter().map(|g| Element::Lc(off_line_witness(g))).collect(),
        },
        pair_proofs: proofs,
        idempotents: Ambient::LcAdditive.idempotent_description(),
        infinite_extension: Some(infinite_extension.into()),
        maximality: NOT_CHECKED.into(),
    })
}

/// Disjoint scalar lines through the given generators. In the rationals
/// alone this always fails.
pub fn build_line_family(ambient: &Ambient, generators: &[Element]) -> Result<DisjointFamilyCertificate, HyperError> {
    match ambient {
        Ambient::RationalScalars => {
            if generators.iter().any(|g| matches!(g, Element::Rational(r) if !num_traits::Zero::is_zero(r))) {
                Err(HyperError::NoProperFamily(
                    "every nonzero line is the whole carrier, so no proper line exists and no two lines are disjoint"
                        .into(),
                ))
            } else {
                Err(HyperError::NoProperFamily(
                    "the only line through 0 is {0}, so distinct lines do not exist".into(),
                ))
            }
        }
        Ambient::LcAdditive => {
            let gens: Vec<LCNumber> = generators
                .iter()
                .map(|g| match g {
                    Element::Lc(v) if !v.is_zero() => Ok(v.clone()),
                    _ => Err(HyperError::NoProperFamily(format!("{g} does not generate a nonzero line"))),
                })
                .collect::<Result<_, _>>()?;
            let host = if gens.iter().all(|g| g.classify().in_monad()) {
                Host {
                    predicate: HostPredicate::Monad,
                    outside_witness: Element::Lc(LCNumber::one()),
                }
            } else if gens.iter().all(LCNumber::is_polynomial) {
                Host {
                    predicate: HostPredicate::Polynomials,
                    outside_witness: Element::Lc(polynomial_host_witness()),
                }
            } else {
                return Err(HyperError::NoProperFamily(
                    "the generators lie in no registered proper host".into(),
                ));
            };
            let proofs = pair_proofs(gens.len(), |i, j| lc_lines(&gens[i], &gens[j]))?;
            refuse_overlaps(&proofs)?;
            Ok(DisjointFamilyCertificate {
                schema: CERTIFICATE_SCHEMA.into(),
                ambient: Ambient::LcAdditive,
                host,
                members: Members::Explicit {
                    list: gens
                        .iter()
                        .map(|g| Member {
                            sub: SubStructure::ScalarLine {
                                generator: Element::Lc(g.clone()),
                            },
                            outside_witness: Element::Lc(off_line_witness(g)),
                        })
                        .collect(),
                },
                pair_proofs: proofs,
                idempotents: ambient.idempotent_description(),
                infinite_extension: None,
                maximality: NOT_CHECKED.into(),
            })
        }
        _ => Err(HyperError::Unsupported("scalar lines".into())),
    }
}

/// Turn a chain of cyclic subgroups of the field's additive group into a
/// certificate with host the Puiseux polynomials.
pub fn certificate_from_chain(family: &SubgroupFamily) -> Result<DisjointFamilyCertificate, HyperError> {
    if family.instance != "lc-add" {
        return Err(HyperError::Unsupported(format!("certificates for {}", family.instance)));
    }
    let ambient = Ambient::Monoid {
        instance: family.instance.clone(),
    };
    let gens: Vec<MonoidElement> = family.generators().cloned().collect();
    let half = Rational::new(1.into(), 2.into());
    let mut list = Vec::new();
    for g in &gens {
        let Some(v) = g.as_lc() else {
            return Err(HyperError::ForeignElement {
                ambient: ambient.name(),
                element: g.to_string(),
            });
        };
        if !v.is_polynomial() {
            return Err(HyperError::NoProperFamily(format!(
                "generator {v} lies outside the polynomial host"
            )));
        }
        list.push(Member {
            sub: SubStructure::Cyclic {
                generator: Element::Monoid(g.clone()),
            },
            // u/2 is in the host but not an integer multiple of u
            outside_witness: Element::Monoid(MonoidElement::Lc(v.scale(&half))),
        });
    }
    let proofs = pair_proofs(gens.len(), |i, j| cyclic_pair(&ambient, &gens[i], &gens[j], 0))?;
    refuse_overlaps(&proofs)?;
    Ok(DisjointFamilyCertificate {
        schema: CERTIFICATE_SCHEMA.into(),
        host: Host {
            predicate: HostPredicate::Polynomials,
            outside_witness: Element::Monoid(MonoidElement::Lc(polynomial_host_witness())),
        },
        members: Members::Explicit { list },
        pair_proofs: proofs,
        idempotents: ambient.idempotent_description(),
        ambient,
        infinite_extension: Some("each step of the chain applies again to its last generator".into()),
        maximality: NOT_CHECKED.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberCheck {
    pub index: usize,
    pub inside_host: bool,
    pub proper: bool,
    pub nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub outcome: PairOutcome,
    pub matches_record: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub host_proper: bool,
    pub members: Vec<MemberCheck>,
    pub pairs: Vec<PairCheck>,
    /// Pairs whose disjointness only holds up to a search bound.
    pub downgraded: Vec<(usize, usize)>,
    pub failures: Vec<String>,
    pub maximality: String,
}

impl VerifyReport {
    /// 2 when a check failed or an overlap was found, 3 when only bounded
    /// evidence backs some pair, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.passed {
            2
        } else if !self.downgraded.is_empty() {
            3
        } else {
            0
        }
    }
}

fn host_contains(cert: &DisjointFamilyCertificate, x: &Element) -> bool {
    cert.host.predicate.contains(&cert.ambient, x).unwrap_or(false)
}

/// Re-derive every claim of the certificate from scratch.
pub fn verify_certificate(cert: &DisjointFamilyCertificate) -> VerifyReport {
    let mut failures = Vec::new();
    if cert.schema != CERTIFICATE_SCHEMA {
        failures.push(format!("unknown schema {}", cert.schema));
    }
    let host_proper = cert.host.predicate != HostPredicate::Whole
        && cert.host.predicate.contains(&cert.ambient, &cert.host.outside_witness) == Ok(false);
    if !host_proper {
        failures.push(format!(
            "host is not shown proper: {} is not an ambient element outside it",
            cert.host.outside_witness
        ));
    }
    if let Members::Powers { base, exponents, kind, .. } = &cert.members {
        if let Err(e) = check_kind(base, *kind).and_then(|_| validate_exponents(exponents)) {
            failures.push(e.to_string());
        }
    }
    let members = match cert.materialize() {
        Ok(m) => m,
        Err(e) => {
            failures.push(e.to_string());
            Vec::new()
        }
    };
    let mut checks = Vec::new();
    for (index, m) in members.iter().enumerate() {
        let generators: Vec<&Element> = m.sub.generator().into_iter().collect();
        let inside_host = !generators.is_empty() && generators.iter().all(|g| host_contains(cert, g));
        let nontrivial = generators
            .iter()
            .all(|g| is_idempotent(&cert.ambient, g) == Ok(false));
        let proper = host_contains(cert, &m.outside_witness)
            && m.sub.contains(&cert.ambient, &m.outside_witness).ok() == Some(Some(false));
        if !inside_host {
            failures.push(format!("member {index} is not inside the host"));
        }
        if !nontrivial {
            failures.push(format!("member {index} is generated by an idempotent"));
        }
        if !proper {
            failures.push(format!(
                "member {index}: {} does not show the member is proper in the host",
                m.outside_witness
            ));
        }
        checks.push(MemberCheck {
            index,
            inside_host,
            proper,
            nontrivial,
        });
    }
    let recorded: HashMap<(usize, usize), &PairOutcome> =
        cert.pair_proofs.iter().map(|p| ((p.i, p.j), &p.outcome)).collect();
    let mut pairs = Vec::new();
    let mut downgraded = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let outcome = match super::disjoint_up_to_idempotents(&cert.ambient, &members[i].sub, &members[j].sub, 1000)
            {
                Ok(o) => o,
                Err(e) => {
                    failures.push(format!("pair ({i}, {j}): {e}"));
                    continue;
                }
            };
            let matches_record = recorded.get(&(i, j)) == Some(&&outcome);
            match &outcome {
                PairOutcome::Overlap { witness } => {
                    failures.push(format!("members {i} and {j} share the non-idempotent element {witness}"))
                }
                PairOutcome::Bounded { .. } => downgraded.push((i, j)),
                _ => {}
            }
            if !matches_record {
                failures.push(format!("pair ({i}, {j}): recorded proof does not match the re-derived one"));
            }
            pairs.push(PairCheck {
                i,
                j,
                outcome,
                matches_record,
            });
        }
    }
    if recorded.len() != pairs.len() {
        failures.push(format!(
            "{} pair proofs recorded for {} pairs",
            recorded.len(),
            pairs.len()
        ));
    }
    VerifyReport {
        passed: failures.is_empty(),
        host_proper,
        members: checks,
        pairs,
        downgraded,
        failures,
        maximality: NOT_CHECKED.into(),
    }
}
