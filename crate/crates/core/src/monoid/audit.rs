//! Auditing the implications between the Archimedean conditions and the
//! existence of disjoint cyclic families on one registered instance.
//!
//! Every verdict is one of three kinds so that a finite search never poses
//! as a proof: supported (by exact facts), a counterexample with replayable
//! witnesses, or bounded evidence with the bounds that were used.

use serde::{Deserialize, Serialize};

use super::archimedean::{check_unit_dominates, UnitCheck};
use super::chain::{chain_is_increasing, construct_chain, verify_disjoint, Disjointness};
use super::{Fact, MonoidElement, MonoidError, MonoidInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimId {
    /// A unit dominating everything rules out nonzero bounded orbits.
    ArchimedeanForbidsBoundedOrbits,
    /// On a linear order, no nonzero bounded orbit gives a dominating unit.
    NoBoundedOrbitsGivesArchimedean,
    /// Without a dominating unit there is an infinite disjoint cyclic family.
    NonArchimedeanIsHyperspace,
    /// Without such a family, a dominating unit exists.
    NonHyperspaceIsArchimedean,
}

impl ClaimId {
    pub const ALL: [ClaimId; 4] = [
        ClaimId::ArchimedeanForbidsBoundedOrbits,
        ClaimId::NoBoundedOrbitsGivesArchimedean,
        ClaimId::NonArchimedeanIsHyperspace,
        ClaimId::NonHyperspaceIsArchimedean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::ArchimedeanForbidsBoundedOrbits => "archimedean-forbids-bounded-orbits",
            ClaimId::NoBoundedOrbitsGivesArchimedean => "no-bounded-orbits-gives-archimedean",
            ClaimId::NonArchimedeanIsHyperspace => "non-archimedean-is-hyperspace",
            ClaimId::NonHyperspaceIsArchimedean => "non-hyperspace-is-archimedean",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditBounds {
    pub sample_size: usize,
    pub n_bound: u64,
    pub pair_bound: u64,
    pub chain_depth: usize,
}

impl Default for AuditBounds {
    fn default() -> Self {
        AuditBounds {
            sample_size: 1000,
            n_bound: 10_000,
            pair_bound: 1000,
            chain_depth: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub role: String,
    pub element: MonoidElement,
}

impl Witness {
    fn new(role: &str, element: MonoidElement) -> Self {
        Witness {
            role: role.into(),
            element,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Verdict {
    Supported,
    Counterexample { witnesses: Vec<Witness> },
    BoundedEvidence { bounds: AuditBounds },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub instance: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub transcript: Vec<String>,
}

impl ClaimReport {
    pub fn witness(&self, role: &str) -> Option<&MonoidElement> {
        match &self.verdict {
            Verdict::Counterexample { witnesses } => witnesses.iter().find(|w| w.role == role).map(|w| &w.element),
            _ => None,
        }
    }
}

/// 2 when any report is a counterexample, else 3 when any rests on bounded
/// evidence, else 0.
pub fn exit_code(reports: &[ClaimReport]) -> i32 {
    let has = |f: fn(&Verdict) -> bool| reports.iter().any(|r| f(&r.verdict));
    if has(|v| matches!(v, Verdict::Counterexample { .. })) {
        2
    } else if has(|v| matches!(v, Verdict::BoundedEvidence { .. })) {
        3
    } else {
        0
    }
}

struct Auditor<'a> {
    inst: &'a MonoidInstance,
    bounds: AuditBounds,
    sample: Vec<MonoidElement>,
}

fn fact_line(what: &str, f: &Fact) -> String {
    match f {
        Fact::Holds(why) => format!("{what} holds: {why}"),
        Fact::Fails(why) => format!("{what} fails: {why}"),
        Fact::Unknown => format!("{what} is not decided for this carrier"),
    }
}

impl Auditor<'_> {
    fn report(&self, claim: ClaimId, verdict: Verdict, transcript: Vec<String>) -> ClaimReport {
        ClaimReport {
            claim,
            instance: self.inst.name().to_string(),
            verdict,
            transcript,
        }
    }

    fn bounded(&self) -> Verdict {
        Verdict::BoundedEvidence { bounds: self.bounds }
    }

    /// Run the unit check with the carrier's candidate unit.
    fn unit_evidence(&self, log: &mut Vec<String>) -> Result<Option<(MonoidElement, UnitCheck)>, MonoidError> {
        let Some((u, _)) = self.inst.archimedean_unit() else {
            log.push("no candidate unit is known".into());
            return Ok(None);
        };
        let r = check_unit_dominates(self.inst, &u, &self.sample, self.bounds.n_bound)?;
        log.push(match &r {
            UnitCheck::WitnessHolds {
                certified,
                sample_size,
                largest_n,
            } => format!(
                "u = {u} reaches all {sample_size} sampled elements (largest n = {largest_n}, certified = {certified})"
            ),
            UnitCheck::FailsAt { x, certified } => {
                format!("u = {u} does not reach x = {x} (certified = {certified})")
            }
        });
        Ok(Some((u, r)))
    }

    fn orbit_counterexample(&self, log: &mut Vec<String>) -> Result<Option<(MonoidElement, MonoidElement)>, MonoidError> {
        let mut nonneg = Vec::new();
        for x in &self.sample {
            if self.inst.is_nonnegative(x)? {
                nonneg.push(x);
            }
        }
        let mut examined = 0u64;
        'search: for x in nonneg.iter().filter(|x| !self.inst.is_neutral(x)) {
            for y in &nonneg {
                if examined >= self.bounds.pair_bound {
                    break 'search;
                }
                examined += 1;
                if let Some(why) = self.inst.certify_bounded_orbit(x, y)? {
                    log.push(format!("x = {x}, y = {y}: certified bounded orbit ({why})"));
                    return Ok(Some(((*x).clone(), (*y).clone())));
                }
            }
        }
        log.push(format!("no certified nonzero bounded orbit among {examined} sampled pairs"));
        Ok(None)
    }

    fn archimedean_forbids_bounded_orbits(&self) -> Result<ClaimReport, MonoidError> {
        let claim = ClaimId::ArchimedeanForbidsBoundedOrbits;
        let unit = self.inst.unit_condition();
        let mut log = vec![fact_line("the unit condition", &unit)];
        if !matches!(unit, Fact::Holds(_)) {
            let verdict = if matches!(unit, Fact::Fails(_)) {
                log.push("hypothesis not met, so the implication holds vacuously".into());
                Verdict::Supported
            } else {
                self.bounded()
            };
            return Ok(self.report(claim, verdict, log));
        }
        let u = self.unit_evidence(&mut log)?.map(|(u, _)| u);
        if let Some((x, y)) = self.orbit_counterexample(&mut log)? {
            let mut witnesses = Vec::new();
            if let Some(u) = u {
                witnesses.push(Witness::new("u", u));
            }
            witnesses.push(Witness::new("x", x));
            witnesses.push(Witness::new("y", y));
            return Ok(self.report(claim, Verdict::Counterexample { witnesses }, log));
        }
        let orbit = self.inst.orbit_condition();
        log.push(fact_line("the orbit condition", &orbit));
        let verdict = match orbit {
            Fact::Holds(_) => Verdict::Supported,
            _ => self.bounded(),
        };
        Ok(self.report(claim, verdict, log))
    }

    fn no_bounded_orbits_gives_archimedean(&self) -> Result<ClaimReport, MonoidError> {
        let claim = ClaimId::NoBoundedOrbitsGivesArchimedean;
        if !self.inst.is_linear() {
            let log = vec!["the order is not linear, so the hypothesis is not met".into()];
            return Ok(self.report(claim, Verdict::Supported, log));
        }
        let orbit = self.inst.orbit_condition();
        let mut log = vec![fact_line("the orbit condition", &orbit)];
        match orbit {
            Fact::Fails(_) => {
                log.push("hypothesis not met, so the implication holds vacuously".into());
                return Ok(self.report(claim, Verdict::Supported, log));
            }
            Fact::Unknown => return Ok(self.report(claim, self.bounded(), log)),
            Fact::Holds(_) => {}
        }
        let found = self.unit_evidence(&mut log)?;
        let unit = self.inst.unit_condition();
        log.push(fact_line("the unit condition", &unit));
        let verdict = match (found, unit) {
            (Some((_, r)), Fact::Holds(_)) if r.holds() => Verdict::Supported,
            (Some((u, UnitCheck::FailsAt { x, certified: true })), Fact::Fails(_)) => Verdict::Counterexample {
                witnesses: vec![Witness::new("u", u), Witness::new("x", x)],
            },
            _ => self.bounded(),
        };
        Ok(self.report(claim, verdict, log))
    }

    fn non_archimedean_is_hyperspace(&self) -> Result<ClaimReport, MonoidError> {
        let claim = ClaimId::NonArchimedeanIsHyperspace;
        if !self.inst.is_linear() {
            let log = vec!["the order is not linear, so the hypothesis is not met".into()];
            return Ok(self.report(claim, Verdict::Supported, log));
        }
        let unit = self.inst.unit_condition();
        let mut log = vec![fact_line("the unit condition", &unit)];
        match unit {
            Fact::Holds(_) => {
                log.push("hypothesis not met, so the implication holds vacuously".into());
                return Ok(self.report(claim, Verdict::Supported, log));
            }
            Fact::Unknown => return Ok(self.report(claim, self.bounded(), log)),
            Fact::Fails(_) => {}
        }
        let Some(u1) = self.inst.default_positive() else {
            log.push("no positive element to start the chain".into());
            return Ok(self.report(claim, self.bounded(), log));
        };
        let family = match construct_chain(self.inst, &u1, self.bounds.chain_depth) {
            Ok(f) => f,
            Err(MonoidError::OracleMissing(_)) => {
                log.push("no dominator oracle, the family cannot be built".into());
                return Ok(self.report(claim, self.bounded(), log));
            }
            Err(e) => return Err(e),
        };
        let increasing = chain_is_increasing(self.inst, &family)?;
        log.push(format!(
            "built {} generators from u1 = {u1}; chain strictly increasing: {increasing}",
            family.len()
        ));
        let verdicts = verify_disjoint(&family, self.bounds.pair_bound)?;
        let mut exact = increasing;
        for p in &verdicts {
            match &p.verdict {
                Disjointness::ExactDisjoint { reason } => {
                    log.push(format!("pair ({}, {}): disjoint, {reason}", p.i, p.j));
                }
                Disjointness::DisjointBounded { bound } => {
                    log.push(format!("pair ({}, {}): no overlap up to {bound}", p.i, p.j));
                    exact = false;
                }
                Disjointness::Overlap { common, .. } => {
                    log.push(format!("pair ({}, {}): overlap at {common}", p.i, p.j));
                    let gens: Vec<_> = family.generators().cloned().collect();
                    let witnesses = vec![
                        Witness::new("u_i", gens[p.i].clone()),
                        Witness::new("u_j", gens[p.j].clone()),
                        Witness::new("common", common.clone()),
                    ];
                    return Ok(self.report(claim, Verdict::Counterexample { witnesses }, log));
                }
            }
        }
        log.push("the chain continues with the same step, so the family is infinite".into());
        let verdict = if exact { Verdict::Supported } else { self.bounded() };
        Ok(self.report(claim, verdict, log))
    }

    fn non_hyperspace_is_archimedean(&self) -> Result<ClaimReport, MonoidError> {
        let claim = ClaimId::NonHyperspaceIsArchimedean;
        if !self.inst.is_linear() {
            let log = vec!["the order is not linear, so the hypothesis is not met".into()];
            return Ok(self.report(claim, Verdict::Supported, log));
        }
        let mut log = Vec::new();
        if let Some(u1) = self.inst.default_positive() {
            match construct_chain(self.inst, &u1, self.bounds.chain_depth.max(3)) {
                Ok(family) => {
                    log.push(format!(
                        "a family of {} disjoint cyclic subgroups exists, so the hypothesis is not met",
                        family.len()
                    ));
                    return Ok(self.report(claim, Verdict::Supported, log));
                }
                Err(MonoidError::OracleMissing(_)) => {
                    log.push("no disjoint family can be built: the carrier has no dominator".into())
                }
                Err(e) => return Err(e),
            }
        } else {
            log.push("the carrier has no positive element".into());
        }
        let found = self.unit_evidence(&mut log)?;
        let unit = self.inst.unit_condition();
        log.push(fact_line("the unit condition", &unit));
        let verdict = match (found, unit) {
            (Some((_, r)), Fact::Holds(_)) if r.holds() => Verdict::Supported,
            _ => self.bounded(),
        };
        Ok(self.report(claim, verdict, log))
    }
}

/// Audit all four claims on one instance.
pub fn audit_claims(inst: &MonoidInstance, bounds: AuditBounds) -> Result<Vec<ClaimReport>, MonoidError> {
    let a = Auditor {
        inst,
        bounds,
        sample: inst.standard_sample(bounds.sample_size),
    };
    Ok(vec![
        a.archimedean_forbids_bounded_orbits()?,
        a.no_bounded_orbits_gives_archimedean()?,
        a.non_archimedean_is_hyperspace()?,
        a.non_hyperspace_is_archimedean()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> AuditBounds {
        AuditBounds {
            sample_size: 200,
            n_bound: 1000,
            pair_bound: 200,
            chain_depth: 3,
        }
    }

    #[test]
    fn nat_supports_everything() {
        let r = audit_claims(&MonoidInstance::nat_add(), small()).unwrap();
        assert!(r.iter().all(|c| c.verdict == Verdict::Supported), "{r:#?}");
        assert_eq!(exit_code(&r), 0);
    }

    #[test]
    fn lex_counterexample_is_replayable() {
        let inst = MonoidInstance::lex(2);
        let r = audit_claims(&inst, small()).unwrap();
        let first = &r[0];
        assert_eq!(first.claim, ClaimId::ArchimedeanForbidsBoundedOrbits);
        assert_eq!(exit_code(&r), 2);
        let json = serde_json::to_string(first).unwrap();
        let back: ClaimReport = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, first);
        let (u, x, y) = (
            back.witness("u").unwrap(),
            back.witness("x").unwrap(),
            back.witness("y").unwrap(),
        );
        assert_eq!(u, &MonoidElement::lex([1, 0]));
        assert_eq!(x, &MonoidElement::lex([0, 1]));
        assert_eq!(y, &MonoidElement::lex([1, 0]));
        assert_eq!(inst.decide_reaches(u, &MonoidElement::lex([7, -3])).unwrap(), Some(true));
        assert!(inst.certify_bounded_orbit(x, y).unwrap().is_some());
    }

    #[test]
    fn lc_supports_the_chain_claim() {
        let r = audit_claims(&MonoidInstance::lc_add(), small()).unwrap();
        let chain = r.iter().find(|c| c.claim == ClaimId::NonArchimedeanIsHyperspace).unwrap();
        assert_eq!(chain.verdict, Verdict::Supported);
        assert_eq!(exit_code(&r), 0);
    }

    #[test]
    fn claim_ids_serialize_by_content() {
        for c in ClaimId::ALL {
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.as_str()));
        }
    }
}
