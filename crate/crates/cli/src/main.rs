//! `infini`: exact infinitesimal arithmetic, sequence classification,
//! Archimedean audits of ordered monoids and disjoint-family certificates.
//!
//! Exit codes: 0 success or supported, 2 counterexample or overlap found,
//! 3 only bounded evidence, 1 usage or parse error.

mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use infinitesimal::hyperspace::{
    build_family_powers, build_line_family, certificate_from_chain, finite_magma_scan, verify_certificate, Ambient,
    DisjointFamilyCertificate, Element, PowerKind, DEFAULT_SCAN_BOUND,
};
use infinitesimal::lc::{Classification, LCNumber};
use infinitesimal::monoid::archimedean::{check_bounded_orbit, check_unit_dominates, OrbitCheck, UnitCheck};
use infinitesimal::monoid::audit::{audit_claims, exit_code, AuditBounds, Verdict};
use infinitesimal::monoid::chain::{chain_is_increasing, construct_chain, verify_disjoint, Disjointness};
use infinitesimal::monoid::{MonoidInstance, REGISTERED};
use infinitesimal::seq::SeqError;
use infinitesimal::Rational;

use input::UsageError;

#[derive(Parser)]
#[command(name = "infini", version, about = "Exact workbench for infinitesimals and ordered monoids")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Infinitesimal,
    Infinite,
}

#[derive(Subcommand)]
enum Command {
    /// Zero, infinitesimal, appreciable or infinite.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Standard part of a finite value.
    Stdpart {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Expansion with every term of exponent up to the order.
    Series {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "0")]
        order: String,
    },
    /// Whether X lies on the scalar line through G.
    LineMember {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        line: String,
    },
    /// Whether two nonzero values span the same scalar line.
    SameLine {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Null, convergent, bounded-divergent or unbounded.
    SeqClassify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Pointwise reciprocal, or the least index where it is undefined.
    SeqInvert {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Audit the Archimedean claims on one instance, or on every registered one.
    MonoidAudit {
        name: Option<String>,
        #[arg(long)]
        instance: Option<String>,
        /// Largest multiple tried in searches.
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        #[arg(long, default_value_t = 1000)]
        sample: usize,
        #[arg(long, default_value_t = 1000)]
        pair_bound: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Check the unit form of the Archimedean condition for one unit.
    MonoidUnit {
        #[arg(long)]
        instance: String,
        #[arg(allow_hyphen_values = true)]
        u: String,
        /// Elements to reach; the standard sample when empty.
        #[arg(long, value_delimiter = ';')]
        sample: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        sample_size: usize,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Check whether the multiples of X stay below Y.
    MonoidOrbit {
        #[arg(long)]
        instance: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Build the chain of disjoint cyclic subgroups in a non-Archimedean instance.
    #[command(alias = "monoid-theorem41")]
    MonoidChain {
        #[arg(long, default_value = "lc-add")]
        instance: String,
        /// First generator; the instance's default positive element if absent.
        #[arg(long, allow_hyphen_values = true)]
        u1: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Pair bound for carriers without exact intersection.
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        /// Print the family as a disjoint-family certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Certificate for the lines through powers of a base.
    HyperBuildPowers {
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Comma-separated rational exponents, each at least 1.
        #[arg(long)]
        exponents: String,
        /// Defaults to the base's own classification.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Certificate for scalar lines through explicit generators.
    HyperBuildLines {
        /// `lc-additive` or `rational-scalars`.
        #[arg(long, default_value = "lc-additive")]
        ambient: String,
        #[arg(allow_hyphen_values = true)]
        generators: Vec<String>,
    },
    /// Re-verify a certificate read from a file (`@path`), stdin (`-`) or text.
    HyperVerify {
        certificate: String,
        /// Print the re-serialized certificate instead of the report.
        #[arg(long)]
        echo: bool,
    },
    /// Largest family of disjoint proper sub-magmas of a finite magma.
    HyperScan {
        /// Rows separated by `;`, e.g. `01;01`, or magma JSON.
        table: String,
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        bound: usize,
    },
}

/// What a command produced: text, a JSON document and the exit code.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

impl Outcome {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Outcome {
            text: text.into(),
            json,
            code: 0,
        }
    }

    fn with_code(mut self, code: i32) -> Self {
        self.code = code as u8;
        self
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports always serialize")
}

fn doc(schema: &str, body: Value) -> Value {
    let mut v = json!({ "schema": format!("infinitesimal/{schema}/v1") });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

fn lc_doc(v: &LCNumber) -> Value {
    json!({ "text": v.to_string(), "value": value(v) })
}

fn run(cmd: Command) -> Result<Outcome, UsageError> {
    match cmd {
        Command::Classify { expr } => {
            let v = input::lc(&expr)?;
            let c = v.classify();
            Ok(Outcome::ok(
                c.as_str(),
                doc(
                    "classify",
                    json!({
                        "input": lc_doc(&v),
                        "classification": c.as_str(),
                        "valuation": v.valuation().to_string(),
                        "in_monad": c.in_monad(),
                        "finite": c.is_finite(),
                    }),
                ),
            ))
        }
        Command::Stdpart { expr } => {
            let v = input::lc(&expr)?;
            let s = v.standard_part()?;
            Ok(Outcome::ok(
                s.to_string(),
                doc("stdpart", json!({ "input": lc_doc(&v), "standard_part": s.to_string() })),
            ))
        }
        Command::Series { expr, order } => {
            let v = input::lc(&expr)?;
            let order = input::rational(&order)?;
            let p = v.truncated_series(&order);
            let terms: Vec<[String; 2]> = p.terms().iter().map(|(e, c)| [e.to_string(), c.to_string()]).collect();
            Ok(Outcome::ok(
                p.to_string(),
                doc(
                    "series",
                    json!({ "input": lc_doc(&v), "order": order.to_string(), "terms": terms, "text": p.to_string() }),
                ),
            ))
        }
        Command::LineMember { x, line } => {
            let (x, g) = (input::lc(&x)?, input::lc(&line)?);
            if g.is_zero() {
                return Err(UsageError("the line generator must be nonzero".into()));
            }
            let ratio = if x.is_zero() {
                Some(Rational::from_integer(0.into()))
            } else {
                x.line_ratio(&g)?
            };
            let text = match &ratio {
                Some(c) => format!("member: x = {c} * ({g})"),
                None => "not a member".to_string(),
            };
            Ok(Outcome::ok(
                text,
                doc(
                    "line-member",
                    json!({
                        "x": lc_doc(&x),
                        "line": lc_doc(&g),
                        "member": ratio.is_some(),
                        "coefficient": ratio.map(|c| c.to_string()),
                    }),
                ),
            ))
        }
        Command::SameLine { a, b } => {
            let (a, b) = (input::lc(&a)?, input::lc(&b)?);
            let same = a.same_line(&b)?;
            Ok(Outcome::ok(
                same.to_string(),
                doc("same-line", json!({ "a": lc_doc(&a), "b": lc_doc(&b), "same_line": same })),
            ))
        }
        Command::SeqClassify { expr } => {
            let s = input::seq(&expr)?;
            let c = s.classify();
            let limits: Vec<String> = s.limits().iter().map(|l| format!("{l:?}")).collect();
            let limit = match &c {
                infinitesimal::seq::SeqClass::Convergent(l) => Some(l.to_string()),
                infinitesimal::seq::SeqClass::Null => Some("0".to_string()),
                _ => None,
            };
            Ok(Outcome::ok(
                c.to_string(),
                doc(
                    "seq-classify",
                    json!({
                        "input": { "text": s.to_string(), "value": value(&s) },
                        "class": c.name(),
                        "limit": limit,
                        "branch_limits": limits,
                    }),
                ),
            ))
        }
        Command::SeqInvert { expr } => {
            let s = input::seq(&expr)?;
            let input = json!({ "text": s.to_string(), "value": value(&s) });
            Ok(match s.pointwise_invert() {
                Ok(inv) => Outcome::ok(
                    inv.to_string(),
                    doc(
                        "seq-invert",
                        json!({ "input": input, "result": "inverted", "inverse": { "text": inv.to_string(), "value": value(&inv), "class": inv.classify().name() } }),
                    ),
                ),
                Err(SeqError::UndefinedAt(n)) => Outcome::ok(
                    format!("undefined at n = {n}"),
                    doc("seq-invert", json!({ "input": input, "result": "undefined-at", "n": n })),
                )
                .with_code(2),
                Err(e) => return Err(e.into()),
            })
        }
        Command::MonoidAudit {
            name,
            instance,
            bound,
            sample,
            pair_bound,
            depth,
        } => {
            let names: Vec<String> = match name.or(instance) {
                Some(n) => vec![n],
                None => REGISTERED.iter().map(|s| s.to_string()).collect(),
            };
            let bounds = AuditBounds {
                sample_size: sample,
                n_bound: bound,
                pair_bound,
                chain_depth: depth,
            };
            let mut reports = Vec::new();
            for n in &names {
                reports.extend(audit_claims(&MonoidInstance::by_name(n)?, bounds)?);
            }
            let mut text = String::new();
            for r in &reports {
                let verdict = match &r.verdict {
                    Verdict::Supported => "supported".to_string(),
                    Verdict::Counterexample { witnesses } => {
                        let w: Vec<String> = witnesses.iter().map(|w| format!("{} = {}", w.role, w.element)).collect();
                        format!("COUNTEREXAMPLE ({})", w.join(", "))
                    }
                    Verdict::BoundedEvidence { .. } => "bounded evidence only".to_string(),
                };
                text.push_str(&format!("{} {}: {verdict}\n", r.instance, r.claim.as_str()));
                for line in &r.transcript {
                    text.push_str(&format!("    {line}\n"));
                }
            }
            let code = exit_code(&reports);
            Ok(Outcome::ok(text.trim_end(), doc("monoid-audit", json!({ "bounds": value(&bounds), "reports": value(&reports) })))
                .with_code(code))
        }
        Command::MonoidUnit {
            instance,
            u,
            sample,
            sample_size,
            bound,
        } => {
            let inst = MonoidInstance::by_name(&instance)?;
            let u = input::element(&inst, &u)?;
            let sample = if sample.is_empty() {
                inst.standard_sample(sample_size)
            } else {
                sample.iter().map(|s| input::element(&inst, s)).collect::<Result<_, _>>()?
            };
            let r = check_unit_dominates(&inst, &u, &sample, bound)?;
            let code = if !r.holds() {
                if r.certified() {
                    2
                } else {
                    3
                }
            } else if r.certified() {
                0
            } else {
                3
            };
            let text = match &r {
                UnitCheck::WitnessHolds {
                    certified,
                    sample_size,
                    largest_n,
                } => format!(
                    "{u} reaches all {sample_size} sampled elements (largest n = {largest_n}, {})",
                    if *certified { "exact" } else { "bounded search" }
                ),
                UnitCheck::FailsAt { x, certified } => format!(
                    "{u} does not reach {x} ({})",
                    if *certified { "no multiple ever does" } else { "within the bound" }
                ),
            };
            Ok(Outcome::ok(text, doc("monoid-unit", json!({ "instance": instance, "u": value(&u), "check": value(&r) })))
                .with_code(code))
        }
        Command::MonoidOrbit { instance, x, y, bound } => {
            let inst = MonoidInstance::by_name(&instance)?;
            let (x, y) = (input::element(&inst, &x)?, input::element(&inst, &y)?);
            let r = check_bounded_orbit(&inst, &x, &y, bound)?;
            let (code, text) = match &r {
                OrbitCheck::BoundedOrbitEvidence {
                    certificate: Some(why),
                    ..
                } => (0, format!("every multiple of {x} stays below {y}: {why}")),
                OrbitCheck::BoundedOrbitEvidence { bound, certificate: None } => {
                    (3, format!("n·{x} ≤ {y} for every n ≤ {bound}, with no proof beyond"))
                }
                OrbitCheck::EscapesAt { n } => (0, format!("{n}·{x} exceeds {y}")),
            };
            Ok(Outcome::ok(
                text,
                doc("monoid-orbit", json!({ "instance": instance, "x": value(&x), "y": value(&y), "check": value(&r) })),
            )
            .with_code(code))
        }
        Command::MonoidChain {
            instance,
            u1,
            depth,
            bound,
            certificate,
        } => {
            let inst = MonoidInstance::by_name(&instance)?;
            let u1 = match u1 {
                Some(t) => input::element(&inst, &t)?,
                None => inst
                    .default_positive()
                    .ok_or_else(|| UsageError(format!("{instance} has no positive element")))?,
            };
            let family = construct_chain(&inst, &u1, depth)?;
            let increasing = chain_is_increasing(&inst, &family)?;
            let verdicts = verify_disjoint(&family, bound)?;
            let overlap = verdicts.iter().any(|p| matches!(p.verdict, Disjointness::Overlap { .. }));
            let bounded = verdicts.iter().any(|p| matches!(p.verdict, Disjointness::DisjointBounded { .. }));
            let code = if overlap || !increasing {
                2
            } else if bounded {
                3
            } else {
                0
            };
            if certificate {
                let cert = certificate_from_chain(&family)?;
                return Ok(Outcome::ok(cert.to_json(), value(&cert)).with_code(code));
            }
            let mut text = String::new();
            for (i, s) in family.steps.iter().enumerate() {
                text.push_str(&format!("u{} = {}\nx{} = {}\n", i + 1, s.generator, i + 1, s.dominator));
            }
            text.push_str(&format!("chain strictly increasing: {increasing}\n"));
            for p in &verdicts {
                let v = match &p.verdict {
                    Disjointness::ExactDisjoint { reason } => format!("exact-disjoint ({reason})"),
                    Disjointness::DisjointBounded { bound } => format!("disjoint up to {bound}"),
                    Disjointness::Overlap { common, n_i, n_j } => format!("overlap: {n_i}*u_i = {n_j}*u_j = {common}"),
                };
                text.push_str(&format!("pair ({}, {}): {v}\n", p.i + 1, p.j + 1));
            }
            Ok(Outcome::ok(
                text.trim_end(),
                doc(
                    "monoid-chain",
                    json!({ "family": value(&family), "increasing": increasing, "pairs": value(&verdicts) }),
                ),
            )
            .with_code(code))
        }
        Command::HyperBuildPowers { base, exponents, kind } => {
            let base = input::lc(&base)?;
            let exponents = input::rational_list(&exponents)?;
            let kind = match kind {
                Some(KindArg::Infinitesimal) => PowerKind::Infinitesimal,
                Some(KindArg::Infinite) => PowerKind::Infinite,
                None if base.classify() == Classification::Infinite => PowerKind::Infinite,
                None => PowerKind::Infinitesimal,
            };
            let cert = build_family_powers(&base, &exponents, kind)?;
            Ok(Outcome::ok(cert.to_json(), value(&cert)))
        }
        Command::HyperBuildLines { ambient, generators } => {
            let (ambient, gens) = match ambient.as_str() {
                "lc-additive" => (
                    Ambient::LcAdditive,
                    generators.iter().map(|g| input::lc(g).map(Element::Lc)).collect::<Result<Vec<_>, _>>()?,
                ),
                "rational-scalars" => (
                    Ambient::RationalScalars,
                    generators
                        .iter()
                        .map(|g| input::rational(&input::read_arg(g)?).map(Element::Rational))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                other => return Err(UsageError(format!("unknown ambient {other}"))),
            };
            match build_line_family(&ambient, &gens) {
                Ok(cert) => Ok(Outcome::ok(cert.to_json(), value(&cert))),
                Err(e) => Ok(Outcome::ok(
                    format!("no family: {e}"),
                    doc("hyper-build-lines", json!({ "ambient": value(&ambient), "built": false, "reason": e.to_string() })),
                )
                .with_code(2)),
            }
        }
        Command::HyperVerify { certificate, echo } => {
            let text = input::read_arg(&certificate)?;
            let cert: DisjointFamilyCertificate = serde_json::from_str(&text)?;
            let report = verify_certificate(&cert);
            let code = report.exit_code();
            if echo {
                return Ok(Outcome::ok(cert.to_json(), value(&cert)).with_code(code));
            }
            let mut out = format!(
                "{}\nhost proper: {}\nmembers: {}\npairs checked: {}\nmaximality: {}",
                if report.passed { "certificate verified" } else { "certificate REJECTED" },
                report.host_proper,
                report.members.len(),
                report.pairs.len(),
                report.maximality
            );
            for f in &report.failures {
                out.push_str(&format!("\nfailure: {f}"));
            }
            for (i, j) in &report.downgraded {
                out.push_str(&format!("\npair ({i}, {j}) rests on bounded evidence"));
            }
            Ok(Outcome::ok(out, doc("hyper-verify", value(&report))).with_code(code))
        }
        Command::HyperScan { table, bound } => {
            let m = input::magma(&table)?;
            let r = finite_magma_scan(&m, bound)?;
            let sets = |v: &[Vec<usize>]| -> String {
                v.iter()
                    .map(|s| format!("{{{}}}", s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let text = format!(
                "sub-magmas: {}\nlargest disjoint family ({}): {}\nunion: {:?}\nnote: {}",
                r.sub_magmas.len(),
                r.family_size,
                sets(&r.family),
                r.union,
                r.note
            );
            Ok(Outcome::ok(text, doc("hyper-scan", value(&r))))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).unwrap()
            } else {
                out.text
            };
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(out.code)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
