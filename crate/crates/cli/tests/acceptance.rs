//! Acceptance suite: one PASS/FAIL line per criterion, then a summary.
//!
//! Every count, bound and time limit is pinned below. Random inputs come
//! from a deterministic proptest runner, so a run is reproducible.

use std::process::Command;
use std::time::{Duration, Instant};

use infinitesimal::expr::{parse, BinOp, Expr, ExprKind};
use infinitesimal::hyperspace::{
    build_family_powers, build_line_family, certificate_from_chain, finite_magma_scan, verify_certificate, Ambient,
    DisjointFamilyCertificate, Element, HostPredicate, HyperError, PowerKind, DEFAULT_SCAN_BOUND,
};
use infinitesimal::lc::{Classification, LCNumber, PuiseuxPoly};
use infinitesimal::monoid::audit::{audit_claims, AuditBounds, ClaimId, Verdict};
use infinitesimal::monoid::chain::{chain_is_increasing, construct_chain, verify_disjoint, Disjointness};
use infinitesimal::monoid::{MonoidElement, MonoidInstance};
use infinitesimal::poly::RationalExt;
use infinitesimal::seq::{SeqClass, SeqError, SymbolicSequence};
use infinitesimal::{BigInt, Rational};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use serde_json::Value;

const TOTAL_BUDGET: Duration = Duration::from_secs(60);
const CHAIN_BUDGET: Duration = Duration::from_secs(5);
const FIELD_SAMPLES: usize = 1000;
const LINE_PAIRS: usize = 200;
const EMBED_PAIRS: usize = 100;
const EXPR_SAMPLES: usize = 1000;
const CHAIN_DEPTH: usize = 10;
const CHAIN_PAIRS: usize = 45;
const POWER_PAIRS: usize = 15;
const MAGMA_COUNT: usize = 1 + 16 + 19683;

type Check = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut TestRunner) -> Check>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_pair(n, d)
}

fn zero() -> Rational {
    Rational::from_integer_i64(0)
}

/// `n` draws from a strategy with a fixed seed.
fn sample<S: Strategy>(runner: &mut TestRunner, s: S, n: usize) -> Vec<S::Value> {
    (0..n).map(|_| s.new_tree(runner).unwrap().current()).collect()
}

fn raw_poly() -> impl Strategy<Value = PuiseuxPoly> {
    prop::collection::vec(((-6i64..=6, 1i64..=3), (-4i64..=4, 1i64..=2)), 1..=3)
        .prop_map(|ts| PuiseuxPoly::from_terms(ts.into_iter().map(|((cn, cd), (en, ed))| (q(en, ed), q(cn, cd)))))
}

fn lc() -> impl Strategy<Value = LCNumber> {
    (raw_poly(), raw_poly().prop_filter("nonzero", |p| !p.is_zero()))
        .prop_map(|(n, d)| LCNumber::from_fraction(n, d).unwrap())
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_infini")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Move `x` into the monad by multiplying with a high enough power of ε.
fn into_monad(x: &LCNumber) -> LCNumber {
    match x.valuation().finite() {
        Some(v) if *v <= zero() => x * &LCNumber::eps().pow(&(Rational::from_integer_i64(1) - v)).unwrap(),
        _ => x.clone(),
    }
}

/// Move `x` into the finite part.
fn into_finite(x: &LCNumber) -> LCNumber {
    match x.valuation().finite() {
        Some(v) if *v < zero() => x * &LCNumber::eps().pow(&-v).unwrap(),
        _ => x.clone(),
    }
}

fn criterion_1(runner: &mut TestRunner) -> Check {
    let eps = LCNumber::eps();
    let expected = [
        (LCNumber::zero(), Classification::Zero),
        (eps.clone(), Classification::Infinitesimal),
        (LCNumber::one(), Classification::Appreciable),
        (eps.recip().unwrap(), Classification::Infinite),
    ];
    for (x, c) in &expected {
        ensure(x.classify() == *c, || format!("{x} classified {}", x.classify()))?;
    }
    let amb = Ambient::LcAdditive;
    let mon = |x: &LCNumber| HostPredicate::Monad.contains(&amb, &Element::Lc(x.clone())).unwrap();
    let fin = |x: &LCNumber| HostPredicate::FinitePart.contains(&amb, &Element::Lc(x.clone())).unwrap();
    let pairs = sample(runner, (lc(), lc()), FIELD_SAMPLES);
    for (a, b) in &pairs {
        let (ma, mb) = (into_monad(a), into_monad(b));
        ensure(mon(&ma) && mon(&mb), || format!("{ma} or {mb} not in the monad"))?;
        ensure(mon(&(&ma + &mb)) && mon(&(&ma - &mb)), || format!("monad not closed at {ma}, {mb}"))?;
        let (fa, fb) = (into_finite(a), into_finite(b));
        ensure(fin(&fa) && fin(&fb), || format!("{fa} or {fb} not finite"))?;
        ensure(fin(&(&fa + &fb)) && fin(&(&fa - &fb)), || format!("finite part not closed at {fa}, {fb}"))?;
    }
    // strict inclusions {0} ⊊ Mon(0) ⊊ Fin(0) ⊊ field
    ensure(mon(&eps) && !eps.is_zero(), || "ε does not separate {0} from the monad".into())?;
    ensure(fin(&LCNumber::one()) && !mon(&LCNumber::one()), || "1 does not separate monad and finite part".into())?;
    ensure(!fin(&eps.recip().unwrap()), || "1/ε lies in the finite part".into())?;
    Ok(format!("4 classes; {FIELD_SAMPLES} closed pairs per set; witnesses ε, 1, 1/ε"))
}

fn criterion_2(runner: &mut TestRunner) -> Check {
    let triples = sample(runner, (lc(), lc(), lc()), FIELD_SAMPLES);
    for (a, b, c) in &triples {
        let ctx = || format!("a = {a}, b = {b}, c = {c}");
        ensure(&(a + b) + c == a + &(b + c), || format!("+ not associative: {}", ctx()))?;
        ensure(a + b == b + a, || format!("+ not commutative: {}", ctx()))?;
        ensure(&(a * b) * c == a * &(b * c), || format!("* not associative: {}", ctx()))?;
        ensure(a * b == b * a, || format!("* not commutative: {}", ctx()))?;
        ensure(a * &(b + c) == &(a * b) + &(a * c), || format!("not distributive: {}", ctx()))?;
        ensure((a + &(-a)).is_zero(), || format!("no additive inverse: {}", ctx()))?;
        if !a.is_zero() {
            ensure(a * &a.recip().unwrap() == LCNumber::one(), || format!("no inverse: {}", ctx()))?;
        }
        if !b.is_zero() {
            ensure((a * b).checked_div(b).unwrap() == *a, || format!("(a*b)/b != a: {}", ctx()))?;
        }
        let trichotomy = u8::from(a < b) + u8::from(a == b) + u8::from(a > b);
        ensure(trichotomy == 1, || format!("trichotomy: {}", ctx()))?;
        if a < b {
            ensure(a + c < b + c, || format!("order not translation invariant: {}", ctx()))?;
        }
        if a.is_positive() && b.is_positive() {
            ensure((a * b).is_positive(), || format!("positive cone not closed: {}", ctx()))?;
        }
        if a <= b && b <= c {
            ensure(a <= c, || format!("order not transitive: {}", ctx()))?;
        }
    }
    let finite: Vec<LCNumber> = sample(runner, lc(), FIELD_SAMPLES).iter().map(into_finite).collect();
    for x in &finite {
        let oracle = x.truncated_series(&zero()).coeff_at(&zero());
        let sp = x.standard_part().map_err(|e| format!("{x}: {e}"))?;
        ensure(sp == oracle, || format!("standard part of {x} is {sp}, series gives {oracle}"))?;
    }
    Ok(format!("{FIELD_SAMPLES} triples; {FIELD_SAMPLES} standard parts match the series"))
}

/// `a = c·b` solved without the library's division: exponent comparison on
/// monomials, back-multiplication by the ratio of leading coefficients
/// otherwise.
fn independent_ratio(a: &LCNumber, b: &LCNumber) -> Option<Rational> {
    if let (Some((ea, ca)), Some((eb, cb))) = (a.is_monomial(), b.is_monomial()) {
        return (ea == eb).then(|| ca / cb);
    }
    let lead = |x: &LCNumber| x.numerator().leading_coeff().unwrap() / x.denominator().leading_coeff().unwrap();
    let c = lead(a) / lead(b);
    (b.scale(&c) == *a).then_some(c)
}

fn criterion_3(runner: &mut TestRunner) -> Check {
    let nonzero = || lc().prop_filter("nonzero", |x: &LCNumber| !x.is_zero());
    let strat = (nonzero(), nonzero(), (-9i64..=9).prop_filter("nonzero", |c| *c != 0), 1i64..=5, any::<bool>());
    let mut related_count = 0;
    for (a, other, c, d, related) in sample(runner, strat, LINE_PAIRS) {
        let b = if related { a.scale(&q(c, d)) } else { other };
        related_count += usize::from(related);
        let expected = independent_ratio(&a, &b).is_some();
        let got = a.same_line(&b).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("same_line({a}, {b}) = {got}, solver says {expected}"))?;
        ensure(!related || got, || format!("{b} was built on the line of {a}"))?;
    }
    let exponents = vec![q(1, 1), q(5, 4), q(3, 2), q(2, 1), q(7, 2), q(5, 1)];
    for (base, kind) in [(LCNumber::eps(), PowerKind::Infinitesimal), (LCNumber::eps().recip().unwrap(), PowerKind::Infinite)] {
        let cert = build_family_powers(&base, &exponents, kind).map_err(|e| e.to_string())?;
        let report = verify_certificate(&cert);
        let exact = report.pairs.iter().filter(|p| p.outcome.is_exact_disjoint()).count();
        ensure(report.passed && exact == POWER_PAIRS, || {
            format!("base {base}: {exact}/{POWER_PAIRS} exact, failures {:?}", report.failures)
        })?;
    }
    Ok(format!(
        "{LINE_PAIRS} pairs ({related_count} on a common line); {POWER_PAIRS}/{POWER_PAIRS} exact for ε and 1/ε"
    ))
}

fn criterion_4() -> Check {
    let gens = [Element::Rational(q(1, 1)), Element::Rational(q(-3, 7))];
    match build_line_family(&Ambient::RationalScalars, &gens) {
        Err(HyperError::NoProperFamily(why)) if why.contains("every nonzero line is the whole carrier") => {}
        other => return Err(format!("expected a failure naming the whole carrier, got {other:?}")),
    }
    let (code, out, _) = run_cli(&["hyper-build-lines", "--ambient", "rational-scalars", "1", "2"]);
    ensure(code == 2 && out.contains("every nonzero line is the whole carrier"), || {
        format!("cli exit {code}: {out}")
    })?;
    Ok("construction refused: every nonzero line is the whole carrier".into())
}

fn criterion_5(runner: &mut TestRunner) -> Check {
    let alt = SymbolicSequence::periodic(vec![q(1, 1), q(-1, 1)]).unwrap();
    let witnesses = [
        (SymbolicSequence::zero(), "null"),
        (SymbolicSequence::embed(q(1, 1)), "convergent"),
        (alt, "bounded-divergent"),
        (SymbolicSequence::index(), "unbounded"),
    ];
    for (s, name) in &witnesses {
        ensure(s.classify().name() == *name, || format!("{s} is {}", s.classify()))?;
    }
    let r = (-50i64..=50, 1i64..=12).prop_map(|(n, d)| q(n, d));
    for (x, y) in sample(runner, (r.clone(), r), EMBED_PAIRS) {
        let (ex, ey) = (SymbolicSequence::embed(x.clone()), SymbolicSequence::embed(y.clone()));
        ensure(ex.add(&ey) == SymbolicSequence::embed(&x + &y), || format!("embed not additive at {x}, {y}"))?;
        ensure(ex.mul(&ey) == SymbolicSequence::embed(&x * &y), || format!("embed not multiplicative at {x}, {y}"))?;
    }
    let s = infinitesimal::expr::parse_seq("n/(n^2 + 1)").map_err(|e| e.to_string())?;
    ensure(s.classify() == SeqClass::Null && !s.is_zero(), || format!("{s} should be nonzero null"))?;
    ensure(s.pointwise_invert() == Err(SeqError::UndefinedAt(0)), || format!("{s} should not invert"))?;
    let t = infinitesimal::expr::parse_seq("ratfn(1, n + 1)").map_err(|e| e.to_string())?;
    let inv = t.pointwise_invert().map_err(|e| e.to_string())?;
    ensure(t.classify() == SeqClass::Null && inv.classify() == SeqClass::Unbounded, || {
        format!("{t} should be null with unbounded inverse {inv}")
    })?;
    Ok(format!("4 witnesses; embed on {EMBED_PAIRS} pairs; inverse of n/(n²+1) undefined at 0, of 1/(n+1) unbounded"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let inst = MonoidInstance::lc_add();
    let family = construct_chain(&inst, &MonoidElement::Lc(LCNumber::eps()), CHAIN_DEPTH).map_err(|e| e.to_string())?;
    ensure(family.len() == CHAIN_DEPTH, || format!("{} generators", family.len()))?;
    ensure(chain_is_increasing(&inst, &family).map_err(|e| e.to_string())?, || "chain not increasing".into())?;
    let pairs = verify_disjoint(&family, 1000).map_err(|e| e.to_string())?;
    let exact = pairs.iter().filter(|p| matches!(p.verdict, Disjointness::ExactDisjoint { .. })).count();
    ensure(pairs.len() == CHAIN_PAIRS && exact == CHAIN_PAIRS, || format!("{exact}/{} pairs exact", pairs.len()))?;
    let cert = certificate_from_chain(&family).map_err(|e| e.to_string())?;
    let report = verify_certificate(&cert);
    ensure(report.passed, || format!("certificate rejected: {:?}", report.failures))?;
    let elapsed = start.elapsed();
    ensure(elapsed < CHAIN_BUDGET, || format!("took {elapsed:?}, budget {CHAIN_BUDGET:?}"))?;
    Ok(format!("depth {CHAIN_DEPTH}, {exact}/{CHAIN_PAIRS} exact, certificate verified in {elapsed:.2?}"))
}

fn criterion_7() -> Check {
    let bounds = AuditBounds::default();
    let nat = audit_claims(&MonoidInstance::nat_add(), bounds).map_err(|e| e.to_string())?;
    for claim in [
        ClaimId::ArchimedeanForbidsBoundedOrbits,
        ClaimId::NoBoundedOrbitsGivesArchimedean,
        ClaimId::NonHyperspaceIsArchimedean,
    ] {
        let r = nat.iter().find(|r| r.claim == claim).unwrap();
        ensure(r.verdict == Verdict::Supported, || format!("nat-add {}: {:?}", claim.as_str(), r.verdict))?;
    }
    let lc = audit_claims(&MonoidInstance::lc_add(), bounds).map_err(|e| e.to_string())?;
    let r = lc.iter().find(|r| r.claim == ClaimId::NonArchimedeanIsHyperspace).unwrap();
    ensure(r.verdict == Verdict::Supported, || format!("lc-add: {:?}", r.verdict))?;

    let (code, out, _) = run_cli(&["--json", "monoid-audit", "lex-z2"]);
    ensure(code == 2, || format!("lex-z2 audit exit {code}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let report = v["reports"]
        .as_array()
        .and_then(|rs| rs.iter().find(|r| r["claim"] == "archimedean-forbids-bounded-orbits"))
        .ok_or("no report for the bounded-orbit claim")?;
    ensure(report["verdict"] == "counterexample", || format!("verdict {}", report["verdict"]))?;
    let witness = |role: &str| -> Result<MonoidElement, String> {
        let w = report["witnesses"]
            .as_array()
            .and_then(|ws| ws.iter().find(|w| w["role"] == role))
            .ok_or(format!("no witness {role}"))?;
        serde_json::from_value(w["element"].clone()).map_err(|e| e.to_string())
    };
    let (u, x, y) = (witness("u")?, witness("x")?, witness("y")?);
    let expected = (MonoidElement::lex([1, 0]), MonoidElement::lex([0, 1]), MonoidElement::lex([1, 0]));
    ensure((&u, &x, &y) == (&expected.0, &expected.1, &expected.2), || format!("witnesses {u}, {x}, {y}"))?;
    // replay: u reaches a grid of elements, x > 0 has every multiple below y
    let inst = MonoidInstance::lex(2);
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            let n = (a.max(0) + 1) as u64;
            let reached = inst.leq(&MonoidElement::lex([a, b]), &inst.nfold_u64(&u, n).unwrap()).unwrap();
            ensure(reached, || format!("u does not reach ({a}, {b})"))?;
        }
    }
    ensure(inst.is_positive(&x).unwrap(), || "x is not positive".into())?;
    for n in 0..bounds.n_bound {
        ensure(inst.lt(&inst.nfold_u64(&x, n).unwrap(), &y).unwrap(), || format!("{n}·x reaches y"))?;
    }
    Ok("nat-add and lc-add supported; lex-z2 counterexample u=(1,0), x=(0,1), y=(1,0) replayed, exit 2".into())
}

fn criterion_8() -> Check {
    let corpus = include_str!("../../core/tests/golden/magmas.txt");
    let mut count = 0;
    for line in corpus.lines() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [n, digits, expected] = parts[..] else {
            return Err(format!("bad golden line {line:?}"));
        };
        let n: usize = n.parse().map_err(|_| format!("bad size in {line:?}"))?;
        let expected: usize = expected.parse().map_err(|_| format!("bad size in {line:?}"))?;
        let m = infinitesimal::hyperspace::FiniteMagma::from_digits(n, digits).map_err(|e| e.to_string())?;
        let r = finite_magma_scan(&m, DEFAULT_SCAN_BOUND).map_err(|e| e.to_string())?;
        ensure(r.family_size == expected, || format!("{n} {digits}: {} vs golden {expected}", r.family_size))?;
        ensure(!r.is_hyperspace && r.note.contains("infinite family"), || format!("{n} {digits}: note {:?}", r.note))?;
        count += 1;
    }
    ensure(count == MAGMA_COUNT, || format!("{count} magmas in the corpus, expected {MAGMA_COUNT}"))?;
    Ok(format!("{count} magmas match the brute-force sizes; every report notes the unmet infinite family"))
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u64..1000).prop_map(|v| Expr::new(ExprKind::Num(BigInt::from(v)))),
        Just(Expr::new(ExprKind::Eps)),
        Just(Expr::new(ExprKind::N)),
    ];
    let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
    leaf.prop_recursive(5, 40, 4, move |inner| {
        prop_oneof![
            (op.clone(), inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::bin(o, a, b)),
            inner.clone().prop_map(|a| Expr::new(ExprKind::Neg(Box::new(a)))),
            (inner.clone(), -7i64..=7, 1i64..=4).prop_map(|(a, n, d)| Expr::new(ExprKind::Pow(Box::new(a), q(n, d)))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::new(ExprKind::Ratfn(Box::new(a), Box::new(b)))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::new(ExprKind::Alt(2, vec![(0, a), (1, b)]))),
        ]
    })
}

fn criterion_9(runner: &mut TestRunner) -> Check {
    for e in sample(runner, expr_strategy(), EXPR_SAMPLES) {
        let text = e.to_string();
        let back = parse(&text).map_err(|err| err.render(&text))?;
        ensure(back == e, || format!("{text} parsed to a different tree"))?;
    }
    let corpus = include_str!("golden/commands.jsonl");
    let mut commands = 0;
    for line in corpus.lines().filter(|l| !l.trim().is_empty()) {
        let case: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let args: Vec<&str> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        let (code, out, err) = run_cli(&args);
        let want = case["exit"].as_i64().unwrap() as i32;
        ensure(code == want, || format!("{args:?}: exit {code}, golden {want}"))?;
        if let Some(t) = case["contains"].as_str() {
            ensure(out.contains(t), || format!("{args:?}: stdout lacks {t:?}"))?;
        }
        if let Some(t) = case["stderr"].as_str() {
            ensure(err.contains(t), || format!("{args:?}: stderr lacks {t:?}"))?;
        }
        commands += 1;
    }
    let mut certs = 0;
    for (base, exps) in [("eps", "1,3/2,5"), ("1/eps", "1,5/4,3/2,2,7/2,5"), ("2*eps^(1/3)", "1,2,3")] {
        let (code, built, err) = run_cli(&["hyper-build-powers", "--base", base, "--exponents", exps]);
        ensure(code == 0, || format!("build {base}: exit {code}: {err}"))?;
        let cert: DisjointFamilyCertificate = serde_json::from_str(&built).map_err(|e| e.to_string())?;
        let path = std::env::temp_dir().join(format!("infini-acceptance-{}-{certs}.json", std::process::id()));
        std::fs::write(&path, &built).map_err(|e| e.to_string())?;
        let arg = format!("@{}", path.display());
        let (code, echoed, _) = run_cli(&["hyper-verify", &arg, "--echo"]);
        std::fs::remove_file(&path).ok();
        ensure(code == 0 && echoed == built, || format!("certificate for {base} changed in hyper-verify"))?;
        ensure(cert.to_json() + "\n" == built, || format!("certificate for {base} is not in canonical form"))?;
        certs += 1;
    }
    Ok(format!("{EXPR_SAMPLES} expressions round-trip; {commands} golden commands; {certs} certificates unchanged"))
}

fn main() {
    let start = Instant::now();
    let mut runner = TestRunner::deterministic();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("classes of the field and their closure", Box::new(criterion_1)),
        ("ordered field laws and standard part", Box::new(criterion_2)),
        ("scalar lines and power families", Box::new(criterion_3)),
        ("no disjoint lines over the scalars alone", Box::new(|_: &mut TestRunner| criterion_4())),
        ("sequence classes, embedding and inversion", Box::new(criterion_5)),
        ("disjoint cyclic subgroup chain at depth 10", Box::new(|_: &mut TestRunner| criterion_6())),
        ("Archimedean claims audit", Box::new(|_: &mut TestRunner| criterion_7())),
        ("finite magma scan against brute force", Box::new(|_: &mut TestRunner| criterion_8())),
        ("command line round trips and exit codes", Box::new(criterion_9)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        match check(&mut runner) {
            Ok(detail) => println!("PASS {} {name}: {detail} ({:.2?})", i + 1, t.elapsed()),
            Err(why) => {
                println!("FAIL {} {name}: {why} ({:.2?})", i + 1, t.elapsed());
                failed.push(i + 1);
            }
        }
    }
    let total = start.elapsed();
    let in_budget = total < TOTAL_BUDGET;
    println!(
        "{} total time {total:.2?} (budget {TOTAL_BUDGET:?})",
        if in_budget { "PASS" } else { "FAIL" }
    );
    if !failed.is_empty() || !in_budget {
        println!("acceptance failed: criteria {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all 9 criteria passed");
}
