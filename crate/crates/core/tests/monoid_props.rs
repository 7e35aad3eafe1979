mod common;

use infinitesimal::lc::Valuation;
use infinitesimal::monoid::audit::{audit_claims, exit_code, AuditBounds, ClaimId, Verdict};
use infinitesimal::monoid::chain::{chain_is_increasing, construct_chain, verify_disjoint, Disjointness};
use infinitesimal::monoid::{CyclicIntersection, MonoidElement, MonoidInstance};
use infinitesimal::BigUint;
use proptest::prelude::*;

fn nat() -> impl Strategy<Value = MonoidElement> {
    (0u64..500).prop_map(MonoidElement::nat)
}

fn lex2() -> impl Strategy<Value = MonoidElement> {
    prop::collection::vec(-20i64..=20, 2).prop_map(MonoidElement::lex)
}

fn lc_el() -> impl Strategy<Value = MonoidElement> {
    common::lc().prop_map(MonoidElement::Lc)
}

fn check_laws(inst: &MonoidInstance, a: &MonoidElement, b: &MonoidElement, c: &MonoidElement) -> Result<(), TestCaseError> {
    let op = |x: &MonoidElement, y: &MonoidElement| inst.op(x, y).unwrap();
    prop_assert_eq!(op(&op(a, b), c), op(a, &op(b, c)));
    prop_assert_eq!(op(a, b), op(b, a));
    prop_assert_eq!(op(a, &inst.neutral()), a.clone());
    if inst.leq(a, b).unwrap() {
        prop_assert!(inst.leq(&op(a, c), &op(b, c)).unwrap(), "order is translation invariant");
    }
    for n in 0..6u64 {
        for m in 0..6u64 {
            let lhs = inst.nfold_u64(a, n + m).unwrap();
            prop_assert_eq!(lhs, op(&inst.nfold_u64(a, n).unwrap(), &inst.nfold_u64(a, m).unwrap()));
        }
    }
    prop_assert_eq!(inst.nfold(a, &BigUint::from(3u8)).unwrap(), op(&op(a, a), a));
    Ok(())
}

/// Smallest `(i, j)` with `i·a = j·b`, both in `1..=bound`, by brute force.
fn brute_common(inst: &MonoidInstance, a: &MonoidElement, b: &MonoidElement, bound: u64) -> Option<(u64, u64)> {
    let mb: Vec<MonoidElement> = (1..=bound).map(|j| inst.nfold_u64(b, j).unwrap()).collect();
    (1..=bound).find_map(|i| {
        let x = inst.nfold_u64(a, i).unwrap();
        mb.iter().position(|y| *y == x).map(|j| (i, j as u64 + 1))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn nat_laws(a in nat(), b in nat(), c in nat()) {
        check_laws(&MonoidInstance::nat_add(), &a, &b, &c)?;
    }

    #[test]
    fn lex_laws(a in lex2(), b in lex2(), c in lex2()) {
        check_laws(&MonoidInstance::lex(2), &a, &b, &c)?;
    }

    #[test]
    fn lc_laws(a in lc_el(), b in lc_el(), c in lc_el()) {
        check_laws(&MonoidInstance::lc_add(), &a, &b, &c)?;
    }

    #[test]
    fn solve_inverts_multiples(u in lex2(), n in -30i64..=30) {
        let inst = MonoidInstance::lex(2);
        let y = inst.zfold(&u, &n.into()).unwrap();
        match inst.solve(&y, &u).unwrap() {
            Some(k) => prop_assert_eq!(inst.zfold(&u, &k).unwrap(), y),
            None => prop_assert!(false, "no solution for {} = {}·{}", y, n, u),
        }
    }

    #[test]
    fn cyclic_intersection_matches_brute_force(a in lex2(), b in lex2()) {
        let inst = MonoidInstance::lex(2);
        let exact = inst.intersect_cyclic(&a, &b).unwrap().unwrap();
        // coordinates are at most 20, so a shared multiple, if any, has
        // both factors at most 40 in absolute value
        let zero = inst.neutral();
        let brute = if a == zero || b == zero {
            None
        } else {
            let neg_b = inst.negate(&b).unwrap().unwrap();
            brute_common(&inst, &a, &b, 40).or_else(|| brute_common(&inst, &a, &neg_b, 40))
        };
        match (exact, brute) {
            (CyclicIntersection::Trivial { .. }, None) => {}
            (CyclicIntersection::Shared { common, n_a, n_b }, Some(_)) => {
                prop_assert_eq!(inst.zfold(&a, &n_a).unwrap(), common.clone());
                prop_assert_eq!(inst.zfold(&b, &n_b).unwrap(), common.clone());
                prop_assert!(common != zero);
            }
            (e, b) => prop_assert!(false, "exact {:?} vs brute {:?}", e, b),
        }
    }

    #[test]
    fn dominator_beats_every_multiple(u in lc_el()) {
        let inst = MonoidInstance::lc_add();
        let u = if inst.is_nonnegative(&u).unwrap() { u } else { inst.negate(&u).unwrap().unwrap() };
        let x = inst.dominate(&u).unwrap();
        for n in [0u64, 1, 2, 10, 1000, 1 << 40] {
            prop_assert!(inst.lt(&inst.nfold_u64(&u, n).unwrap(), &x).unwrap());
        }
        let (ux, xx) = (u.as_lc().unwrap(), x.as_lc().unwrap());
        if let (Valuation::Finite(vu), Valuation::Finite(vx)) = (ux.valuation(), xx.valuation()) {
            prop_assert!(vx < vu);
        }
    }

    #[test]
    fn chains_from_random_positive_starts_are_disjoint(u in lc_el().prop_filter("positive", |u| u.as_lc().unwrap().is_positive())) {
        let inst = MonoidInstance::lc_add();
        let family = construct_chain(&inst, &u, 5).unwrap();
        prop_assert!(chain_is_increasing(&inst, &family).unwrap());
        let pairs = verify_disjoint(&family, 100).unwrap();
        prop_assert_eq!(pairs.len(), 10);
        let gens: Vec<_> = family.generators().map(|g| g.as_lc().unwrap().valuation()).collect();
        for p in &pairs {
            prop_assert!(matches!(p.verdict, Disjointness::ExactDisjoint { .. }), "{:?}", p);
            // independent witness of disjointness: distinct valuations
            // whenever the first generator is not the odd one out
            if p.i > 0 {
                prop_assert!(gens[p.i] != gens[p.j]);
            }
        }
    }
}

#[test]
fn audit_verdicts_per_instance() {
    let bounds = AuditBounds::default();
    let nat = audit_claims(&MonoidInstance::nat_add(), bounds).unwrap();
    assert!(nat.iter().all(|r| r.verdict == Verdict::Supported), "{nat:?}");
    assert_eq!(exit_code(&nat), 0);

    let lc = audit_claims(&MonoidInstance::lc_add(), bounds).unwrap();
    let hyper = lc.iter().find(|r| r.claim == ClaimId::NonArchimedeanIsHyperspace).unwrap();
    assert_eq!(hyper.verdict, Verdict::Supported);
    assert!(hyper.transcript.iter().any(|l| l.contains("strictly increasing: true")));

    let lex = audit_claims(&MonoidInstance::lex(2), bounds).unwrap();
    assert_eq!(exit_code(&lex), 2);
    let r = lex.iter().find(|r| r.claim == ClaimId::ArchimedeanForbidsBoundedOrbits).unwrap();
    let (u, x, y) = (r.witness("u").unwrap(), r.witness("x").unwrap(), r.witness("y").unwrap());
    assert_eq!((u, x, y), (&MonoidElement::lex([1, 0]), &MonoidElement::lex([0, 1]), &MonoidElement::lex([1, 0])));
}

#[test]
fn lex_counterexample_replays() {
    let inst = MonoidInstance::lex(2);
    let (u, x, y) = (MonoidElement::lex([1, 0]), MonoidElement::lex([0, 1]), MonoidElement::lex([1, 0]));
    // u reaches a grid of elements
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            let target = MonoidElement::lex([a, b]);
            let n = (a.max(0) + 1) as u64;
            assert!(inst.leq(&target, &inst.nfold_u64(&u, n).unwrap()).unwrap());
        }
    }
    // while x ≠ 0 has every multiple below y
    assert!(inst.is_positive(&x).unwrap());
    for n in 0..10_000u64 {
        assert!(inst.lt(&inst.nfold_u64(&x, n).unwrap(), &y).unwrap());
    }
}
