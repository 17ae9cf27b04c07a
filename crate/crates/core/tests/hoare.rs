mod common;

use common::{factorial_space, naive_partial, naive_total, pairs, range, space, values};
use proptest::prelude::*;
use scalc_core::hoare::{check_partial_with, check_total_with};
use scalc_core::predicates::{eval_sformula, pred_to_set, Binding, Env};
use scalc_core::syntax::{parse_pred, parse_program_with_prelude};
use scalc_core::{
    check_partial, check_total, denote, parse_program, verify, wp, CounterexampleKind, Exec, Mode, PredSet, Relation,
    SFormula, State, Verdict,
};

fn branch() -> scalc_core::Stmt {
    parse_program("int a=5; if (a > 0) a=10; else a=100;").unwrap()
}

fn factorial_loop() -> scalc_core::Stmt {
    parse_program_with_prelude("while (i <= n) { f *= i; i++; }", ["i", "n", "f"]).unwrap()
}

/// Runs the factorial loop on plain integers; `None` when a value leaves its range.
fn run_factorial(mut i: i64, n: i64, mut f: i64) -> Option<(i64, i64, i64)> {
    while i <= n {
        f *= i;
        i += 1;
        if !(0..=31).contains(&f) || !(0..=7).contains(&i) {
            return None;
        }
    }
    Some((i, n, f))
}

#[test]
fn branch_program_holds() {
    let a = space(&[("a", scalc_core::Domain::int())]);
    let r = verify(&branch(), &parse_pred("true").unwrap(), &parse_pred("a == 10").unwrap(), Mode::Total, &a).unwrap();
    assert!(r.verdict.holds);
    assert!(r.verdict.counterexample.is_none());
    assert_eq!(r.wp_size, 256);
    assert_eq!(
        r.to_json().to_string(),
        r#"{"mode":"total","holds":true,"counterexample":null,"stats":{"space_size":256,"states_checked":256,"pairs_checked":256,"wp_size":256}}"#
    );
}

#[test]
fn branch_program_mutated() {
    let a = space(&[("a", scalc_core::Domain::int())]);
    let r = verify(&branch(), &parse_pred("true").unwrap(), &parse_pred("a == 100").unwrap(), Mode::Total, &a).unwrap();
    assert!(!r.verdict.holds);
    let c = r.verdict.counterexample.unwrap();
    assert_eq!(c.kind, CounterexampleKind::BadSuccessor);
    assert_eq!(c.initial, 0);
    let (init, fin) = r.counterexample_states().unwrap();
    assert_eq!(init, State::new(vec![-128]));
    assert_eq!(fin, Some(State::new(vec![10])));
    let json = r.to_json();
    assert_eq!(json["counterexample"]["kind"], "BadSuccessor");
    assert_eq!(json["counterexample"]["final"]["a"], 10);
}

#[test]
fn factorial_holds() {
    let f = factorial_space();
    let p = parse_pred("i == 2 && n == 4 && f == 1").unwrap();
    let q = parse_pred("f == 24").unwrap();
    let r = verify(&factorial_loop(), &p, &q, Mode::Total, &f).unwrap();
    assert!(r.verdict.holds);
    assert!(verify(&factorial_loop(), &p, &q, Mode::Partial, &f).unwrap().verdict.holds);
}

#[test]
fn weakened_factorial_matches_direct_execution() {
    let f = factorial_space();
    let r = verify(&factorial_loop(), &parse_pred("true").unwrap(), &parse_pred("f == 24").unwrap(), Mode::Total, &f).unwrap();
    assert!(!r.verdict.holds);
    let expected = (0..f.size())
        .find_map(|k| {
            let st = f.index_to_state(k).unwrap();
            match run_factorial(st.get(0), st.get(1), st.get(2)) {
                None => Some((k, CounterexampleKind::NoSuccessor, None)),
                Some((_, _, 24)) => None,
                Some(end) => {
                    let y = f.state_to_index(&State::new(vec![end.0, end.1, end.2])).unwrap();
                    Some((k, CounterexampleKind::BadSuccessor, Some(y)))
                }
            }
        })
        .unwrap();
    let c = r.verdict.counterexample.unwrap();
    assert_eq!((c.initial, c.kind, c.witness_final), expected);
}

#[test]
fn loop_relation_matches_direct_execution() {
    let f = factorial_space();
    let s = denote(&factorial_loop(), &f).unwrap();
    for k in 0..f.size() {
        let st = f.index_to_state(k).unwrap();
        let want: Vec<usize> = run_factorial(st.get(0), st.get(1), st.get(2))
            .map(|(i, n, v)| f.state_to_index(&State::new(vec![i, n, v])).unwrap())
            .into_iter()
            .collect();
        assert_eq!(s.successors(k), want.as_slice(), "{}", f.display(k));
    }
}

#[test]
fn divergence_splits_total_and_partial() {
    let s = space(&[("i", range(0, 7))]);
    let program = parse_program_with_prelude("while (i >= 0) i = i+1;", ["i"]).unwrap();
    let (p, q) = (parse_pred("i == 0").unwrap(), parse_pred("false").unwrap());
    let total = verify(&program, &p, &q, Mode::Total, &s).unwrap();
    assert!(!total.verdict.holds);
    let c = total.verdict.counterexample.unwrap();
    assert_eq!((c.kind, c.initial, c.witness_final), (CounterexampleKind::NoSuccessor, 0, None));
    assert_eq!(total.to_json()["counterexample"]["final"], serde_json::Value::Null);
    assert!(verify(&program, &p, &q, Mode::Partial, &s).unwrap().verdict.holds);
}

#[test]
fn nop_and_declaration() {
    let a = space(&[("a", values(&[5, 10, 100]))]);
    let nop = parse_program(";").unwrap();
    let tau = parse_pred("true").unwrap();
    assert!(verify(&nop, &tau, &tau, Mode::Total, &a).unwrap().verdict.holds);
    let bad = verify(&nop, &parse_pred("a == 5").unwrap(), &parse_pred("a == 10").unwrap(), Mode::Partial, &a).unwrap();
    let c = bad.verdict.counterexample.unwrap();
    assert_eq!((c.kind, c.initial, c.witness_final), (CounterexampleKind::PartialViolation, 0, Some(0)));

    let decl = parse_program("int a;").unwrap();
    let in_dom = scalc_core::PredExpr::InDomain("a".into());
    assert!(verify(&decl, &tau, &in_dom, Mode::Total, &a).unwrap().verdict.holds);
    let r = verify(&decl, &tau, &parse_pred("a == 5").unwrap(), Mode::Total, &a).unwrap();
    let c = r.verdict.counterexample.unwrap();
    assert_eq!((c.kind, c.initial, c.witness_final), (CounterexampleKind::BadSuccessor, 0, Some(1)));
}

#[test]
fn wp_examples() {
    let a = space(&[("a", values(&[5, 10, 100]))]);
    let s = denote(&branch(), &a).unwrap();
    assert!(wp(&s, &pred_to_set(&parse_pred("a == 10").unwrap(), &a).unwrap()).unwrap().is_full());
    assert!(wp(&s, &PredSet::empty(3)).unwrap().is_empty());
    let q = PredSet::from_mask(3, 0b101);
    assert_eq!(wp(&Relation::identity(3), &q).unwrap(), q);
}

fn tcf_formula() -> SFormula {
    let exists = SFormula::exists("y", SFormula::rel("S", "x", "y"));
    let all = SFormula::forall("z", SFormula::rel("S", "x", "z").implies(SFormula::pred("Q", "z")));
    SFormula::forall("x", SFormula::pred("P", "x").implies(exists.and(all)))
}

fn pcf_formula() -> SFormula {
    let exists = SFormula::exists("y", SFormula::rel("S", "x", "y"));
    let all = SFormula::forall("z", SFormula::rel("S", "x", "z").implies(SFormula::pred("Q", "z")));
    SFormula::forall("x", SFormula::pred("P", "x").and(exists).implies(all))
}

fn env(p: &PredSet, s: &Relation, q: &PredSet) -> Env {
    [
        ("P".to_string(), Binding::Pred(p.clone())),
        ("S".to_string(), Binding::Rel(s.clone())),
        ("Q".to_string(), Binding::Pred(q.clone())),
    ]
    .into_iter()
    .collect()
}

fn replay_refutes(v: &Verdict, p: &PredSet, s: &Relation, q: &PredSet, total: bool) -> bool {
    let Some(c) = v.counterexample else { return false };
    if !p.contains(c.initial) {
        return false;
    }
    match (c.kind, c.witness_final) {
        (CounterexampleKind::NoSuccessor, None) => total && !s.has_successor(c.initial),
        (CounterexampleKind::BadSuccessor, Some(y)) => total && s.contains(c.initial, y) && !q.contains(y),
        (CounterexampleKind::PartialViolation, Some(y)) => !total && s.contains(c.initial, y) && !q.contains(y),
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn checkers_match_formulas((n, rels, preds) in common::instance(5, 1, 2)) {
        let (s, p, q) = (&rels[0], &preds[0], &preds[1]);
        let sp = pairs(s);
        let t = check_total(p, s, q).unwrap();
        let pc = check_partial(p, s, q).unwrap();
        prop_assert_eq!(t.holds, naive_total(p, &sp, q));
        prop_assert_eq!(pc.holds, naive_partial(p, &sp, q));
        let e = env(p, s, q);
        prop_assert_eq!(t.holds, eval_sformula(&tcf_formula(), &e, n).unwrap());
        prop_assert_eq!(pc.holds, eval_sformula(&pcf_formula(), &e, n).unwrap());
        prop_assert_eq!(t.holds, t.counterexample.is_none());
        prop_assert_eq!(pc.holds, pc.counterexample.is_none());
        if t.holds {
            prop_assert!(pc.holds);
        } else {
            prop_assert!(replay_refutes(&t, p, s, q, true));
            let first = (0..n).find(|&x| !naive_total(&PredSet::from_indices(n, [x]), &sp, q) && p.contains(x));
            prop_assert_eq!(Some(t.counterexample.unwrap().initial), first);
        }
        if !pc.holds {
            prop_assert!(replay_refutes(&pc, p, s, q, false));
        }
    }

    #[test]
    fn parallel_verdicts_equal_sequential((_, rels, preds) in common::instance(12, 1, 2)) {
        let (s, p, q) = (&rels[0], &preds[0], &preds[1]);
        let a = check_total_with(p, s, q, Exec::Sequential).unwrap();
        let b = check_total_with(p, s, q, Exec::Parallel).unwrap();
        prop_assert_eq!((a.holds, a.counterexample), (b.holds, b.counterexample));
        let a = check_partial_with(p, s, q, Exec::Sequential).unwrap();
        let b = check_partial_with(p, s, q, Exec::Parallel).unwrap();
        prop_assert_eq!((a.holds, a.counterexample), (b.holds, b.counterexample));
    }

    #[test]
    fn wp_is_weakest(
        (n, rels, preds) in common::instance(5, 1, 1),
        candidates in proptest::collection::vec(any::<u64>(), 50),
    ) {
        let (s, q) = (&rels[0], &preds[0]);
        let w = wp(s, q).unwrap();
        let sp = pairs(s);
        let by_formula = PredSet::from_fn(n, |x| naive_total(&PredSet::from_indices(n, [x]), &sp, q));
        prop_assert_eq!(&w, &by_formula);
        prop_assert!(check_total(&w, s, q).unwrap().holds);
        for bits in candidates {
            let p = PredSet::from_mask(n, bits);
            let holds = check_total(&p, s, q).unwrap().holds;
            prop_assert_eq!(holds, p.is_subset(&w));
        }
    }

    #[test]
    fn excluded_miracle((n, rels, preds) in common::instance(5, 1, 1)) {
        let (s, p) = (&rels[0], &preds[0]);
        prop_assert_eq!(check_total(p, s, &PredSet::empty(n)).unwrap().holds, p.is_empty());
        prop_assert!(wp(s, &PredSet::empty(n)).unwrap().is_empty());
    }
}
