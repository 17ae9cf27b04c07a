mod common;

use std::io::Write;
use std::process::{Command, Stdio};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use scalc_core::export::{export_vc, ExportOptions};
use scalc_core::syntax::{parse_pred, parse_program_with_prelude};
use scalc_core::{parse_program, verify, Domain, Error, Mode, PredExpr, Stmt};

fn run(cmd: &mut Command, input: &str) -> Option<String> {
    let mut child = cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::null()).spawn().ok()?;
    child.stdin.take()?.write_all(input.as_bytes()).ok()?;
    let out = child.wait_with_output().ok()?;
    let answer = String::from_utf8(out.stdout).ok()?.trim().to_string();
    matches!(answer.as_str(), "sat" | "unsat").then_some(answer)
}

/// Answer of an external solver, or `None` when none is installed.
fn solve(text: &str) -> Option<String> {
    run(Command::new("z3").args(["-in", "-smt2"]), text).or_else(|| {
        let script = "import sys, z3\ns = z3.Solver()\ns.from_string(sys.stdin.read())\nprint(s.check())";
        run(Command::new("python3").args(["-c", script]), text)
    })
}

fn solver_available() -> bool {
    let found = solve("(assert true)\n(check-sat)\n").is_some();
    if !found {
        eprintln!("no SMT solver found; skipping solver checks");
    }
    found
}

fn export(program: &Stmt, pre: &str, post: &str, mode: Mode, unroll: usize) -> String {
    let options = ExportOptions {
        unroll,
        allow_partial_unroll: false,
    };
    export_vc(program, &parse_pred(pre).unwrap(), &parse_pred(post).unwrap(), mode, options)
        .unwrap()
        .render()
}

fn branch() -> Stmt {
    parse_program("int a=5; if (a > 0) a=10; else a=100;").unwrap()
}

fn factorial_loop() -> Stmt {
    parse_program_with_prelude("while (i <= n) { f *= i; i++; }", ["i", "n", "f"]).unwrap()
}

fn balanced(text: &str) -> bool {
    let mut depth = 0i64;
    for line in text.lines().filter(|l| !l.starts_with(';')) {
        for ch in line.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return false;
            }
        }
    }
    depth == 0
}

#[test]
fn document_layout() {
    let text = export(&branch(), "true", "a == 10", Mode::Total, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "; scalc verification condition");
    assert!(lines[1].starts_with("; program-sha256: "));
    assert_eq!(lines[2], "; mode: total");
    assert_eq!(lines[3], "; unroll: 0");
    assert!(lines.contains(&"(set-logic QF_LIA)"));
    assert_eq!(lines.iter().filter(|l| l.starts_with("(assert ")).count(), 1);
    assert_eq!(*lines.last().unwrap(), "(check-sat)");
    assert!(balanced(&text));
    assert_eq!(text, export(&branch(), "true", "a == 10", Mode::Total, 0));

    let loop_text = export(&factorial_loop(), "i == 2 && n == 4 && f == 1", "f == 24", Mode::Total, 3);
    assert!(loop_text.contains("(set-logic QF_NIA)"));
    assert!(loop_text.contains("; unroll: 3"));
    assert!(balanced(&loop_text));
}

#[test]
fn loops_need_a_bound_or_permission() {
    let pre = PredExpr::True;
    let err = export_vc(&factorial_loop(), &pre, &pre, Mode::Total, ExportOptions::default()).unwrap_err();
    assert!(matches!(err, Error::UnsupportedForExport(_)));
    let options = ExportOptions {
        unroll: 0,
        allow_partial_unroll: true,
    };
    assert!(export_vc(&factorial_loop(), &pre, &pre, Mode::Partial, options).is_ok());
}

#[test]
fn solver_agrees_on_examples() {
    if !solver_available() {
        return;
    }
    assert_eq!(solve(&export(&branch(), "true", "a == 10", Mode::Total, 0)).unwrap(), "unsat");
    assert_eq!(solve(&export(&branch(), "true", "a == 100", Mode::Total, 0)).unwrap(), "sat");
    let p = "i == 2 && n == 4 && f == 1";
    assert_eq!(solve(&export(&factorial_loop(), p, "f == 24", Mode::Total, 3)).unwrap(), "unsat");
    assert_eq!(solve(&export(&factorial_loop(), p, "f == 24", Mode::Total, 2)).unwrap(), "sat");
    assert_eq!(solve(&export(&factorial_loop(), p, "f == 24", Mode::Partial, 2)).unwrap(), "unsat");
    assert_eq!(solve(&export(&factorial_loop(), p, "f == 6", Mode::Total, 3)).unwrap(), "sat");
    let nop = parse_program(";").unwrap();
    assert_eq!(solve(&export(&nop, "true", "false", Mode::Total, 0)).unwrap(), "sat");
    let flag = parse_program("bool b; if (b == 0) b = 1;").unwrap();
    assert_eq!(solve(&export(&flag, "true", "b == 1", Mode::Total, 0)).unwrap(), "unsat");
}

const VARS: [&str; 2] = ["a", "b"];

/// Loop-free programs with small constants so every value stays inside -128..127
/// when the inputs lie in -3..3.
fn program() -> impl Strategy<Value = String> {
    let assign = (0..2usize, 0..2usize, -2i64..3, 0..3usize).prop_map(|(t, s, k, op)| {
        let sym = ["+", "-", "*"][op];
        format!("{} = {} {} {};", VARS[t], VARS[s], sym, k)
    });
    let leaf = prop_oneof![Just(";".to_string()), assign];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("{x} {y}")),
            (0..2usize, -2i64..3, inner.clone(), inner.clone())
                .prop_map(|(v, k, x, y)| format!("if ({} < {}) {{ {x} }} else {{ {y} }}", VARS[v], k)),
            (0..2usize, inner).prop_map(|(v, x)| format!("if ({} == 0) {{ {x} }}", VARS[v])),
        ]
    })
}

fn post() -> impl Strategy<Value = String> {
    (0..2usize, 0..2usize, -6i64..7, prop_oneof![Just("<="), Just("!="), Just(">")])
        .prop_map(|(x, y, k, op)| format!("{} + {} {op} {k}", VARS[x], VARS[y]))
}

#[test]
fn solver_agrees_with_finite_model() {
    if !solver_available() {
        return;
    }
    let space = common::space(&[("a", Domain::int()), ("b", Domain::int())]);
    let pre = "-3 <= a && a <= 3 && -3 <= b && b <= 3";
    let mut runner = TestRunner::new(Config {
        cases: 40,
        ..Config::default()
    });
    runner
        .run(&(program(), post()), |(text, q)| {
            let program = parse_program_with_prelude(&text, VARS).unwrap();
            for mode in [Mode::Total, Mode::Partial] {
                let finite = verify(&program, &parse_pred(pre).unwrap(), &parse_pred(&q).unwrap(), mode, &space)
                    .unwrap()
                    .verdict
                    .holds;
                let answer = solve(&export(&program, pre, &q, mode, 0)).unwrap();
                prop_assert_eq!(answer == "unsat", finite, "{} / {}", text, q);
            }
            Ok(())
        })
        .unwrap();
}
