//! SMT-LIB 2 export of correctness conditions over unbounded integers.
//!
//! The program is put in SSA form: every assignment or declaration
//! introduces a fresh constant `v@k`, branches merge through fresh constants,
//! and loops are unrolled a fixed number of times. A Boolean term `ok`
//! tracks whether the path finished within the unrolling bound. The single
//! assertion is the negated condition, so `unsat` means it holds.
//!
//! - total: `P ∧ (¬ok ∨ ¬Q)`
//! - partial: `P ∧ ok ∧ ¬Q`
//!
//! Variables have no finite domains here, so assignments never abort.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::hoare::Mode;
use crate::predicates::{ArithExpr, CmpOp, PredExpr};
use crate::syntax::{pretty_print, Stmt, StmtKind, VarType};
use crate::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExportOptions {
    /// Iterations unrolled per loop.
    pub unroll: usize,
    /// Export loops even when `unroll` is 0; such loops only have their
    /// zero-iteration exit.
    pub allow_partial_unroll: bool,
}

/// A rendered verification condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VCDocument {
    pub logic: &'static str,
    pub program_hash: String,
    pub mode: Mode,
    pub unroll: usize,
    pub notes: Vec<String>,
    /// `(name, sort)` in declaration order.
    pub declarations: Vec<(String, &'static str)>,
    /// The negated condition.
    pub assertion: String,
}

impl VCDocument {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("; scalc verification condition\n");
        let _ = writeln!(out, "; program-sha256: {}", self.program_hash);
        let _ = writeln!(out, "; mode: {}", self.mode);
        let _ = writeln!(out, "; unroll: {}", self.unroll);
        for note in &self.notes {
            let _ = writeln!(out, "; note: {note}");
        }
        out.push_str("; unsat means the condition holds\n");
        let _ = writeln!(out, "(set-logic {})", self.logic);
        for (name, sort) in &self.declarations {
            let _ = writeln!(out, "(declare-const {name} {sort})");
        }
        let _ = writeln!(out, "(assert {})", self.assertion);
        out.push_str("(check-sat)\n");
        out
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn and_all(terms: Vec<String>) -> String {
    let terms: Vec<String> = terms.into_iter().filter(|t| t != "true").collect();
    match terms.len() {
        0 => "true".into(),
        1 => terms.into_iter().next().expect("one term"),
        _ => format!("(and {})", terms.join(" ")),
    }
}

fn negate(t: &str) -> String {
    match t {
        "true" => "false".into(),
        "false" => "true".into(),
        _ => format!("(not {t})"),
    }
}

fn int_literal(c: i64) -> String {
    if c >= 0 {
        c.to_string()
    } else {
        format!("(- {})", c.unsigned_abs())
    }
}

#[derive(Default)]
struct Encoder {
    versions: BTreeMap<String, usize>,
    inputs: BTreeSet<String>,
    declarations: Vec<(String, &'static str)>,
    nonlinear: bool,
    havoc: bool,
    unroll: usize,
    allow_partial: bool,
}

/// SSA environment: current constant of each variable.
type Env = BTreeMap<String, String>;

impl Encoder {
    fn fresh(&mut self, var: &str) -> String {
        let n = self.versions.entry(var.to_string()).or_insert(0);
        *n += 1;
        let name = format!("{var}@{n}");
        self.declarations.push((name.clone(), "Int"));
        name
    }

    fn lookup(&mut self, env: &mut Env, var: &str) -> String {
        if let Some(s) = env.get(var) {
            return s.clone();
        }
        // First read of a variable the program never wrote: an input.
        let name = format!("{var}@0");
        self.versions.entry(var.to_string()).or_insert(0);
        if self.inputs.insert(var.to_string()) {
            self.declarations.push((name.clone(), "Int"));
        }
        env.insert(var.to_string(), name.clone());
        name
    }

    fn arith(&mut self, e: &ArithExpr, env: &mut Env) -> String {
        match e {
            ArithExpr::Const(c) => int_literal(*c),
            ArithExpr::Var(v) => self.lookup(env, v),
            ArithExpr::Add(a, b) => format!("(+ {} {})", self.arith(a, env), self.arith(b, env)),
            ArithExpr::Sub(a, b) => format!("(- {} {})", self.arith(a, env), self.arith(b, env)),
            ArithExpr::Mul(a, b) => {
                if !matches!(**a, ArithExpr::Const(_)) && !matches!(**b, ArithExpr::Const(_)) {
                    self.nonlinear = true;
                }
                format!("(* {} {})", self.arith(a, env), self.arith(b, env))
            }
            ArithExpr::Neg(a) => format!("(- {})", self.arith(a, env)),
        }
    }

    fn pred(&mut self, p: &PredExpr, env: &mut Env) -> String {
        match p {
            PredExpr::True | PredExpr::InDomain(_) => "true".into(),
            PredExpr::False => "false".into(),
            PredExpr::Cmp(op, a, b) => {
                let (a, b) = (self.arith(a, env), self.arith(b, env));
                match op {
                    CmpOp::Eq => format!("(= {a} {b})"),
                    CmpOp::Ne => format!("(not (= {a} {b}))"),
                    CmpOp::Lt => format!("(< {a} {b})"),
                    CmpOp::Le => format!("(<= {a} {b})"),
                    CmpOp::Gt => format!("(> {a} {b})"),
                    CmpOp::Ge => format!("(>= {a} {b})"),
                }
            }
            PredExpr::Not(a) => negate(&self.pred(a, env)),
            PredExpr::And(a, b) => format!("(and {} {})", self.pred(a, env), self.pred(b, env)),
            PredExpr::Or(a, b) => format!("(or {} {})", self.pred(a, env), self.pred(b, env)),
            PredExpr::Implies(a, b) => format!("(=> {} {})", self.pred(a, env), self.pred(b, env)),
            PredExpr::Iff(a, b) => format!("(= {} {})", self.pred(a, env), self.pred(b, env)),
        }
    }

    /// Returns the path constraint and the `ok` term; updates `env`.
    fn stmt(&mut self, s: &Stmt, env: &mut Env) -> Result<(String, String), Error> {
        match &s.kind {
            StmtKind::Nop => Ok(("true".into(), "true".into())),
            StmtKind::Assign { var, expr } => {
                let value = self.arith(expr, env);
                let name = self.fresh(var);
                env.insert(var.clone(), name.clone());
                Ok((format!("(= {name} {value})"), "true".into()))
            }
            StmtKind::Decl { var, ty } => {
                self.havoc = true;
                let name = self.fresh(var);
                env.insert(var.clone(), name.clone());
                let c = match ty {
                    VarType::Bool => format!("(and (<= 0 {name}) (<= {name} 1))"),
                    VarType::Int => "true".into(),
                };
                Ok((c, "true".into()))
            }
            StmtKind::Seq(a, b) => {
                let (c1, ok1) = self.stmt(a, env)?;
                let (c2, ok2) = self.stmt(b, env)?;
                Ok((and_all(vec![c1, c2]), and_all(vec![ok1, ok2])))
            }
            StmtKind::IfThenElse { cond, then, els } => self.branch(cond, Branch::Stmt(then), Branch::Stmt(els), env),
            StmtKind::IfThen { cond, then } => self.branch(cond, Branch::Stmt(then), Branch::Skip, env),
            StmtKind::While { cond, body } => {
                if self.unroll == 0 && !self.allow_partial {
                    return Err(Error::UnsupportedForExport(format!(
                        "loop `while ({cond})` at {} needs an unrolling bound",
                        s.span
                    )));
                }
                self.unrolled(cond, body, self.unroll, env)
            }
        }
    }

    /// `if (B) { body; <loop with k-1 iterations> }`, with a blocked exit
    /// when the bound is used up while `B` still holds.
    fn unrolled(&mut self, cond: &PredExpr, body: &Stmt, k: usize, env: &mut Env) -> Result<(String, String), Error> {
        if k == 0 {
            return self.branch(cond, Branch::Blocked, Branch::Skip, env);
        }
        self.branch(cond, Branch::Iterate { body, cond, left: k - 1 }, Branch::Skip, env)
    }

    fn arm(&mut self, arm: &Branch, env: &mut Env) -> Result<(String, String), Error> {
        match arm {
            Branch::Stmt(s) => self.stmt(s, env),
            Branch::Skip => Ok(("true".into(), "true".into())),
            Branch::Blocked => Ok(("true".into(), "false".into())),
            Branch::Iterate { body, cond, left } => {
                let (c1, ok1) = self.stmt(body, env)?;
                let (c2, ok2) = self.unrolled(cond, body, *left, env)?;
                Ok((and_all(vec![c1, c2]), and_all(vec![ok1, ok2])))
            }
        }
    }

    fn branch(&mut self, cond: &PredExpr, then: Branch, els: Branch, env: &mut Env) -> Result<(String, String), Error> {
        let b = self.pred(cond, env);
        let mut e1 = env.clone();
        let (c1, ok1) = self.arm(&then, &mut e1)?;
        let mut e2 = env.clone();
        let (c2, ok2) = self.arm(&els, &mut e2)?;
        let mut eq1 = vec![c1];
        let mut eq2 = vec![c2];
        let vars: Vec<String> = e1.keys().chain(e2.keys()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
        for v in vars {
            let left = match e1.get(&v) {
                Some(s) => s.clone(),
                None => self.lookup(&mut e1, &v),
            };
            let right = match e2.get(&v) {
                Some(s) => s.clone(),
                None => self.lookup(&mut e2, &v),
            };
            if left == right {
                env.insert(v, left);
                continue;
            }
            let merged = self.fresh(&v);
            eq1.push(format!("(= {merged} {left})"));
            eq2.push(format!("(= {merged} {right})"));
            env.insert(v, merged);
        }
        let (then_c, else_c) = (and_all(eq1), and_all(eq2));
        let constraint = if then_c == "true" && else_c == "true" {
            "true".to_string()
        } else {
            format!("(and (=> {b} {then_c}) (=> {} {else_c}))", negate(&b))
        };
        let ok = if ok1 == ok2 { ok1 } else { format!("(ite {b} {ok1} {ok2})") };
        Ok((constraint, ok))
    }
}

enum Branch<'a> {
    Stmt(&'a Stmt),
    Skip,
    Blocked,
    Iterate { body: &'a Stmt, cond: &'a PredExpr, left: usize },
}

/// Builds the negated correctness condition of `{pre} program {post}`.
pub fn export_vc(program: &Stmt, pre: &PredExpr, post: &PredExpr, mode: Mode, options: ExportOptions) -> Result<VCDocument, Error> {
    let mut enc = Encoder {
        unroll: options.unroll,
        allow_partial: options.allow_partial_unroll,
        ..Encoder::default()
    };
    let mut env = Env::new();
    let p = enc.pred(pre, &mut env);
    let (path, ok) = enc.stmt(program, &mut env)?;
    let q = enc.pred(post, &mut env);
    let bad = match mode {
        Mode::Total => match ok.as_str() {
            "true" => negate(&q),
            _ => format!("(or {} {})", negate(&ok), negate(&q)),
        },
        Mode::Partial => and_all(vec![ok.clone(), negate(&q)]),
    };
    let assertion = and_all(vec![p, path, bad]);

    let mut notes = vec!["finite-domain overflow and out-of-domain assignments are not modeled".to_string()];
    if program.contains_loop() {
        notes.push(match mode {
            Mode::Total => format!("paths needing more than {} iterations count as failures", options.unroll),
            Mode::Partial => format!("only paths within {} iterations are covered", options.unroll),
        });
    }
    if enc.havoc && mode == Mode::Total && !ok.eq("true") {
        notes.push("every declared value must lead to termination within the bound".into());
    }
    let digest = Sha256::digest(pretty_print(program).as_bytes());
    Ok(VCDocument {
        logic: if enc.nonlinear { "QF_NIA" } else { "QF_LIA" },
        program_hash: hex(&digest),
        mode,
        unroll: options.unroll,
        notes,
        declarations: enc.declarations,
        assertion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_pred, parse_program, parse_program_with_prelude};

    fn doc(src: &str, vars: &[&str], pre: &str, post: &str, mode: Mode, unroll: usize) -> Result<VCDocument, Error> {
        let program = parse_program_with_prelude(src, vars.iter().copied()).unwrap();
        export_vc(
            &program,
            &parse_pred(pre).unwrap(),
            &parse_pred(post).unwrap(),
            mode,
            ExportOptions { unroll, allow_partial_unroll: false },
        )
    }

    #[test]
    fn straight_line() {
        let d = doc("x = x + 1;", &["x"], "x == 0", "x == 1", Mode::Total, 0).unwrap();
        assert_eq!(d.logic, "QF_LIA");
        assert_eq!(d.assertion, "(and (= x@0 0) (= x@1 (+ x@0 1)) (not (= x@1 1)))");
        assert_eq!(d.declarations, vec![("x@0".to_string(), "Int"), ("x@1".to_string(), "Int")]);
        let text = d.render();
        assert!(text.ends_with("(check-sat)\n"));
        assert!(text.contains("(set-logic QF_LIA)"));
    }

    #[test]
    fn negative_literals() {
        let d = doc("x = -5;", &["x"], "true", "x < 0", Mode::Total, 0).unwrap();
        assert!(d.assertion.contains("(- 5)"));
    }

    #[test]
    fn branches_merge() {
        let d = doc("if (x > 0) x = 1; else y = 2;", &["x", "y"], "true", "x >= 0", Mode::Total, 0).unwrap();
        assert_eq!(
            d.assertion,
            "(and (and (=> (> x@0 0) (and (= x@1 1) (= x@2 x@1) (= y@2 y@0))) \
             (=> (not (> x@0 0)) (and (= y@1 2) (= x@2 x@0) (= y@2 y@1)))) (not (>= x@2 0)))"
        );
    }

    #[test]
    fn loops_need_a_bound() {
        let err = doc("while (i < n) i++;", &["i", "n"], "true", "true", Mode::Total, 0).unwrap_err();
        assert!(matches!(err, Error::UnsupportedForExport(_)));
        let d = doc("while (i <= n) { f *= i; i++; }", &["i", "n", "f"], "true", "true", Mode::Total, 3).unwrap();
        assert_eq!(d.logic, "QF_NIA");
        assert!(d.assertion.contains("(not (ite"));
        let p = doc("while (i <= n) i++;", &["i", "n"], "true", "true", Mode::Partial, 1).unwrap();
        assert_eq!(p.logic, "QF_LIA");
    }

    #[test]
    fn partial_unroll_flag() {
        let program = parse_program_with_prelude("while (i < 3) i++;", ["i"]).unwrap();
        let d = export_vc(
            &program,
            &PredExpr::True,
            &PredExpr::True,
            Mode::Total,
            ExportOptions { unroll: 0, allow_partial_unroll: true },
        )
        .unwrap();
        assert_eq!(d.assertion, "(or (not (ite (< i@0 3) false true)) false)");
    }

    #[test]
    fn deterministic_and_hashed() {
        let program = parse_program("int a = 5; if (a > 0) a = 10; else a = 100;").unwrap();
        let make = || {
            export_vc(&program, &PredExpr::True, &parse_pred("a == 10").unwrap(), Mode::Total, ExportOptions::default())
                .unwrap()
                .render()
        };
        let a = make();
        assert_eq!(a, make());
        let hash_line = a.lines().find(|l| l.starts_with("; program-sha256: ")).unwrap();
        assert_eq!(hash_line.len(), "; program-sha256: ".len() + 64);
    }
}
