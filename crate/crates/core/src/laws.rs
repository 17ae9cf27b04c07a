//! Executable finite-model checks of the general Hoare and `wp` laws and of
//! the first-order schemas they rest on.
//!
//! Each law is either a set-level statement about predicates `P, Q, R, …`
//! and one relation `S` (triples are read as total correctness), or a
//! first-order schema whose metavariables `F, G, H, K` are instantiated with
//! fresh predicate or relation atoms and evaluated with [`eval_sformula`].
//!
//! Bindings come from three sources per space size: every binding when the
//! size is at most 2 (or when forced), otherwise random trials plus the
//! boundary bindings built from `τ`, `φ` and the empty, full and identity
//! relations.
//!
//! Random bindings are drawn from ChaCha8 streams. The stream for trial `t`
//! of law `id` at size `n` under base seed `s` is seeded with
//! `mix(mix(mix(s ^ fnv1a(id)) ^ n) ^ t)`, where `mix` is the SplitMix64
//! finalizer, so every violation can be replayed from its recorded seed.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::exec::{self, Exec};
use crate::hoare::{check_partial_with, check_total_with, wp_with};
use crate::predicates::{eval_sformula, Binding, Env, PredSet, SFormula};
use crate::semantics::Relation;
use crate::Error;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_SIZES: [usize; 4] = [1, 2, 3, 4];
/// Largest binding count enumerated exhaustively.
pub const EXHAUSTIVE_CAP: u128 = 1 << 20;
/// Violating instances kept per law; all are counted.
pub const MAX_KEPT_VIOLATIONS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LawKind {
    /// Valid; must never be violated.
    Theorem,
    /// Deliberately invalid; the suite must find a violation.
    NegativeControl,
    /// A variant whose status is reported but not gated.
    Diagnostic,
}

impl LawKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LawKind::Theorem => "theorem",
            LawKind::NegativeControl => "negative-control",
            LawKind::Diagnostic => "diagnostic",
        }
    }
}

/// Set-level view of one binding: named predicates plus the relation `S`.
struct Sets<'a> {
    env: &'a Env,
    size: usize,
}

impl Sets<'_> {
    fn p(&self, name: &str) -> &PredSet {
        match self.env.get(name) {
            Some(Binding::Pred(p)) => p,
            _ => panic!("law binding `{name}` missing"),
        }
    }

    fn s(&self) -> &Relation {
        match self.env.get("S") {
            Some(Binding::Rel(r)) => r,
            _ => panic!("law binding `S` missing"),
        }
    }

    fn tau(&self) -> PredSet {
        PredSet::full(self.size)
    }

    fn phi(&self) -> PredSet {
        PredSet::empty(self.size)
    }

    /// `{p} S {q}`, total correctness.
    fn t(&self, p: &PredSet, q: &PredSet) -> bool {
        check_total_with(p, self.s(), q, Exec::Sequential).expect("same space").holds
    }

    fn pc(&self, p: &PredSet, q: &PredSet) -> bool {
        check_partial_with(p, self.s(), q, Exec::Sequential).expect("same space").holds
    }

    fn wp(&self, q: &PredSet) -> PredSet {
        wp_with(self.s(), q, Exec::Sequential).expect("same space")
    }

    /// `∀x∃y S(x,y)`.
    fn serial(&self) -> bool {
        (0..self.size).all(|x| self.s().has_successor(x))
    }
}

fn imp(a: bool, b: bool) -> bool {
    !a || b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    RelXY,
    PredX,
    PredY,
    RelYX,
    RelXX,
    RelYY,
}

impl Shape {
    fn is_rel(self) -> bool {
        matches!(self, Shape::RelXY | Shape::RelYX | Shape::RelXX | Shape::RelYY)
    }

    fn atom(self, symbol: &str) -> SFormula {
        match self {
            Shape::RelXY => SFormula::rel(symbol, "x", "y"),
            Shape::RelYX => SFormula::rel(symbol, "y", "x"),
            Shape::RelXX => SFormula::rel(symbol, "x", "x"),
            Shape::RelYY => SFormula::rel(symbol, "y", "y"),
            Shape::PredX => SFormula::pred(symbol, "x"),
            Shape::PredY => SFormula::pred(symbol, "y"),
        }
    }
}

// The first shape of a pool is the most general one and is used for
// exhaustive and boundary bindings.
const ANY_ATOM: &[Shape] = &[
    Shape::RelXY,
    Shape::PredX,
    Shape::PredY,
    Shape::RelYX,
    Shape::RelXX,
    Shape::RelYY,
];
const NO_X: &[Shape] = &[Shape::PredY, Shape::RelYY];
const ONLY_PRED_X: &[Shape] = &[Shape::PredX];
const ONLY_REL_XY: &[Shape] = &[Shape::RelXY];

type SetLaw = fn(&Sets) -> bool;
type SchemaBuilder = fn(&[SFormula]) -> SFormula;

#[derive(Clone, Copy)]
enum Check {
    Sets { preds: &'static [&'static str], holds: SetLaw },
    Schema { metas: &'static [&'static str], pool: &'static [Shape], build: SchemaBuilder },
}

/// A registered law.
#[derive(Clone, Copy)]
pub struct Law {
    pub id: &'static str,
    pub kind: LawKind,
    pub statement: &'static str,
    check: Check,
}

impl fmt::Debug for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Law").field("id", &self.id).field("kind", &self.kind).finish()
    }
}

impl Law {
    pub fn is_schema(&self) -> bool {
        matches!(self.check, Check::Schema { .. })
    }

    /// Symbols a binding for this law must cover.
    pub fn symbols(&self) -> Vec<&'static str> {
        match self.check {
            Check::Sets { preds, .. } => preds.iter().copied().chain(["S"]).collect(),
            Check::Schema { metas, .. } => metas.to_vec(),
        }
    }
}

const PQR: &[&str] = &["P", "Q", "R"];
const PQ: &[&str] = &["P", "Q"];
const PQRW: &[&str] = &["P", "Q", "R", "W"];
const UPQV: &[&str] = &["U", "P", "Q", "V"];
const PQUW: &[&str] = &["P", "Q", "U", "W"];
const PQW: &[&str] = &["P", "Q", "W"];
const P: &[&str] = &["P"];
const Q: &[&str] = &["Q"];
const QR: &[&str] = &["Q", "R"];
const F: &[&str] = &["F"];
const FG: &[&str] = &["F", "G"];
const FGH: &[&str] = &["F", "G", "H"];
const FGHK: &[&str] = &["F", "G", "H", "K"];

fn all(f: SFormula) -> SFormula {
    SFormula::forall("x", f)
}

fn not(f: &SFormula) -> SFormula {
    SFormula::not(f.clone())
}

fn tau() -> SFormula {
    SFormula::pred("tau", "x")
}

fn phi() -> SFormula {
    SFormula::pred("phi", "x")
}

macro_rules! sets {
    ($id:expr, $kind:expr, $stmt:expr, $preds:expr, $f:expr) => {
        Law {
            id: $id,
            kind: $kind,
            statement: $stmt,
            check: Check::Sets { preds: $preds, holds: $f },
        }
    };
}

macro_rules! schema {
    ($id:expr, $kind:expr, $stmt:expr, $metas:expr, $pool:expr, $f:expr) => {
        Law {
            id: $id,
            kind: $kind,
            statement: $stmt,
            check: Check::Schema { metas: $metas, pool: $pool, build: $f },
        }
    };
}

use LawKind::{Diagnostic, NegativeControl, Theorem};

static LAWS: &[Law] = &[
    sets!("thm3.1a", Theorem, "∀x(P⇒R) ∧ {R}S{Q} ⇒ {P}S{Q}", PQR, |c| {
        imp(c.p("P").is_subset(c.p("R")) && c.t(c.p("R"), c.p("Q")), c.t(c.p("P"), c.p("Q")))
    }),
    sets!("thm3.1b", Theorem, "{P}S{R} ∧ ∀x(R⇒Q) ⇒ {P}S{Q}", PQR, |c| {
        imp(c.t(c.p("P"), c.p("R")) && c.p("R").is_subset(c.p("Q")), c.t(c.p("P"), c.p("Q")))
    }),
    sets!("thm3.1c", Theorem, "∀x(U⇒P) ∧ ∀x(Q⇒V) ∧ {P}S{Q} ⇒ {U}S{V}", UPQV, |c| {
        imp(
            c.p("U").is_subset(c.p("P")) && c.p("Q").is_subset(c.p("V")) && c.t(c.p("P"), c.p("Q")),
            c.t(c.p("U"), c.p("V")),
        )
    }),
    sets!("thm3.2a", Theorem, "{P}S{Q} ∧ {R}S{W} ⇒ {P∨R}S{Q∨W}", PQRW, |c| {
        let (p, q, r, w) = (c.p("P"), c.p("Q"), c.p("R"), c.p("W"));
        imp(c.t(p, q) && c.t(r, w), c.t(&(p | r), &(q | w)))
    }),
    sets!("thm3.2b", Theorem, "{P}S{Q} ∧ {R}S{W} ⇒ {P∧R}S{Q∧W}", PQRW, |c| {
        let (p, q, r, w) = (c.p("P"), c.p("Q"), c.p("R"), c.p("W"));
        imp(c.t(p, q) && c.t(r, w), c.t(&(p & r), &(q & w)))
    }),
    sets!("cor3.1", Theorem, "{P}S{Q} ∧ {¬P}S{W} ⇒ {τ}S{Q∨W}", PQW, |c| {
        let (p, q, w) = (c.p("P"), c.p("Q"), c.p("W"));
        imp(c.t(p, q) && c.t(&!p, w), c.t(&c.tau(), &(q | w)))
    }),
    sets!("thm3.3", Theorem, "{P}S{Q} ∨ {R}S{W} ⇒ {P∧R}S{Q∨W}", PQRW, |c| {
        let (p, q, r, w) = (c.p("P"), c.p("Q"), c.p("R"), c.p("W"));
        imp(c.t(p, q) || c.t(r, w), c.t(&(p & r), &(q | w)))
    }),
    sets!("thm3.4a", Theorem, "{P∨R}S{Q} ⇔ {P}S{Q} ∧ {R}S{Q}", PQR, |c| {
        let (p, q, r) = (c.p("P"), c.p("Q"), c.p("R"));
        c.t(&(p | r), q) == (c.t(p, q) && c.t(r, q))
    }),
    sets!("thm3.4b", Theorem, "{P}S{Q∧R} ⇔ {P}S{Q} ∧ {P}S{R}", PQR, |c| {
        let (p, q, r) = (c.p("P"), c.p("Q"), c.p("R"));
        c.t(p, &(q & r)) == (c.t(p, q) && c.t(p, r))
    }),
    sets!("thm3.4c", Theorem, "{P∨U}S{Q∧W} ⇔ {P}S{Q} ∧ {U}S{W} ∧ {P}S{W} ∧ {U}S{Q}", PQUW, |c| {
        let (p, q, u, w) = (c.p("P"), c.p("Q"), c.p("U"), c.p("W"));
        c.t(&(p | u), &(q & w)) == (c.t(p, q) && c.t(u, w) && c.t(p, w) && c.t(u, q))
    }),
    sets!("thm3.4d", Theorem, "{P}S{Q} ∨ {P}S{W} ⇒ {P}S{Q∨W}", PQW, |c| {
        let (p, q, w) = (c.p("P"), c.p("Q"), c.p("W"));
        imp(c.t(p, q) || c.t(p, w), c.t(p, &(q | w)))
    }),
    sets!("thm3.5", Theorem, "{P}S{φ} ⇔ ∀x¬P(x)", P, |c| {
        c.t(c.p("P"), &c.phi()) == c.p("P").is_empty()
    }),
    sets!("thm3.6a", Theorem, "{P}S{Q} ∧ {R}S{¬Q} ⇒ ∀x¬(P∧R)", PQR, |c| {
        let (p, q, r) = (c.p("P"), c.p("Q"), c.p("R"));
        imp(c.t(p, q) && c.t(r, &!q), p.is_disjoint(r))
    }),
    sets!("thm3.6b", Theorem, "{P}S{Q} ∧ {P}S{¬Q} ⇔ ∀x¬P(x)", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        (c.t(p, q) && c.t(p, &!q)) == p.is_empty()
    }),
    sets!("thm3.6c", Theorem, "[{P}S{¬Q} ⇒ ¬{P}S{Q}] ⇔ ∃xP(x)", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        imp(c.t(p, &!q), !c.t(p, q)) == !p.is_empty()
    }),
    sets!("thm3.6d", Theorem, "{P}S{Q} ∧ {¬P}S{Q} ⇔ ∀x∃yS(x,y) ∧ ∀x∀z(S(x,z)⇒Q(z))", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        let rhs = c.serial() && c.s().pairs().all(|(_, z)| q.contains(z));
        (c.t(p, q) && c.t(&!p, q)) == rhs
    }),
    sets!("thm3.6e", Theorem, "∃x∃z(S(x,z)∧¬Q(z)) ⇒ [{¬P}S{Q} ⇒ ¬{P}S{Q}]", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        let lhs = c.s().pairs().any(|(_, z)| !q.contains(z));
        imp(lhs, imp(c.t(&!p, q), !c.t(p, q)))
    }),
    sets!("cor3.2", Theorem, "{P}S{Q} ∧ {P}S{¬Q} ⇔ ∀x(P(x)⇔φ(x))", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        (c.t(p, q) && c.t(p, &!q)) == (*p == c.phi())
    }),
    sets!("cor3.3", Theorem, "[{P}S{¬Q} ⇒ ¬{P}S{Q}] ⇔ ¬∀x(P(x)⇔φ(x))", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        imp(c.t(p, &!q), !c.t(p, q)) == (*p != c.phi())
    }),
    sets!("thm5.2", Theorem, "wp(S,φ) ⇔ φ", &[], |c| c.wp(&c.phi()) == c.phi()),
    sets!("thm5.3", Theorem, "(Q⇒R) ⇒ (wp(S,Q)⇒wp(S,R))", QR, |c| {
        let (q, r) = (c.p("Q"), c.p("R"));
        imp(q.is_subset(r), c.wp(q).is_subset(&c.wp(r)))
    }),
    sets!("thm5.4", Theorem, "wp(S,Q) ∧ wp(S,R) ⇔ wp(S,Q∧R)", QR, |c| {
        let (q, r) = (c.p("Q"), c.p("R"));
        &c.wp(q) & &c.wp(r) == c.wp(&(q & r))
    }),
    sets!("thm5.5", Theorem, "wp(S,Q) ∨ wp(S,R) ⇒ wp(S,Q∨R)", QR, |c| {
        let (q, r) = (c.p("Q"), c.p("R"));
        (&c.wp(q) | &c.wp(r)).is_subset(&c.wp(&(q | r)))
    }),
    sets!("thm5.6", Theorem, "¬(wp(S,Q) ∧ wp(S,¬Q))", Q, |c| {
        let q = c.p("Q");
        c.wp(q).is_disjoint(&c.wp(&!q))
    }),
    sets!("thm5.7", Theorem, "{P}S{Q} ⇔ (P⇒wp(S,Q))", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        c.t(p, q) == p.is_subset(&c.wp(q))
    }),
    sets!("wp1", Theorem, "{wp(S,Q)}S{Q}", Q, |c| c.t(&c.wp(c.p("Q")), c.p("Q"))),
    sets!("wp2", Theorem, "{P}S{Q} ⇒ ∀x(P(x)⇒wp(S,Q)(x))", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        imp(c.t(p, q), p.is_subset(&c.wp(q)))
    }),
    schema!("t1", Theorem, "∀x∀yF ⇔ ∀y∀xF", F, ANY_ATOM, |m| {
        all(SFormula::forall("y", m[0].clone())).iff(SFormula::forall("y", all(m[0].clone())))
    }),
    schema!("t2", Theorem, "∃x∀yF ⇒ ∀y∃xF", F, ANY_ATOM, |m| {
        SFormula::exists("x", SFormula::forall("y", m[0].clone()))
            .implies(SFormula::forall("y", SFormula::exists("x", m[0].clone())))
    }),
    schema!("t3", Theorem, "∀xF ⇔ F (x not free in F)", F, NO_X, |m| all(m[0].clone()).iff(m[0].clone())),
    schema!("t4", Theorem, "∀x(F∧G) ⇔ ∀xF ∧ ∀xG", FG, ANY_ATOM, |m| {
        all(m[0].clone().and(m[1].clone())).iff(all(m[0].clone()).and(all(m[1].clone())))
    }),
    schema!("t5", Theorem, "∀xF ∨ ∀xG ⇒ ∀x(F∨G)", FG, ANY_ATOM, |m| {
        all(m[0].clone()).or(all(m[1].clone())).implies(all(m[0].clone().or(m[1].clone())))
    }),
    schema!("t6", Theorem, "¬∀xF ⇔ ∃x¬F", F, ANY_ATOM, |m| {
        SFormula::not(all(m[0].clone())).iff(SFormula::exists("x", not(&m[0])))
    }),
    schema!("t7", Theorem, "∀xF ⇔ ∀x(F⇔τ)", F, ANY_ATOM, |m| {
        all(m[0].clone()).iff(all(m[0].clone().iff(tau())))
    }),
    schema!("t8", Theorem, "∀x(τ⇒F) ⇔ ∀xF", F, ANY_ATOM, |m| {
        all(tau().implies(m[0].clone())).iff(all(m[0].clone()))
    }),
    schema!("t9", Theorem, "∀x¬F ⇔ ∀x(F⇔φ)", F, ANY_ATOM, |m| {
        all(not(&m[0])).iff(all(m[0].clone().iff(phi())))
    }),
    schema!("t10", Theorem, "∀x(F ⇔ F∧F)", F, ANY_ATOM, |m| {
        all(m[0].clone().iff(m[0].clone().and(m[0].clone())))
    }),
    schema!("t11", Theorem, "∀x(F ⇒ F∨G)", FG, ANY_ATOM, |m| {
        all(m[0].clone().implies(m[0].clone().or(m[1].clone())))
    }),
    schema!("t12", Theorem, "∀x(¬F∨¬G) ⇔ ∀x¬(F∧G)", FG, ANY_ATOM, |m| {
        all(not(&m[0]).or(not(&m[1]))).iff(all(SFormula::not(m[0].clone().and(m[1].clone()))))
    }),
    schema!("t13", Theorem, "∀x(¬F∧¬G) ⇔ ∀x¬(F∨G)", FG, ANY_ATOM, |m| {
        all(not(&m[0]).and(not(&m[1]))).iff(all(SFormula::not(m[0].clone().or(m[1].clone()))))
    }),
    schema!("t14", Theorem, "∀x(F⇒G) ⇒ (∀xF ⇒ ∀xG)", FG, ANY_ATOM, |m| {
        all(m[0].clone().implies(m[1].clone())).implies(all(m[0].clone()).implies(all(m[1].clone())))
    }),
    schema!("t15", Theorem, "∀x(F⇒G) ⇔ ∀x(¬F∨G)", FG, ANY_ATOM, |m| {
        all(m[0].clone().implies(m[1].clone())).iff(all(not(&m[0]).or(m[1].clone())))
    }),
    schema!("t16", Theorem, "∀x[(F⇒H)∧(H⇒G)] ⇒ ∀x(F⇒G)", FGH, ANY_ATOM, |m| {
        let (f, g, h) = (&m[0], &m[1], &m[2]);
        all(f.clone().implies(h.clone()).and(h.clone().implies(g.clone()))).implies(all(f.clone().implies(g.clone())))
    }),
    schema!("t17", Theorem, "∀x[(F⇒G)∧(H⇒K)] ⇒ ∀x[(F∨H)⇒(G∨K)]", FGHK, ANY_ATOM, |m| {
        let (f, g, h, k) = (&m[0], &m[1], &m[2], &m[3]);
        all(f.clone().implies(g.clone()).and(h.clone().implies(k.clone())))
            .implies(all(f.clone().or(h.clone()).implies(g.clone().or(k.clone()))))
    }),
    schema!("t18", Theorem, "∀x[(F⇒G)∧(H⇒K)] ⇒ ∀x[(F∧H)⇒(G∧K)]", FGHK, ANY_ATOM, |m| {
        let (f, g, h, k) = (&m[0], &m[1], &m[2], &m[3]);
        all(f.clone().implies(g.clone()).and(h.clone().implies(k.clone())))
            .implies(all(f.clone().and(h.clone()).implies(g.clone().and(k.clone()))))
    }),
    schema!("t19", Theorem, "∀x[(F⇒G)∧(F⇒H)] ⇔ ∀x(F⇒G∧H)", FGH, ANY_ATOM, |m| {
        let (f, g, h) = (&m[0], &m[1], &m[2]);
        all(f.clone().implies(g.clone()).and(f.clone().implies(h.clone())))
            .iff(all(f.clone().implies(g.clone().and(h.clone()))))
    }),
    schema!("t20", Theorem, "∀x[(F⇒G)∨(F⇒H)] ⇔ ∀x(F⇒G∨H)", FGH, ANY_ATOM, |m| {
        let (f, g, h) = (&m[0], &m[1], &m[2]);
        all(f.clone().implies(g.clone()).or(f.clone().implies(h.clone())))
            .iff(all(f.clone().implies(g.clone().or(h.clone()))))
    }),
    schema!("t21", Theorem, "∀x[(F⇒H)∧(G⇒H)] ⇔ ∀x(F∨G⇒H)", FGH, ANY_ATOM, |m| {
        let (f, g, h) = (&m[0], &m[1], &m[2]);
        all(f.clone().implies(h.clone()).and(g.clone().implies(h.clone())))
            .iff(all(f.clone().or(g.clone()).implies(h.clone())))
    }),
    schema!("t22", Theorem, "∀x[(F⇒G)∨(H⇒K)] ⇒ ∀x[(F∧H)⇒(G∨K)]", FGHK, ANY_ATOM, |m| {
        let (f, g, h, k) = (&m[0], &m[1], &m[2], &m[3]);
        all(f.clone().implies(g.clone()).or(h.clone().implies(k.clone())))
            .implies(all(f.clone().and(h.clone()).implies(g.clone().or(k.clone()))))
    }),
    sets!("negative-control-1", NegativeControl, "{P}S{Q} ∨ {R}S{W} ⇒ {P∨R}S{Q∨W}", PQRW, |c| {
        let (p, q, r, w) = (c.p("P"), c.p("Q"), c.p("R"), c.p("W"));
        imp(c.t(p, q) || c.t(r, w), c.t(&(p | r), &(q | w)))
    }),
    sets!("negative-control-2", NegativeControl, "wp(S,Q∨R) ⇒ wp(S,Q) ∨ wp(S,R)", QR, |c| {
        let (q, r) = (c.p("Q"), c.p("R"));
        c.wp(&(q | r)).is_subset(&(&c.wp(q) | &c.wp(r)))
    }),
    sets!("negative-control-3", NegativeControl, "∀x(R⇒P) ∧ {R}S{Q} ⇒ {P}S{Q}", PQR, |c| {
        imp(c.p("R").is_subset(c.p("P")) && c.t(c.p("R"), c.p("Q")), c.t(c.p("P"), c.p("Q")))
    }),
    sets!("negative-control-4", NegativeControl, "partial {P}S{φ} ⇔ ∀x¬P(x)", P, |c| {
        c.pc(c.p("P"), &c.phi()) == c.p("P").is_empty()
    }),
    schema!("negative-control-5", NegativeControl, "∀y∃xF ⇒ ∃x∀yF", F, ONLY_REL_XY, |m| {
        SFormula::forall("y", SFormula::exists("x", m[0].clone()))
            .implies(SFormula::exists("x", SFormula::forall("y", m[0].clone())))
    }),
    schema!("t3-open", Diagnostic, "∀xF ⇔ F with x free in F", F, ONLY_PRED_X, |m| {
        all(m[0].clone()).iff(m[0].clone())
    }),
    schema!("t11-printed", Diagnostic, "∀x(F ⇔ F∨G)", FG, ANY_ATOM, |m| {
        all(m[0].clone().iff(m[0].clone().or(m[1].clone())))
    }),
    schema!("t20-printed", Diagnostic, "∀x[(F⇒G)∧(F⇒H)] ⇔ ∀x(F⇒G∨H)", FGH, ANY_ATOM, |m| {
        let (f, g, h) = (&m[0], &m[1], &m[2]);
        all(f.clone().implies(g.clone()).and(f.clone().implies(h.clone())))
            .iff(all(f.clone().implies(g.clone().or(h.clone()))))
    }),
    sets!("thm3.6d-printed", Diagnostic, "{P}S{Q} ∧ {¬P}S{Q} ⇔ ∀x∃yS(x,y) ∧ ∀x∀z(S(x,z)⇒Q(x))", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        let rhs = c.serial() && c.s().pairs().all(|(x, _)| q.contains(x));
        (c.t(p, q) && c.t(&!p, q)) == rhs
    }),
    sets!("thm3.6e-converse", Diagnostic, "[{¬P}S{Q} ⇒ ¬{P}S{Q}] ⇒ ∃x∃z(S(x,z)∧¬Q(z))", PQ, |c| {
        let (p, q) = (c.p("P"), c.p("Q"));
        let rhs = c.s().pairs().any(|(_, z)| !q.contains(z));
        imp(imp(c.t(&!p, q), !c.t(p, q)), rhs)
    }),
];

/// Every registered law, theorems first.
pub fn registry() -> &'static [Law] {
    LAWS
}

pub fn find_law(id: &str) -> Result<&'static Law, Error> {
    let key = id.to_ascii_lowercase();
    LAWS.iter()
        .find(|l| l.id == key)
        .ok_or_else(|| Error::UnknownLaw(id.to_string()))
}

/// SplitMix64 output function.
pub fn mix64(z: u64) -> u64 {
    let z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of trial `trial` of law `id` on a space of `size` states.
pub fn trial_seed(seed: u64, id: &str, size: usize, trial: u64) -> u64 {
    mix64(mix64(mix64(seed ^ fnv1a(id)) ^ size as u64) ^ trial)
}

fn draw_predset(rng: &mut ChaCha8Rng, size: usize) -> PredSet {
    PredSet::from_fn(size, |_| rng.gen::<bool>())
}

fn draw_relation(rng: &mut ChaCha8Rng, size: usize) -> Relation {
    let rows = (0..size)
        .map(|_| (0..size).filter(|_| rng.gen::<bool>()).collect())
        .collect();
    Relation::from_rows(size, rows).expect("rows in range")
}

/// Each state included independently with probability ½.
pub fn random_predset(size: usize, seed: u64) -> PredSet {
    draw_predset(&mut ChaCha8Rng::seed_from_u64(seed), size)
}

/// Each pair included independently with probability ½.
pub fn random_relation(size: usize, seed: u64) -> Relation {
    draw_relation(&mut ChaCha8Rng::seed_from_u64(seed), size)
}

/// Where a binding came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Random,
    Boundary,
    Exhaustive,
}

/// One concrete binding of a law's symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawInstance {
    pub law: String,
    pub size: usize,
    /// PRNG seed for random bindings, enumeration index otherwise.
    pub seed: u64,
    pub origin: Origin,
    pub bindings: Env,
    /// The instantiated closed formula, for schema laws.
    pub formula: Option<SFormula>,
}

impl LawInstance {
    pub fn to_json(&self) -> Value {
        let bindings: serde_json::Map<String, Value> = self
            .bindings
            .iter()
            .map(|(name, b)| {
                let v = match b {
                    Binding::Pred(p) => json!(p.iter().collect::<Vec<_>>()),
                    Binding::Rel(r) => json!(r.pairs().map(|(x, y)| [x, y]).collect::<Vec<_>>()),
                };
                (name.clone(), v)
            })
            .collect();
        json!({
            "law": self.law,
            "size": self.size,
            "seed": self.seed,
            "origin": format!("{:?}", self.origin).to_lowercase(),
            "bindings": bindings,
            "formula": self.formula.as_ref().map(|f| f.to_string()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub law: String,
    pub kind: LawKind,
    pub trials: usize,
    pub violation_count: usize,
    /// The first [`MAX_KEPT_VIOLATIONS`] violations ordered by `(seed, size)`.
    pub violations: Vec<LawInstance>,
}

impl LawResult {
    /// Theorems and diagnostics pass with no violation; negative controls
    /// pass when at least one was found.
    pub fn passed(&self) -> bool {
        match self.kind {
            LawKind::NegativeControl => self.violation_count > 0,
            _ => self.violation_count == 0,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"law": self.law, "trials": self.trials, "violations": self.violation_count})
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Enumeration {
    /// Exhaustive at sizes up to 2, random plus boundary above.
    #[default]
    Auto,
    /// Exhaustive at every requested size.
    Exhaustive,
    /// Random plus boundary at every size.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawConfig {
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub enumeration: Enumeration,
    pub exec: Exec,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            trials: DEFAULT_TRIALS,
            sizes: DEFAULT_SIZES.to_vec(),
            seed: DEFAULT_SEED,
            enumeration: Enumeration::Auto,
            exec: Exec::default(),
        }
    }
}

/// A slot to fill: a predicate or a relation symbol.
#[derive(Clone, Copy)]
struct Slot {
    name: &'static str,
    rel: bool,
}

fn slot_options(slot: Slot, size: usize) -> u128 {
    let bits = if slot.rel { size * size } else { size };
    if bits >= 127 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

fn decode_pred(size: usize, mask: u128) -> PredSet {
    PredSet::from_fn(size, |i| mask >> i & 1 == 1)
}

fn decode_rel(size: usize, mask: u128) -> Relation {
    let rows = (0..size)
        .map(|x| (0..size).filter(|y| mask >> (x * size + y) & 1 == 1).collect())
        .collect();
    Relation::from_rows(size, rows).expect("rows in range")
}

impl Law {
    fn general_slots(&self) -> Vec<Slot> {
        match self.check {
            Check::Sets { preds, .. } => preds
                .iter()
                .map(|&name| Slot { name, rel: false })
                .chain([Slot { name: "S", rel: true }])
                .collect(),
            Check::Schema { metas, pool, .. } => metas
                .iter()
                .map(|&name| Slot {
                    name,
                    rel: pool[0].is_rel(),
                })
                .collect(),
        }
    }

    fn general_shapes(&self) -> Vec<Shape> {
        match self.check {
            Check::Sets { .. } => Vec::new(),
            Check::Schema { metas, pool, .. } => vec![pool[0]; metas.len()],
        }
    }

    /// Evaluates the law on one binding; `Some(formula)` for schemas.
    fn eval(&self, env: &mut Env, shapes: &[Shape], size: usize) -> (bool, Option<SFormula>) {
        match self.check {
            Check::Sets { holds, .. } => (holds(&Sets { env, size }), None),
            Check::Schema { metas, build, .. } => {
                let atoms: Vec<SFormula> = metas.iter().zip(shapes).map(|(m, s)| s.atom(m)).collect();
                let formula = build(&atoms).closure();
                env.insert("tau".into(), Binding::Pred(PredSet::full(size)));
                env.insert("phi".into(), Binding::Pred(PredSet::empty(size)));
                let ok = eval_sformula(&formula, env, size).expect("law formula is well-formed");
                (ok, Some(formula))
            }
        }
    }

    fn exhaustive_count(&self, size: usize) -> u128 {
        self.general_slots()
            .iter()
            .map(|&s| slot_options(s, size))
            .fold(1u128, |acc, n| acc.saturating_mul(n))
    }

    fn exhaustive_instance(&self, size: usize, mut index: u128) -> (Env, Vec<Shape>) {
        let mut env = Env::new();
        for slot in self.general_slots() {
            let n = slot_options(slot, size);
            let mask = index % n;
            index /= n;
            let b = if slot.rel {
                Binding::Rel(decode_rel(size, mask))
            } else {
                Binding::Pred(decode_pred(size, mask))
            };
            env.insert(slot.name.to_string(), b);
        }
        (env, self.general_shapes())
    }

    fn boundary_count(&self) -> u128 {
        self.general_slots()
            .iter()
            .map(|s| if s.rel { 3 } else { 2 })
            .product()
    }

    fn boundary_instance(&self, size: usize, mut index: u128) -> (Env, Vec<Shape>) {
        let mut env = Env::new();
        for slot in self.general_slots() {
            let b = if slot.rel {
                let r = match index % 3 {
                    0 => Relation::empty(size),
                    1 => Relation::full(size),
                    _ => Relation::identity(size),
                };
                index /= 3;
                Binding::Rel(r)
            } else {
                let p = if index.is_multiple_of(2) { PredSet::empty(size) } else { PredSet::full(size) };
                index /= 2;
                Binding::Pred(p)
            };
            env.insert(slot.name.to_string(), b);
        }
        (env, self.general_shapes())
    }

    fn random_instance(&self, size: usize, seed: u64) -> (Env, Vec<Shape>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut env = Env::new();
        match self.check {
            Check::Sets { preds, .. } => {
                for &name in preds {
                    env.insert(name.to_string(), Binding::Pred(draw_predset(&mut rng, size)));
                }
                env.insert("S".into(), Binding::Rel(draw_relation(&mut rng, size)));
                (env, Vec::new())
            }
            Check::Schema { metas, pool, .. } => {
                let shapes: Vec<Shape> = metas.iter().map(|_| pool[rng.gen_range(0..pool.len())]).collect();
                for (&name, shape) in metas.iter().zip(&shapes) {
                    let b = if shape.is_rel() {
                        Binding::Rel(draw_relation(&mut rng, size))
                    } else {
                        Binding::Pred(draw_predset(&mut rng, size))
                    };
                    env.insert(name.to_string(), b);
                }
                (env, shapes)
            }
        }
    }

    /// Runs `count` instances produced by `make`, in parallel chunks.
    fn run<M>(&self, size: usize, count: u128, origin: Origin, exec: Exec, make: M) -> (usize, Vec<LawInstance>)
    where
        M: Fn(u128) -> (Env, Vec<Shape>, u64) + Sync + Send,
    {
        const CHUNK: u128 = 256;
        let chunks = count.div_ceil(CHUNK) as usize;
        let per_chunk = exec::map_range(exec, chunks, |c| {
            let start = c as u128 * CHUNK;
            let mut found = Vec::new();
            let mut total = 0usize;
            for k in start..count.min(start + CHUNK) {
                let (mut env, shapes, seed) = make(k);
                let (ok, formula) = self.eval(&mut env, &shapes, size);
                if !ok {
                    total += 1;
                    if found.len() < MAX_KEPT_VIOLATIONS {
                        found.push(LawInstance {
                            law: self.id.to_string(),
                            size,
                            seed,
                            origin,
                            bindings: env,
                            formula,
                        });
                    }
                }
            }
            (total, found)
        });
        let total = per_chunk.iter().map(|(t, _)| t).sum();
        let found = per_chunk.into_iter().flat_map(|(_, f)| f).collect();
        (total, found)
    }
}

/// Checks `id` on every size of `config`.
pub fn check_law_with(id: &str, config: &LawConfig) -> Result<LawResult, Error> {
    let law = find_law(id)?;
    let mut trials = 0usize;
    let mut violation_count = 0usize;
    let mut violations = Vec::new();
    for &size in &config.sizes {
        let exhaustive = match config.enumeration {
            Enumeration::Auto => size <= 2,
            Enumeration::Exhaustive => true,
            Enumeration::Sampled => false,
        };
        let mut batches = Vec::new();
        if exhaustive {
            let count = law.exhaustive_count(size);
            if count > EXHAUSTIVE_CAP {
                return Err(Error::TooManyBindings {
                    law: law.id.to_string(),
                    size,
                    count,
                });
            }
            batches.push(law.run(size, count, Origin::Exhaustive, config.exec, |k| {
                let (env, shapes) = law.exhaustive_instance(size, k);
                (env, shapes, k as u64)
            }));
            trials += count as usize;
        } else {
            let boundary = law.boundary_count();
            batches.push(law.run(size, boundary, Origin::Boundary, config.exec, |k| {
                let (env, shapes) = law.boundary_instance(size, k);
                (env, shapes, k as u64)
            }));
            batches.push(law.run(size, config.trials as u128, Origin::Random, config.exec, |k| {
                let seed = trial_seed(config.seed, law.id, size, k as u64);
                let (env, shapes) = law.random_instance(size, seed);
                (env, shapes, seed)
            }));
            trials += boundary as usize + config.trials;
        }
        for (count, found) in batches {
            violation_count += count;
            violations.extend(found);
        }
    }
    violations.sort_by_key(|v: &LawInstance| (v.seed, v.size, v.origin));
    violations.truncate(MAX_KEPT_VIOLATIONS);
    Ok(LawResult {
        law: law.id.to_string(),
        kind: law.kind,
        trials,
        violation_count,
        violations,
    })
}

/// Checks `id` with `trials` random trials on each of `sizes`.
pub fn check_law(id: &str, trials: usize, sizes: &[usize]) -> Result<LawResult, Error> {
    check_law_with(
        id,
        &LawConfig {
            trials,
            sizes: sizes.to_vec(),
            ..LawConfig::default()
        },
    )
}

/// Like [`check_law`], restricted to the first-order schemas `t1`..`t22`.
pub fn check_t_schema(id: &str, trials: usize, sizes: &[usize]) -> Result<LawResult, Error> {
    let law = find_law(id)?;
    if !law.is_schema() || law.kind != LawKind::Theorem {
        return Err(Error::UnknownLaw(id.to_string()));
    }
    check_law(law.id, trials, sizes)
}

/// Ids of the registered laws of the given kinds, in registry order.
pub fn law_ids(kinds: &[LawKind]) -> Vec<&'static str> {
    LAWS.iter().filter(|l| kinds.contains(&l.kind)).map(|l| l.id).collect()
}

/// Binding counts used for an exhaustive run, per size.
pub fn exhaustive_counts(id: &str, sizes: &[usize]) -> Result<BTreeMap<usize, u128>, Error> {
    let law = find_law(id)?;
    Ok(sizes.iter().map(|&n| (n, law.exhaustive_count(n))).collect())
}
