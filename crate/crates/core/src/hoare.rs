//! Total and partial correctness of `{P} S {Q}` decided by enumeration, and
//! the extensional weakest precondition.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde_json::{json, Map, Value};

use crate::error::same_size;
use crate::exec::{self, Exec};
use crate::predicates::{pred_to_set_with, PredExpr, PredSet};
use crate::semantics::{denote_with, Relation};
use crate::state_space::{State, StateSpace};
use crate::syntax::{pretty_print, Stmt};
use crate::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Total,
    Partial,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Total => "total",
            Mode::Partial => "partial",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "total" => Ok(Mode::Total),
            "partial" => Ok(Mode::Partial),
            other => Err(format!("unknown mode `{other}` (expected total or partial)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CounterexampleKind {
    /// `P(x)` holds and `x` has no final state.
    NoSuccessor,
    /// Total mode: some final state of a `P`-state falsifies `Q`.
    BadSuccessor,
    /// Partial mode: some final state of a `P`-state falsifies `Q`.
    PartialViolation,
}

impl CounterexampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CounterexampleKind::NoSuccessor => "NoSuccessor",
            CounterexampleKind::BadSuccessor => "BadSuccessor",
            CounterexampleKind::PartialViolation => "PartialViolation",
        }
    }
}

/// State indices refuting a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Counterexample {
    pub kind: CounterexampleKind,
    pub initial: usize,
    pub witness_final: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Initial states examined, in index order, up to and including a counterexample.
    pub states_checked: usize,
    /// Pairs whose initial state was examined.
    pub pairs_checked: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub stats: Stats,
}

impl Verdict {
    fn from_search(found: Option<Counterexample>, s: &Relation, started: Instant) -> Verdict {
        let states_checked = found.map_or(s.size(), |c| c.initial + 1);
        let pairs_checked = if states_checked == 0 { 0 } else { s.pairs_through(states_checked - 1) };
        Verdict {
            holds: found.is_none(),
            counterexample: found,
            stats: Stats {
                states_checked,
                pairs_checked,
                elapsed: started.elapsed(),
            },
        }
    }
}

fn first_bad(s: &Relation, q: &PredSet, x: usize) -> Option<usize> {
    s.successors(x).iter().copied().find(|&z| !q.contains(z))
}

/// `∀x[P(x) ⇒ (∃y S(x,y) ∧ ∀z(S(x,z) ⇒ Q(z)))]`.
pub fn check_total(p: &PredSet, s: &Relation, q: &PredSet) -> Result<Verdict, Error> {
    check_total_with(p, s, q, Exec::default())
}

pub fn check_total_with(p: &PredSet, s: &Relation, q: &PredSet, exec: Exec) -> Result<Verdict, Error> {
    same_size(p.size(), s.size())?;
    same_size(q.size(), s.size())?;
    let started = Instant::now();
    let found = exec::position_first(exec, s.size(), |x| {
        p.contains(x) && (!s.has_successor(x) || first_bad(s, q, x).is_some())
    })
    .map(|x| match first_bad(s, q, x) {
        _ if !s.has_successor(x) => Counterexample {
            kind: CounterexampleKind::NoSuccessor,
            initial: x,
            witness_final: None,
        },
        bad => Counterexample {
            kind: CounterexampleKind::BadSuccessor,
            initial: x,
            witness_final: bad,
        },
    });
    Ok(Verdict::from_search(found, s, started))
}

/// `∀x[(P(x) ∧ ∃y S(x,y)) ⇒ ∀z(S(x,z) ⇒ Q(z))]`.
pub fn check_partial(p: &PredSet, s: &Relation, q: &PredSet) -> Result<Verdict, Error> {
    check_partial_with(p, s, q, Exec::default())
}

pub fn check_partial_with(p: &PredSet, s: &Relation, q: &PredSet, exec: Exec) -> Result<Verdict, Error> {
    same_size(p.size(), s.size())?;
    same_size(q.size(), s.size())?;
    let started = Instant::now();
    let found = exec::position_first(exec, s.size(), |x| p.contains(x) && first_bad(s, q, x).is_some()).map(|x| {
        Counterexample {
            kind: CounterexampleKind::PartialViolation,
            initial: x,
            witness_final: first_bad(s, q, x),
        }
    });
    Ok(Verdict::from_search(found, s, started))
}

pub fn check(mode: Mode, p: &PredSet, s: &Relation, q: &PredSet, exec: Exec) -> Result<Verdict, Error> {
    match mode {
        Mode::Total => check_total_with(p, s, q, exec),
        Mode::Partial => check_partial_with(p, s, q, exec),
    }
}

/// `{x | ∃y S(x,y) ∧ ∀z(S(x,z) ⇒ Q(z))}`.
pub fn wp(s: &Relation, q: &PredSet) -> Result<PredSet, Error> {
    wp_with(s, q, Exec::default())
}

pub fn wp_with(s: &Relation, q: &PredSet, exec: Exec) -> Result<PredSet, Error> {
    same_size(q.size(), s.size())?;
    Ok(PredSet::from_fn_with(s.size(), exec, |x| {
        s.has_successor(x) && s.successors(x).iter().all(|&z| q.contains(z))
    }))
}

/// Outcome of [`verify`], with the inputs echoed back.
#[derive(Clone, Debug)]
pub struct Report {
    pub mode: Mode,
    pub verdict: Verdict,
    pub wp_size: usize,
    pub space: StateSpace,
    pub program: String,
    pub pre: String,
    pub post: String,
}

impl Report {
    /// Initial and (if any) final state of the counterexample.
    pub fn counterexample_states(&self) -> Option<(State, Option<State>)> {
        let c = self.verdict.counterexample?;
        let initial = self.space.index_to_state(c.initial).ok()?;
        let fin = c.witness_final.and_then(|y| self.space.index_to_state(y).ok());
        Some((initial, fin))
    }

    fn state_json(&self, index: usize) -> Value {
        let mut obj = Map::new();
        for (name, value) in self.space.describe(index) {
            obj.insert(name.to_string(), json!(value));
        }
        Value::Object(obj)
    }

    /// `{"mode", "holds", "counterexample", "stats"}`; wall time is left out
    /// so that identical inputs give identical output.
    pub fn to_json(&self) -> Value {
        let counterexample = match self.verdict.counterexample {
            None => Value::Null,
            Some(c) => json!({
                "kind": c.kind.as_str(),
                "initial": self.state_json(c.initial),
                "final": c.witness_final.map_or(Value::Null, |y| self.state_json(y)),
            }),
        };
        json!({
            "mode": self.mode.as_str(),
            "holds": self.verdict.holds,
            "counterexample": counterexample,
            "stats": {
                "space_size": self.space.size(),
                "states_checked": self.verdict.stats.states_checked,
                "pairs_checked": self.verdict.stats.pairs_checked,
                "wp_size": self.wp_size,
            },
        })
    }
}

/// Denotes `program`, extends `pre`/`post`, and decides the triple in `mode`.
pub fn verify(program: &Stmt, pre: &PredExpr, post: &PredExpr, mode: Mode, space: &StateSpace) -> Result<Report, Error> {
    verify_with(program, pre, post, mode, space, Exec::default())
}

pub fn verify_with(
    program: &Stmt,
    pre: &PredExpr,
    post: &PredExpr,
    mode: Mode,
    space: &StateSpace,
    exec: Exec,
) -> Result<Report, Error> {
    let s = denote_with(program, space, exec)?;
    let p = pred_to_set_with(pre, space, exec)?;
    let q = pred_to_set_with(post, space, exec)?;
    let verdict = check(mode, &p, &s, &q, exec)?;
    let wp_size = wp_with(&s, &q, exec)?.count();
    Ok(Report {
        mode,
        verdict,
        wp_size,
        space: space.clone(),
        program: pretty_print(program),
        pre: pre.to_string(),
        post: post.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(rows: Vec<Vec<usize>>) -> Relation {
        Relation::from_rows(rows.len(), rows).unwrap()
    }

    #[test]
    fn total_picks_smallest_initial() {
        let s = rel(vec![vec![1], vec![], vec![0, 2]]);
        let q = PredSet::from_mask(3, 0b010);
        let v = check_total(&PredSet::full(3), &s, &q).unwrap();
        assert!(!v.holds);
        let c = v.counterexample.unwrap();
        assert_eq!((c.kind, c.initial, c.witness_final), (CounterexampleKind::NoSuccessor, 1, None));
        assert_eq!(v.stats.states_checked, 2);
        assert_eq!(v.stats.pairs_checked, 1);

        let v = check_total(&PredSet::from_mask(3, 0b100), &s, &q).unwrap();
        let c = v.counterexample.unwrap();
        assert_eq!((c.kind, c.initial, c.witness_final), (CounterexampleKind::BadSuccessor, 2, Some(0)));
    }

    #[test]
    fn partial_ignores_missing_successors() {
        let s = rel(vec![vec![1], vec![], vec![0, 2]]);
        let q = PredSet::from_mask(3, 0b011);
        let v = check_partial(&PredSet::from_mask(3, 0b011), &s, &q).unwrap();
        assert!(v.holds && v.counterexample.is_none());
        let v = check_partial(&PredSet::full(3), &s, &q).unwrap();
        let c = v.counterexample.unwrap();
        assert_eq!((c.kind, c.initial, c.witness_final), (CounterexampleKind::PartialViolation, 2, Some(2)));
    }

    #[test]
    fn wp_examples() {
        let s = rel(vec![vec![1], vec![], vec![0, 2]]);
        assert_eq!(wp(&s, &PredSet::empty(3)).unwrap(), PredSet::empty(3));
        assert_eq!(wp(&s, &PredSet::full(3)).unwrap(), PredSet::from_mask(3, 0b101));
        let q = PredSet::from_mask(3, 0b110);
        assert_eq!(wp(&Relation::identity(3), &q).unwrap(), q);
    }

    #[test]
    fn size_mismatch() {
        let s = Relation::identity(3);
        assert!(matches!(
            check_total(&PredSet::full(2), &s, &PredSet::full(3)),
            Err(Error::SpaceMismatch { .. })
        ));
        assert!(wp(&s, &PredSet::full(4)).is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let rows: Vec<Vec<usize>> = (0..300).map(|x| if x % 7 == 0 { vec![] } else { vec![(x * 13) % 300] }).collect();
        let s = rel(rows);
        let p = PredSet::from_fn(300, |x| x > 20);
        let q = PredSet::from_fn(300, |x| x % 3 != 0);
        for mode in [Mode::Total, Mode::Partial] {
            let a = check(mode, &p, &s, &q, Exec::Sequential).unwrap();
            let b = check(mode, &p, &s, &q, Exec::Parallel).unwrap();
            assert_eq!(a.counterexample, b.counterexample);
        }
        assert_eq!(wp_with(&s, &q, Exec::Sequential).unwrap(), wp_with(&s, &q, Exec::Parallel).unwrap());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("partial".parse::<Mode>().unwrap(), Mode::Partial);
        assert!("both".parse::<Mode>().is_err());
    }
}
