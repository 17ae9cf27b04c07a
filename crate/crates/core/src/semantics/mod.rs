//! Relational semantics: each statement denotes an explicit relation over
//! the finite state space, built by structural recursion.
//!
//! Two conventions go beyond the bare set definitions:
//! - assignment and declaration leave every other variable unchanged;
//! - an assignment whose value overflows or leaves the variable's domain has
//!   no successor, which is how abortion shows up in total correctness.
//!
//! `while` includes the zero-iteration pair `(x, x)` when the guard is false
//! in `x`.

mod relation;

use std::sync::Arc;

use crate::error::same_size;
use crate::exec::{self, Exec};
use crate::predicates::{compiled_to_set, ArithExpr, IndexedState, PredSet};
use crate::state_space::StateSpace;
use crate::syntax::{Stmt, StmtKind};
use crate::Error;

pub use relation::Relation;

/// `{(x, x)}`.
pub fn denote_nop(space: &StateSpace) -> Relation {
    Relation::identity(space.size())
}

/// `var := expr`, with `expr` evaluated in the initial state.
pub fn denote_assign(var: &str, expr: &ArithExpr, space: &StateSpace) -> Result<Relation, Error> {
    denote_assign_with(var, expr, space, Exec::default())
}

pub fn denote_assign_with(var: &str, expr: &ArithExpr, space: &StateSpace, exec: Exec) -> Result<Relation, Error> {
    let universe = space.universe();
    let target = universe
        .position(var)
        .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
    let compiled = expr.compile(universe)?;
    let domain = universe.domain(target);
    let stride = space.stride(target);
    let rows = exec::map_range(exec, space.size(), |x| {
        let value = compiled.eval(&IndexedState { space, index: x });
        match value.and_then(|v| domain.position(v)) {
            Some(pos) => vec![x - space.digit(x, target) * stride + pos * stride],
            None => Vec::new(),
        }
    });
    Ok(Relation::from_sorted_rows(space.size(), rows))
}

/// Declaration: `var` is havocked over its whole domain.
pub fn denote_decl(var: &str, space: &StateSpace) -> Result<Relation, Error> {
    denote_decl_with(var, space, Exec::default())
}

pub fn denote_decl_with(var: &str, space: &StateSpace, exec: Exec) -> Result<Relation, Error> {
    let universe = space.universe();
    let target = universe
        .position(var)
        .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
    let len = universe.domain(target).len();
    let stride = space.stride(target);
    let rows = exec::map_range(exec, space.size(), |x| {
        let base = x - space.digit(x, target) * stride;
        (0..len).map(|k| base + k * stride).collect()
    });
    Ok(Relation::from_sorted_rows(space.size(), rows))
}

/// `(B(x) ∧ S₁(x,y)) ∨ (¬B(x) ∧ S₂(x,y))`.
pub fn denote_ite(guard: &PredSet, then: &Relation, els: &Relation) -> Result<Relation, Error> {
    denote_ite_with(guard, then, els, Exec::default())
}

pub fn denote_ite_with(guard: &PredSet, then: &Relation, els: &Relation, exec: Exec) -> Result<Relation, Error> {
    same_size(guard.size(), then.size())?;
    same_size(then.size(), els.size())?;
    let rows = exec::map_range(exec, then.size(), |x| {
        if guard.contains(x) {
            then.successors(x).to_vec()
        } else {
            els.successors(x).to_vec()
        }
    });
    Ok(Relation::from_sorted_rows(then.size(), rows))
}

/// `if (B) S` is `if (B) S else nop`.
pub fn denote_if(guard: &PredSet, then: &Relation) -> Result<Relation, Error> {
    denote_if_with(guard, then, Exec::default())
}

pub fn denote_if_with(guard: &PredSet, then: &Relation, exec: Exec) -> Result<Relation, Error> {
    denote_ite_with(guard, then, &Relation::identity(then.size()), exec)
}

/// Relational composition `∃z(S₁(x,z) ∧ S₂(z,y))`.
pub fn denote_seq(first: &Relation, second: &Relation) -> Result<Relation, Error> {
    denote_seq_with(first, second, Exec::default())
}

pub fn denote_seq_with(first: &Relation, second: &Relation, exec: Exec) -> Result<Relation, Error> {
    same_size(first.size(), second.size())?;
    let rows = exec::map_range(exec, first.size(), |x| match first.successors(x) {
        [] => Vec::new(),
        [z] => second.successors(*z).to_vec(),
        mids => {
            let mut row: Vec<usize> = mids.iter().flat_map(|&z| second.successors(z).iter().copied()).collect();
            row.sort_unstable();
            row.dedup();
            row
        }
    });
    Ok(Relation::from_sorted_rows(first.size(), rows))
}

/// `while (B) S`: `(x, y)` such that `y` is reachable from `x` by body steps
/// taken only from `B`-states, and `¬B(y)`.
///
/// Computed over the strongly connected components of the guarded body
/// graph, so each state's exit set is assembled once.
pub fn denote_while(guard: &PredSet, body: &Relation) -> Result<Relation, Error> {
    same_size(guard.size(), body.size())?;
    let n = body.size();
    let edges = |c: usize| -> &[usize] {
        if guard.contains(c) {
            body.successors(c)
        } else {
            &[]
        }
    };

    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut exits: Vec<Arc<Vec<usize>>> = Vec::new();
    let mut counter = 0usize;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut calls: Vec<(usize, usize)> = Vec::new();
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, 0));

        while let Some(&mut (v, ref mut next)) = calls.last_mut() {
            let out = edges(v);
            if *next < out.len() {
                let w = out[*next];
                *next += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] != index[v] {
                continue;
            }
            // `v` roots a component; every component it reaches is finished.
            let id = exits.len();
            let mut members = Vec::new();
            loop {
                let w = stack.pop().expect("tarjan stack");
                on_stack[w] = false;
                comp[w] = id;
                members.push(w);
                if w == v {
                    break;
                }
            }
            let mut own: Vec<usize> = Vec::new();
            let mut children: Vec<usize> = Vec::new();
            for &m in &members {
                if !guard.contains(m) {
                    own.push(m);
                } else {
                    for &w in body.successors(m) {
                        if comp[w] != id {
                            children.push(comp[w]);
                        }
                    }
                }
            }
            children.sort_unstable();
            children.dedup();
            let set = if own.is_empty() && children.len() == 1 {
                Arc::clone(&exits[children[0]])
            } else {
                let mut all = own;
                for &c in &children {
                    all.extend(exits[c].iter().copied());
                }
                all.sort_unstable();
                all.dedup();
                Arc::new(all)
            };
            exits.push(set);
        }
    }

    let rows = (0..n).map(|x| exits[comp[x]].as_ref().clone()).collect();
    Ok(Relation::from_sorted_rows(n, rows))
}

/// The relation denoted by `stmt` on `space`.
pub fn denote(stmt: &Stmt, space: &StateSpace) -> Result<Relation, Error> {
    denote_with(stmt, space, Exec::default())
}

pub fn denote_with(stmt: &Stmt, space: &StateSpace, exec: Exec) -> Result<Relation, Error> {
    let guard = |cond: &crate::predicates::PredExpr| -> Result<PredSet, Error> {
        Ok(compiled_to_set(&cond.compile(space.universe())?, space, exec))
    };
    match &stmt.kind {
        StmtKind::Nop => Ok(denote_nop(space)),
        StmtKind::Decl { var, .. } => denote_decl_with(var, space, exec),
        StmtKind::Assign { var, expr } => denote_assign_with(var, expr, space, exec),
        StmtKind::Seq(first, second) => {
            let first = denote_with(first, space, exec)?;
            let second = denote_with(second, space, exec)?;
            denote_seq_with(&first, &second, exec)
        }
        StmtKind::IfThenElse { cond, then, els } => {
            let b = guard(cond)?;
            let then = denote_with(then, space, exec)?;
            let els = denote_with(els, space, exec)?;
            denote_ite_with(&b, &then, &els, exec)
        }
        StmtKind::IfThen { cond, then } => {
            let b = guard(cond)?;
            let then = denote_with(then, space, exec)?;
            denote_if_with(&b, &then, exec)
        }
        StmtKind::While { cond, body } => {
            let b = guard(cond)?;
            let body = denote_with(body, space, exec)?;
            denote_while(&b, &body)
        }
    }
}
