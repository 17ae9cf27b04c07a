//! Shared builders and naive reference implementations for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use scalc_core::{Domain, PredSet, Relation, StateSpace, VarUniverse};

pub fn space(vars: &[(&str, Domain)]) -> StateSpace {
    StateSpace::new(VarUniverse::new(vars.iter().map(|(n, d)| (n.to_string(), d.clone())).collect()).unwrap()).unwrap()
}

pub fn range(lo: i64, hi: i64) -> Domain {
    Domain::range("int", lo, hi).unwrap()
}

pub fn values(vs: &[i64]) -> Domain {
    Domain::new("d", vs.to_vec()).unwrap()
}

pub fn factorial_space() -> StateSpace {
    space(&[("i", range(0, 7)), ("n", range(0, 7)), ("f", range(0, 31))])
}

pub type Pairs = BTreeSet<(usize, usize)>;

pub fn pairs(r: &Relation) -> Pairs {
    r.pairs().collect()
}

pub fn rel_from_bits(n: usize, bits: &[bool]) -> Relation {
    Relation::from_pairs(n, (0..n * n).filter(|&k| bits[k]).map(|k| (k / n, k % n))).unwrap()
}

pub fn set_from_bits(bits: &[bool]) -> PredSet {
    PredSet::from_fn(bits.len(), |i| bits[i])
}

/// A space size in `1..=max` together with `rels` relations and `preds` predicates on it.
pub fn instance(max: usize, rels: usize, preds: usize) -> impl Strategy<Value = (usize, Vec<Relation>, Vec<PredSet>)> {
    (1..=max).prop_flat_map(move |n| {
        (
            Just(n),
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n * n), rels),
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), preds),
        )
            .prop_map(|(n, rs, ps)| {
                (
                    n,
                    rs.iter().map(|b| rel_from_bits(n, b)).collect(),
                    ps.iter().map(|b| set_from_bits(b)).collect(),
                )
            })
    })
}

/// Straight from the formula `∀x[P(x) ⇒ (∃y S(x,y) ∧ ∀z(S(x,z) ⇒ Q(z)))]`.
pub fn naive_total(p: &PredSet, s: &Pairs, q: &PredSet) -> bool {
    let n = p.size();
    (0..n).all(|x| {
        !p.contains(x)
            || ((0..n).any(|y| s.contains(&(x, y))) && (0..n).all(|z| !s.contains(&(x, z)) || q.contains(z)))
    })
}

/// `∀x[(P(x) ∧ ∃y S(x,y)) ⇒ ∀z(S(x,z) ⇒ Q(z))]`.
pub fn naive_partial(p: &PredSet, s: &Pairs, q: &PredSet) -> bool {
    let n = p.size();
    (0..n).all(|x| {
        !(p.contains(x) && (0..n).any(|y| s.contains(&(x, y))))
            || (0..n).all(|z| !s.contains(&(x, z)) || q.contains(z))
    })
}

/// Relational composition by the defining formula.
pub fn naive_compose(a: &Pairs, b: &Pairs, n: usize) -> Pairs {
    let mut out = Pairs::new();
    for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                if a.contains(&(x, z)) && b.contains(&(z, y)) {
                    out.insert((x, y));
                }
            }
        }
    }
    out
}

/// Loop relation by breadth-first search from each state along guarded body steps.
pub fn naive_while(guard: &PredSet, body: &Pairs, n: usize) -> Pairs {
    let mut out = Pairs::new();
    for x in 0..n {
        if !guard.contains(x) {
            out.insert((x, x));
            continue;
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([x]);
        seen[x] = true;
        while let Some(c) = queue.pop_front() {
            if !guard.contains(c) {
                out.insert((x, c));
                continue;
            }
            for &(from, to) in body.iter() {
                if from == c && !seen[to] {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
    }
    out
}
