//! First-order formulas over state variables, with unary predicate symbols
//! and binary relation symbols, evaluated by enumeration on a finite space.

use std::collections::BTreeMap;
use std::fmt;

use crate::semantics::Relation;
use crate::Error;

use super::PredSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SFormula {
    Pred(String, String),
    Rel(String, String, String),
    Not(Box<SFormula>),
    And(Box<SFormula>, Box<SFormula>),
    Or(Box<SFormula>, Box<SFormula>),
    Implies(Box<SFormula>, Box<SFormula>),
    Iff(Box<SFormula>, Box<SFormula>),
    Forall(String, Box<SFormula>),
    Exists(String, Box<SFormula>),
}

/// Interpretation of one symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Pred(PredSet),
    Rel(Relation),
}

impl Binding {
    pub fn arity(&self) -> usize {
        match self {
            Binding::Pred(_) => 1,
            Binding::Rel(_) => 2,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Binding::Pred(p) => p.size(),
            Binding::Rel(r) => r.size(),
        }
    }
}

pub type Env = BTreeMap<String, Binding>;

impl SFormula {
    pub fn pred(symbol: &str, var: &str) -> Self {
        SFormula::Pred(symbol.into(), var.into())
    }

    pub fn rel(symbol: &str, from: &str, to: &str) -> Self {
        SFormula::Rel(symbol.into(), from.into(), to.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: SFormula) -> Self {
        SFormula::Not(Box::new(f))
    }

    pub fn and(self, rhs: SFormula) -> Self {
        SFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: SFormula) -> Self {
        SFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: SFormula) -> Self {
        SFormula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: SFormula) -> Self {
        SFormula::Iff(Box::new(self), Box::new(rhs))
    }

    pub fn forall(var: &str, body: SFormula) -> Self {
        SFormula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: &str, body: SFormula) -> Self {
        SFormula::Exists(var.into(), Box::new(body))
    }

    /// Free state variables, sorted.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            SFormula::Pred(_, x) => note(x, bound),
            SFormula::Rel(_, x, y) => {
                note(x, bound);
                note(y, bound);
            }
            SFormula::Not(f) => f.collect_free(bound, out),
            SFormula::And(a, b) | SFormula::Or(a, b) | SFormula::Implies(a, b) | SFormula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            SFormula::Forall(v, f) | SFormula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Universal closure over the free variables, outermost first in sorted order.
    pub fn closure(self) -> SFormula {
        let free = self.free_vars();
        free.iter().rev().fold(self, |body, v| SFormula::forall(v, body))
    }

    fn compile<'e>(&self, env: &'e Env, size: usize, scope: &mut Vec<String>) -> Result<Node<'e>, Error> {
        let slot = |v: &String, scope: &Vec<String>| -> Result<usize, Error> {
            scope
                .iter()
                .rposition(|s| s == v)
                .ok_or_else(|| Error::UnboundStateVariable(v.clone()))
        };
        let lookup = |sym: &String, arity: usize| -> Result<&'e Binding, Error> {
            let b = env.get(sym).ok_or_else(|| Error::UnboundSymbol(sym.clone()))?;
            if b.arity() != arity {
                return Err(Error::ArityMismatch {
                    symbol: sym.clone(),
                    expected: b.arity(),
                    found: arity,
                });
            }
            if b.size() != size {
                return Err(Error::SpaceMismatch {
                    left: size,
                    right: b.size(),
                });
            }
            Ok(b)
        };
        let bin = |a: &SFormula, b: &SFormula, scope: &mut Vec<String>| -> Result<(Box<Node<'e>>, Box<Node<'e>>), Error> {
            Ok((Box::new(a.compile(env, size, scope)?), Box::new(b.compile(env, size, scope)?)))
        };
        Ok(match self {
            SFormula::Pred(sym, x) => match lookup(sym, 1)? {
                Binding::Pred(p) => Node::Pred(p, slot(x, scope)?),
                Binding::Rel(_) => unreachable!("arity checked"),
            },
            SFormula::Rel(sym, x, y) => match lookup(sym, 2)? {
                Binding::Rel(r) => Node::Rel(r, slot(x, scope)?, slot(y, scope)?),
                Binding::Pred(_) => unreachable!("arity checked"),
            },
            SFormula::Not(f) => Node::Not(Box::new(f.compile(env, size, scope)?)),
            SFormula::And(a, b) => {
                let (a, b) = bin(a, b, scope)?;
                Node::And(a, b)
            }
            SFormula::Or(a, b) => {
                let (a, b) = bin(a, b, scope)?;
                Node::Or(a, b)
            }
            SFormula::Implies(a, b) => {
                let (a, b) = bin(a, b, scope)?;
                Node::Implies(a, b)
            }
            SFormula::Iff(a, b) => {
                let (a, b) = bin(a, b, scope)?;
                Node::Iff(a, b)
            }
            SFormula::Forall(v, f) | SFormula::Exists(v, f) => {
                scope.push(v.clone());
                let body = f.compile(env, size, scope);
                scope.pop();
                let body = Box::new(body?);
                if matches!(self, SFormula::Forall(..)) {
                    Node::Forall(body)
                } else {
                    Node::Exists(body)
                }
            }
        })
    }
}

/// Formula with symbols resolved and variables replaced by stack slots.
enum Node<'e> {
    Pred(&'e PredSet, usize),
    Rel(&'e Relation, usize, usize),
    Not(Box<Node<'e>>),
    And(Box<Node<'e>>, Box<Node<'e>>),
    Or(Box<Node<'e>>, Box<Node<'e>>),
    Implies(Box<Node<'e>>, Box<Node<'e>>),
    Iff(Box<Node<'e>>, Box<Node<'e>>),
    Forall(Box<Node<'e>>),
    Exists(Box<Node<'e>>),
}

impl Node<'_> {
    fn eval(&self, size: usize, stack: &mut Vec<usize>) -> bool {
        match self {
            Node::Pred(p, x) => p.contains(stack[*x]),
            Node::Rel(r, x, y) => r.contains(stack[*x], stack[*y]),
            Node::Not(f) => !f.eval(size, stack),
            Node::And(a, b) => a.eval(size, stack) && b.eval(size, stack),
            Node::Or(a, b) => a.eval(size, stack) || b.eval(size, stack),
            Node::Implies(a, b) => !a.eval(size, stack) || b.eval(size, stack),
            Node::Iff(a, b) => a.eval(size, stack) == b.eval(size, stack),
            Node::Forall(f) => (0..size).all(|s| {
                stack.push(s);
                let v = f.eval(size, stack);
                stack.pop();
                v
            }),
            Node::Exists(f) => (0..size).any(|s| {
                stack.push(s);
                let v = f.eval(size, stack);
                stack.pop();
                v
            }),
        }
    }
}

/// Truth value of the closed formula `f` on a space of `size` states.
pub fn eval_sformula(f: &SFormula, env: &Env, size: usize) -> Result<bool, Error> {
    let node = f.compile(env, size, &mut Vec::new())?;
    Ok(node.eval(size, &mut Vec::new()))
}

impl fmt::Display for SFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SFormula::Pred(p, x) => write!(f, "{p}({x})"),
            SFormula::Rel(r, x, y) => write!(f, "{r}({x},{y})"),
            SFormula::Not(g) => write!(f, "¬{g}"),
            SFormula::And(a, b) => write!(f, "({a} ∧ {b})"),
            SFormula::Or(a, b) => write!(f, "({a} ∨ {b})"),
            SFormula::Implies(a, b) => write!(f, "({a} ⇒ {b})"),
            SFormula::Iff(a, b) => write!(f, "({a} ⇔ {b})"),
            SFormula::Forall(v, g) => write!(f, "∀{v}{g}"),
            SFormula::Exists(v, g) => write!(f, "∃{v}{g}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(items: Vec<(&str, Binding)>) -> Env {
        items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn tautology_and_reflexive_successor() {
        let p = PredSet::from_mask(3, 0b101);
        let f = SFormula::forall("x", SFormula::pred("P", "x").implies(SFormula::pred("P", "x")));
        assert!(eval_sformula(&f, &env(vec![("P", Binding::Pred(p))]), 3).unwrap());

        let g = SFormula::forall("x", SFormula::exists("y", SFormula::rel("S", "x", "y")));
        let e = env(vec![("S", Binding::Rel(Relation::identity(4)))]);
        assert!(eval_sformula(&g, &e, 4).unwrap());
        let e = env(vec![("S", Binding::Rel(Relation::empty(4)))]);
        assert!(!eval_sformula(&g, &e, 4).unwrap());
    }

    #[test]
    fn errors() {
        let e = env(vec![("S", Binding::Rel(Relation::identity(2)))]);
        assert_eq!(
            eval_sformula(&SFormula::pred("P", "x"), &e, 2),
            Err(Error::UnboundSymbol("P".into()))
        );
        assert!(matches!(
            eval_sformula(&SFormula::forall("x", SFormula::pred("S", "x")), &e, 2),
            Err(Error::ArityMismatch { expected: 2, found: 1, .. })
        ));
        assert_eq!(
            eval_sformula(&SFormula::forall("x", SFormula::rel("S", "x", "y")), &e, 2),
            Err(Error::UnboundStateVariable("y".into()))
        );
        assert!(matches!(
            eval_sformula(&SFormula::forall("x", SFormula::rel("S", "x", "x")), &e, 3),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn shadowing_binds_innermost() {
        // ∀x ∃x P(x): inner x shadows, so this is ∃x P(x).
        let f = SFormula::forall("x", SFormula::exists("x", SFormula::pred("P", "x")));
        let e = env(vec![("P", Binding::Pred(PredSet::from_mask(3, 0b010)))]);
        assert!(eval_sformula(&f, &e, 3).unwrap());
    }

    #[test]
    fn free_vars_and_closure() {
        let f = SFormula::rel("S", "y", "x").and(SFormula::forall("z", SFormula::pred("P", "z")));
        assert_eq!(f.free_vars(), vec!["x".to_string(), "y".to_string()]);
        assert!(f.closure().free_vars().is_empty());
    }
}
