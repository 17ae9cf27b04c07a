//! Arithmetic and boolean expressions over program variables.

use std::fmt;

use crate::exec::Exec;
use crate::state_space::{State, StateSpace, VarUniverse};
use crate::Error;

use super::PredSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArithExpr {
    Const(i64),
    Var(String),
    Add(Box<ArithExpr>, Box<ArithExpr>),
    Sub(Box<ArithExpr>, Box<ArithExpr>),
    Mul(Box<ArithExpr>, Box<ArithExpr>),
    Neg(Box<ArithExpr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn apply(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// A predicate over program variables. `True` and `False` are τ and φ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PredExpr {
    True,
    False,
    Cmp(CmpOp, ArithExpr, ArithExpr),
    Not(Box<PredExpr>),
    And(Box<PredExpr>, Box<PredExpr>),
    Or(Box<PredExpr>, Box<PredExpr>),
    Implies(Box<PredExpr>, Box<PredExpr>),
    Iff(Box<PredExpr>, Box<PredExpr>),
    /// `a ∈ D_a`; true on every well-formed state.
    InDomain(String),
}

impl ArithExpr {
    pub fn var(name: impl Into<String>) -> Self {
        ArithExpr::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: ArithExpr) -> Self {
        ArithExpr::Add(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: ArithExpr) -> Self {
        ArithExpr::Sub(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: ArithExpr) -> Self {
        ArithExpr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn cmp(self, op: CmpOp, rhs: ArithExpr) -> PredExpr {
        PredExpr::Cmp(op, self, rhs)
    }

    /// Variables in first-occurrence order.
    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ArithExpr::Const(_) => {}
            ArithExpr::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v)
                }
            }
            ArithExpr::Add(a, b) | ArithExpr::Sub(a, b) | ArithExpr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            ArithExpr::Neg(a) => a.collect_vars(out),
        }
    }

    pub(crate) fn compile(&self, universe: &VarUniverse) -> Result<CArith, Error> {
        Ok(match self {
            ArithExpr::Const(c) => CArith::Const(*c),
            ArithExpr::Var(v) => CArith::Var(
                universe
                    .position(v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))?,
            ),
            ArithExpr::Add(a, b) => CArith::Add(Box::new(a.compile(universe)?), Box::new(b.compile(universe)?)),
            ArithExpr::Sub(a, b) => CArith::Sub(Box::new(a.compile(universe)?), Box::new(b.compile(universe)?)),
            ArithExpr::Mul(a, b) => CArith::Mul(Box::new(a.compile(universe)?), Box::new(b.compile(universe)?)),
            ArithExpr::Neg(a) => CArith::Neg(Box::new(a.compile(universe)?)),
        })
    }
}

impl PredExpr {
    #[allow(clippy::should_implement_trait)]
    pub fn not(p: PredExpr) -> Self {
        PredExpr::Not(Box::new(p))
    }

    pub fn and(self, rhs: PredExpr) -> Self {
        PredExpr::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: PredExpr) -> Self {
        PredExpr::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: PredExpr) -> Self {
        PredExpr::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: PredExpr) -> Self {
        PredExpr::Iff(Box::new(self), Box::new(rhs))
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            PredExpr::True | PredExpr::False => {}
            PredExpr::Cmp(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            PredExpr::Not(p) => p.collect_vars(out),
            PredExpr::And(a, b) | PredExpr::Or(a, b) | PredExpr::Implies(a, b) | PredExpr::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            PredExpr::InDomain(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v)
                }
            }
        }
    }

    pub(crate) fn compile(&self, universe: &VarUniverse) -> Result<CPred, Error> {
        let bin = |a: &PredExpr, b: &PredExpr| -> Result<(Box<CPred>, Box<CPred>), Error> {
            Ok((Box::new(a.compile(universe)?), Box::new(b.compile(universe)?)))
        };
        Ok(match self {
            PredExpr::True => CPred::True,
            PredExpr::False => CPred::False,
            PredExpr::Cmp(op, a, b) => CPred::Cmp(*op, a.compile(universe)?, b.compile(universe)?),
            PredExpr::Not(p) => CPred::Not(Box::new(p.compile(universe)?)),
            PredExpr::And(a, b) => {
                let (a, b) = bin(a, b)?;
                CPred::And(a, b)
            }
            PredExpr::Or(a, b) => {
                let (a, b) = bin(a, b)?;
                CPred::Or(a, b)
            }
            PredExpr::Implies(a, b) => {
                let (a, b) = bin(a, b)?;
                CPred::Implies(a, b)
            }
            PredExpr::Iff(a, b) => {
                let (a, b) = bin(a, b)?;
                CPred::Iff(a, b)
            }
            PredExpr::InDomain(v) => CPred::InDomain(
                universe
                    .position(v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))?,
            ),
        })
    }
}

/// Read access to variable values, by universe position.
pub(crate) trait Valuation {
    fn value(&self, var: usize) -> i64;
    fn in_domain(&self, var: usize) -> bool;
}

pub(crate) struct IndexedState<'a> {
    pub space: &'a StateSpace,
    pub index: usize,
}

impl Valuation for IndexedState<'_> {
    fn value(&self, var: usize) -> i64 {
        self.space.value(self.index, var)
    }

    fn in_domain(&self, _var: usize) -> bool {
        true
    }
}

struct LooseState<'a> {
    state: &'a State,
    universe: &'a VarUniverse,
}

impl Valuation for LooseState<'_> {
    fn value(&self, var: usize) -> i64 {
        self.state.get(var)
    }

    fn in_domain(&self, var: usize) -> bool {
        self.universe.domain(var).contains(self.state.get(var))
    }
}

/// Arithmetic with variables resolved to universe positions.
#[derive(Debug, Clone)]
pub(crate) enum CArith {
    Const(i64),
    Var(usize),
    Add(Box<CArith>, Box<CArith>),
    Sub(Box<CArith>, Box<CArith>),
    Mul(Box<CArith>, Box<CArith>),
    Neg(Box<CArith>),
}

impl CArith {
    /// `None` on 64-bit overflow.
    pub(crate) fn eval(&self, env: &impl Valuation) -> Option<i64> {
        match self {
            CArith::Const(c) => Some(*c),
            CArith::Var(v) => Some(env.value(*v)),
            CArith::Add(a, b) => a.eval(env)?.checked_add(b.eval(env)?),
            CArith::Sub(a, b) => a.eval(env)?.checked_sub(b.eval(env)?),
            CArith::Mul(a, b) => a.eval(env)?.checked_mul(b.eval(env)?),
            CArith::Neg(a) => a.eval(env)?.checked_neg(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum CPred {
    True,
    False,
    Cmp(CmpOp, CArith, CArith),
    Not(Box<CPred>),
    And(Box<CPred>, Box<CPred>),
    Or(Box<CPred>, Box<CPred>),
    Implies(Box<CPred>, Box<CPred>),
    Iff(Box<CPred>, Box<CPred>),
    InDomain(usize),
}

impl CPred {
    pub(crate) fn eval(&self, env: &impl Valuation) -> bool {
        match self {
            CPred::True => true,
            CPred::False => false,
            // Undefined operands make the comparison false.
            CPred::Cmp(op, a, b) => match (a.eval(env), b.eval(env)) {
                (Some(l), Some(r)) => op.apply(l, r),
                _ => false,
            },
            CPred::Not(p) => !p.eval(env),
            CPred::And(a, b) => a.eval(env) && b.eval(env),
            CPred::Or(a, b) => a.eval(env) || b.eval(env),
            CPred::Implies(a, b) => !a.eval(env) || b.eval(env),
            CPred::Iff(a, b) => a.eval(env) == b.eval(env),
            CPred::InDomain(v) => env.in_domain(*v),
        }
    }
}

fn check_shape(state: &State, universe: &VarUniverse) -> Result<(), Error> {
    if state.values().len() != universe.len() {
        return Err(Error::StateShape {
            expected: universe.len(),
            found: state.values().len(),
        });
    }
    Ok(())
}

/// Evaluates `e` in `state`; `Ok(None)` is the undefined result of an overflow.
pub fn eval_arith(e: &ArithExpr, state: &State, universe: &VarUniverse) -> Result<Option<i64>, Error> {
    let compiled = e.compile(universe)?;
    check_shape(state, universe)?;
    Ok(compiled.eval(&LooseState { state, universe }))
}

pub fn eval_pred(p: &PredExpr, state: &State, universe: &VarUniverse) -> Result<bool, Error> {
    let compiled = p.compile(universe)?;
    check_shape(state, universe)?;
    Ok(compiled.eval(&LooseState { state, universe }))
}

/// The extension of `p`: bit `k` is set iff `p` holds in state `k`.
pub fn pred_to_set(p: &PredExpr, space: &StateSpace) -> Result<PredSet, Error> {
    pred_to_set_with(p, space, Exec::default())
}

pub fn pred_to_set_with(p: &PredExpr, space: &StateSpace, exec: Exec) -> Result<PredSet, Error> {
    let compiled = p.compile(space.universe())?;
    Ok(compiled_to_set(&compiled, space, exec))
}

pub(crate) fn compiled_to_set(p: &CPred, space: &StateSpace, exec: Exec) -> PredSet {
    PredSet::from_fn_with(space.size(), exec, |index| p.eval(&IndexedState { space, index }))
}

// Precedence levels used by the printers; higher binds tighter.
const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_CMP: u8 = 5;
const PREC_ADD: u8 = 6;
const PREC_MUL: u8 = 7;
const PREC_UNARY: u8 = 8;

impl ArithExpr {
    fn prec(&self) -> u8 {
        match self {
            ArithExpr::Add(..) | ArithExpr::Sub(..) => PREC_ADD,
            ArithExpr::Mul(..) => PREC_MUL,
            ArithExpr::Neg(..) => PREC_UNARY,
            ArithExpr::Const(_) | ArithExpr::Var(_) => PREC_UNARY + 1,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            ArithExpr::Const(c) => write!(f, "{c}"),
            ArithExpr::Var(v) => f.write_str(v),
            ArithExpr::Add(a, b) | ArithExpr::Sub(a, b) | ArithExpr::Mul(a, b) => {
                let (op, p) = match self {
                    ArithExpr::Add(..) => ("+", PREC_ADD),
                    ArithExpr::Sub(..) => ("-", PREC_ADD),
                    _ => ("*", PREC_MUL),
                };
                a.fmt_at(f, p)?;
                write!(f, " {op} ")?;
                b.fmt_at(f, p + 1)
            }
            ArithExpr::Neg(a) => {
                f.write_str("-")?;
                match **a {
                    // `-x` is fine; `-5` would read back as a literal.
                    ArithExpr::Var(_) => a.fmt_at(f, PREC_UNARY),
                    _ => {
                        f.write_str("(")?;
                        a.fmt_at(f, 0)?;
                        f.write_str(")")
                    }
                }
            }
        }
    }
}

impl fmt::Display for ArithExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl PredExpr {
    fn prec(&self) -> u8 {
        match self {
            PredExpr::Iff(..) => PREC_IFF,
            PredExpr::Implies(..) => PREC_IMPLIES,
            PredExpr::Or(..) => PREC_OR,
            PredExpr::And(..) => PREC_AND,
            PredExpr::Cmp(..) => PREC_CMP,
            PredExpr::Not(..) => PREC_UNARY,
            PredExpr::True | PredExpr::False | PredExpr::InDomain(_) => PREC_UNARY + 1,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            PredExpr::True => f.write_str("true"),
            PredExpr::False => f.write_str("false"),
            PredExpr::InDomain(v) => write!(f, "in_domain({v})"),
            PredExpr::Cmp(op, a, b) => {
                a.fmt_at(f, PREC_ADD)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_at(f, PREC_ADD)
            }
            PredExpr::Not(p) => {
                f.write_str("!")?;
                p.fmt_at(f, PREC_UNARY)
            }
            PredExpr::And(a, b) => {
                a.fmt_at(f, PREC_AND)?;
                f.write_str(" && ")?;
                b.fmt_at(f, PREC_AND + 1)
            }
            PredExpr::Or(a, b) => {
                a.fmt_at(f, PREC_OR)?;
                f.write_str(" || ")?;
                b.fmt_at(f, PREC_OR + 1)
            }
            PredExpr::Implies(a, b) => {
                a.fmt_at(f, PREC_IMPLIES + 1)?;
                f.write_str(" -> ")?;
                b.fmt_at(f, PREC_IMPLIES)
            }
            PredExpr::Iff(a, b) => {
                a.fmt_at(f, PREC_IFF)?;
                f.write_str(" <-> ")?;
                b.fmt_at(f, PREC_IFF + 1)
            }
        }
    }
}

impl fmt::Display for PredExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}
