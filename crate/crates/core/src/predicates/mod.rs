//! Interpreted predicates (boolean expressions over program variables), their
//! extensional form as state sets, and quantified formulas over states.

mod expr;
mod predset;
pub mod sformula;

pub use expr::{eval_arith, eval_pred, pred_to_set, pred_to_set_with, ArithExpr, CmpOp, PredExpr};
pub(crate) use expr::{compiled_to_set, IndexedState};
pub use predset::PredSet;
pub use sformula::{eval_sformula, Binding, Env, SFormula};
