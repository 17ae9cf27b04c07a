//! Finite-model Hoare logic for a small imperative language.
//!
//! Programs denote explicit relations over a finite state space. Total and
//! partial correctness are decided by evaluating the correctness formulas
//!
//! ```text
//! TCF  ∀x[P(x) ⇒ (∃y S(x,y) ∧ ∀z(S(x,z) ⇒ Q(z)))]
//! PCF  ∀x[(P(x) ∧ ∃y S(x,y)) ⇒ ∀z(S(x,z) ⇒ Q(z))]
//! ```
//!
//! by enumeration. The weakest precondition is computed as a state set, and
//! the general laws of Hoare logic and of `wp` are re-checked as executable
//! finite-model properties in [`laws`].
//!
//! Heavy loops go through [`Exec`]: with the `parallel` feature (default)
//! they run on rayon, otherwise sequentially. Results are identical in both
//! modes.

pub mod exec;
pub mod export;
pub mod hoare;
pub mod laws;
pub mod predicates;
pub mod semantics;
pub mod state_space;
pub mod syntax;

mod error;

pub use error::Error;
pub use exec::Exec;
pub use hoare::{check_partial, check_total, verify, wp, Counterexample, CounterexampleKind, Mode, Report, Verdict};
pub use predicates::{ArithExpr, CmpOp, PredExpr, PredSet, SFormula};
pub use semantics::{denote, Relation};
pub use state_space::{Domain, State, StateSpace, VarUniverse};
pub use syntax::{parse_program, pretty_print, Stmt, StmtKind};
