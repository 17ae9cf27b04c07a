use thiserror::Error;

use crate::syntax::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain `{name}` is empty")]
    EmptyDomain { name: String },
    #[error("domain `{name}` values must be strictly increasing")]
    UnorderedDomain { name: String },
    #[error("variable `{0}` declared twice in the universe")]
    DuplicateVariable(String),
    #[error("state space has {states} states, limit is {limit}")]
    SpaceTooLarge { states: u128, limit: usize },
    #[error("state index {index} out of range for space of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("value {value} is not in the domain of `{var}`")]
    ValueNotInDomain { var: String, value: i64 },
    #[error("state has {found} values, universe has {expected} variables")]
    StateShape { expected: usize, found: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("symbol `{symbol}` used with arity {found}, bound with arity {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unbound state variable `{0}`")]
    UnboundStateVariable(String),
    #[error("{span}: syntax error: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: variable `{name}` used before declaration")]
    UndeclaredVariable { name: String, span: SourceSpan },
    #[error("operands live on different state spaces (sizes {left} and {right})")]
    SpaceMismatch { left: usize, right: usize },
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("law `{law}` has {count} bindings at size {size}, too many to enumerate")]
    TooManyBindings { law: String, size: usize, count: u128 },
    #[error("cannot export: {0}")]
    UnsupportedForExport(String),
}

pub(crate) fn same_size(left: usize, right: usize) -> Result<(), Error> {
    if left == right {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { left, right })
    }
}
