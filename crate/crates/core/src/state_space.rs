//! Finite variable domains and the enumerated state space.
//!
//! States are numbered row-major in universe order: the last variable varies
//! fastest. The empty universe has exactly one (empty) state.

use std::fmt;
use std::sync::Arc;

use crate::Error;

/// Default cap on the number of enumerated states.
pub const DEFAULT_MAX_STATES: usize = 1 << 24;

/// Bounds of the `int` type when a variable does not declare its own.
pub const DEFAULT_INT_RANGE: (i64, i64) = (-128, 127);

/// A finite, strictly increasing set of integer values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    name: String,
    values: Vec<i64>,
    contiguous: bool,
}

impl Domain {
    pub fn new(name: impl Into<String>, values: Vec<i64>) -> Result<Self, Error> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::EmptyDomain { name });
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedDomain { name });
        }
        let contiguous = (values[values.len() - 1] as i128 - values[0] as i128) + 1 == values.len() as i128;
        Ok(Domain {
            name,
            values,
            contiguous,
        })
    }

    /// The inclusive range `lo..=hi`.
    pub fn range(name: impl Into<String>, lo: i64, hi: i64) -> Result<Self, Error> {
        let name = name.into();
        if lo > hi {
            return Err(Error::EmptyDomain { name });
        }
        let count = hi as i128 - lo as i128 + 1;
        if count > DEFAULT_MAX_STATES as i128 {
            return Err(Error::SpaceTooLarge {
                states: count as u128,
                limit: DEFAULT_MAX_STATES,
            });
        }
        Ok(Domain {
            name,
            values: (lo..=hi).collect(),
            contiguous: true,
        })
    }

    /// `int` with the default bounds.
    pub fn int() -> Self {
        Domain::range("int", DEFAULT_INT_RANGE.0, DEFAULT_INT_RANGE.1).expect("default int range")
    }

    /// `bool`, encoded as `{0, 1}`.
    pub fn boolean() -> Self {
        Domain::range("bool", 0, 1).expect("bool range")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Position of `value` in the domain, if present.
    pub fn position(&self, value: i64) -> Option<usize> {
        if self.contiguous {
            let offset = value.checked_sub(self.values[0])?;
            usize::try_from(offset).ok().filter(|&o| o < self.values.len())
        } else {
            self.values.binary_search(&value).ok()
        }
    }

    pub fn contains(&self, value: i64) -> bool {
        self.position(value).is_some()
    }
}

/// Program variables with their domains, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VarUniverse {
    vars: Vec<(String, Domain)>,
}

impl VarUniverse {
    pub fn new(vars: Vec<(String, Domain)>) -> Result<Self, Error> {
        for (i, (name, _)) in vars.iter().enumerate() {
            if vars[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        Ok(VarUniverse { vars })
    }

    pub fn empty() -> Self {
        VarUniverse::default()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    pub fn name(&self, var: usize) -> &str {
        &self.vars[var].0
    }

    pub fn domain(&self, var: usize) -> &Domain {
        &self.vars[var].1
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Domain)> {
        self.vars.iter().map(|(n, d)| (n.as_str(), d))
    }
}

/// One valuation of every variable, in universe order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    values: Vec<i64>,
}

impl State {
    pub fn new(values: Vec<i64>) -> Self {
        State { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, var: usize) -> i64 {
        self.values[var]
    }
}

/// The enumerated space of all states of a universe.
#[derive(Debug, Clone)]
pub struct StateSpace {
    universe: Arc<VarUniverse>,
    strides: Vec<usize>,
    size: usize,
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe
    }
}

impl Eq for StateSpace {}

impl StateSpace {
    pub fn new(universe: VarUniverse) -> Result<Self, Error> {
        Self::with_limit(universe, DEFAULT_MAX_STATES)
    }

    pub fn with_limit(universe: VarUniverse, limit: usize) -> Result<Self, Error> {
        let mut states: u128 = 1;
        for (name, domain) in universe.iter() {
            if domain.is_empty() {
                return Err(Error::EmptyDomain {
                    name: name.to_string(),
                });
            }
            states = states.saturating_mul(domain.len() as u128);
        }
        if states > limit as u128 {
            return Err(Error::SpaceTooLarge { states, limit });
        }
        let size = states as usize;
        let mut strides = vec![1usize; universe.len()];
        for var in (0..universe.len().saturating_sub(1)).rev() {
            strides[var] = strides[var + 1] * universe.domain(var + 1).len();
        }
        Ok(StateSpace {
            universe: Arc::new(universe),
            strides,
            size,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn universe(&self) -> &VarUniverse {
        &self.universe
    }

    /// Distance between consecutive values of `var` in index space.
    pub fn stride(&self, var: usize) -> usize {
        self.strides[var]
    }

    /// Position of `var`'s value within its domain in state `index`.
    pub fn digit(&self, index: usize, var: usize) -> usize {
        (index / self.strides[var]) % self.universe.domain(var).len()
    }

    /// Value of `var` in state `index`; `index` must be in range.
    pub fn value(&self, index: usize, var: usize) -> i64 {
        self.universe.domain(var).values()[self.digit(index, var)]
    }

    pub fn index_to_state(&self, index: usize) -> Result<State, Error> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.size,
            });
        }
        Ok(State::new(
            (0..self.universe.len()).map(|v| self.value(index, v)).collect(),
        ))
    }

    pub fn state_to_index(&self, state: &State) -> Result<usize, Error> {
        if state.values().len() != self.universe.len() {
            return Err(Error::StateShape {
                expected: self.universe.len(),
                found: state.values().len(),
            });
        }
        let mut index = 0;
        for (var, &value) in state.values().iter().enumerate() {
            let domain = self.universe.domain(var);
            let pos = domain.position(value).ok_or_else(|| Error::ValueNotInDomain {
                var: self.universe.name(var).to_string(),
                value,
            })?;
            index += pos * self.strides[var];
        }
        Ok(index)
    }

    /// `(name, value)` pairs of state `index`, in universe order.
    pub fn describe(&self, index: usize) -> Vec<(&str, i64)> {
        (0..self.universe.len())
            .map(|v| (self.universe.name(v), self.value(index, v)))
            .collect()
    }

    /// Human-readable `a=5, b=1` rendering of state `index`.
    pub fn display(&self, index: usize) -> DisplayState<'_> {
        DisplayState { space: self, index }
    }
}

pub struct DisplayState<'a> {
    space: &'a StateSpace,
    index: usize,
}

impl fmt::Display for DisplayState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, value)) in self.space.describe(self.index).into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}
