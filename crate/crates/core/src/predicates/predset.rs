use std::fmt;
use std::ops::{BitAnd, BitOr, Not};

use crate::exec::{self, Exec};

/// Extensional predicate: a bitset over the state indices of one space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PredSet {
    size: usize,
    words: Vec<u64>,
}

impl PredSet {
    pub fn empty(size: usize) -> Self {
        PredSet {
            size,
            words: vec![0; size.div_ceil(64)],
        }
    }

    pub fn full(size: usize) -> Self {
        let mut set = PredSet {
            size,
            words: vec![u64::MAX; size.div_ceil(64)],
        };
        set.clear_tail();
        set
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut set = PredSet::empty(size);
        for i in 0..size {
            if f(i) {
                set.insert(i);
            }
        }
        set
    }

    pub fn from_indices(size: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = PredSet::empty(size);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Low `size` bits of `mask`; only for spaces of at most 64 states.
    pub fn from_mask(size: usize, mask: u64) -> Self {
        assert!(size <= 64, "from_mask needs size <= 64");
        let mut set = PredSet {
            size,
            words: if size == 0 { vec![] } else { vec![mask] },
        };
        set.clear_tail();
        set
    }

    /// Like [`PredSet::from_fn`], with word-sized chunks scheduled by `exec`.
    pub(crate) fn from_fn_with(size: usize, exec: Exec, f: impl Fn(usize) -> bool + Sync + Send) -> Self {
        let words = exec::map_range(exec, size.div_ceil(64), |w| {
            let start = w * 64;
            let mut word = 0u64;
            for i in start..size.min(start + 64) {
                if f(i) {
                    word |= 1 << (i - start);
                }
            }
            word
        });
        PredSet::from_words(size, words)
    }

    pub(crate) fn from_words(size: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), size.div_ceil(64));
        let mut set = PredSet { size, words };
        set.clear_tail();
        set
    }

    fn clear_tail(&mut self) {
        let rem = self.size % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of states in the underlying space.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of states in the set.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.size
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.size && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.size, "state index {i} out of range {}", self.size);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.size {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn complement(&self) -> PredSet {
        let mut set = PredSet {
            size: self.size,
            words: self.words.iter().map(|w| !w).collect(),
        };
        set.clear_tail();
        set
    }

    fn zip(&self, other: &PredSet, f: impl Fn(u64, u64) -> u64) -> PredSet {
        assert_eq!(self.size, other.size, "predicate sets over different spaces");
        let mut set = PredSet {
            size: self.size,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        };
        set.clear_tail();
        set
    }

    pub fn union(&self, other: &PredSet) -> PredSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PredSet) -> PredSet {
        self.zip(other, |a, b| a & b)
    }

    /// Pointwise implication `¬self ∨ other`.
    pub fn implies(&self, other: &PredSet) -> PredSet {
        self.zip(other, |a, b| !a | b)
    }

    /// Pointwise equivalence.
    pub fn iff(&self, other: &PredSet) -> PredSet {
        self.zip(other, |a, b| !(a ^ b))
    }

    /// `∀x(self(x) ⇒ other(x))`.
    pub fn is_subset(&self, other: &PredSet) -> bool {
        assert_eq!(self.size, other.size, "predicate sets over different spaces");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &PredSet) -> bool {
        assert_eq!(self.size, other.size, "predicate sets over different spaces");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + tz)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for PredSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PredSet[{}]", self.size)?;
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitAnd for &PredSet {
    type Output = PredSet;
    fn bitand(self, rhs: &PredSet) -> PredSet {
        self.intersection(rhs)
    }
}

impl BitOr for &PredSet {
    type Output = PredSet;
    fn bitor(self, rhs: &PredSet) -> PredSet {
        self.union(rhs)
    }
}

impl Not for &PredSet {
    type Output = PredSet;
    fn not(self) -> PredSet {
        self.complement()
    }
}
