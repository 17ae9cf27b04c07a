use std::fmt;

use crate::predicates::PredSet;
use crate::Error;

/// A binary relation on the states `0..size`, stored as sorted successor rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Relation {
    /// Builds from per-state successor lists; rows are sorted and deduplicated.
    pub fn from_rows(size: usize, rows: Vec<Vec<usize>>) -> Result<Self, Error> {
        if rows.len() != size {
            return Err(Error::SpaceMismatch {
                left: size,
                right: rows.len(),
            });
        }
        let mut offsets = Vec::with_capacity(size + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut row in rows {
            row.sort_unstable();
            row.dedup();
            if let Some(&bad) = row.last().filter(|&&y| y >= size) {
                return Err(Error::IndexOutOfRange { index: bad, size });
            }
            targets.extend(row);
            offsets.push(targets.len());
        }
        Ok(Relation { size, offsets, targets })
    }

    /// Rows must already be sorted, duplicate-free and in range.
    pub(crate) fn from_sorted_rows(size: usize, rows: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(rows.len(), size);
        let mut offsets = Vec::with_capacity(size + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0] < w[1]));
            targets.extend(row);
            offsets.push(targets.len());
        }
        Relation { size, offsets, targets }
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, Error> {
        let mut rows = vec![Vec::new(); size];
        for (x, y) in pairs {
            if x >= size {
                return Err(Error::IndexOutOfRange { index: x, size });
            }
            rows[x].push(y);
        }
        Relation::from_rows(size, rows)
    }

    pub fn empty(size: usize) -> Self {
        Relation {
            size,
            offsets: vec![0; size + 1],
            targets: Vec::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        Relation {
            size,
            offsets: (0..=size).collect(),
            targets: (0..size).collect(),
        }
    }

    pub fn full(size: usize) -> Self {
        Relation::from_sorted_rows(size, vec![(0..size).collect(); size])
    }

    /// Number of states in the underlying space.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Successors of `x` in ascending order.
    pub fn successors(&self, x: usize) -> &[usize] {
        &self.targets[self.offsets[x]..self.offsets[x + 1]]
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.size && self.successors(x).binary_search(&y).is_ok()
    }

    pub fn has_successor(&self, x: usize) -> bool {
        self.offsets[x + 1] > self.offsets[x]
    }

    /// Pairs whose initial state is at most `x`.
    pub fn pairs_through(&self, x: usize) -> usize {
        self.offsets[x + 1]
    }

    pub fn pair_count(&self) -> usize {
        self.targets.len()
    }

    /// All pairs, ordered by initial then final index.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |x| self.successors(x).iter().map(move |&y| (x, y)))
    }

    /// States with at least one successor.
    pub fn domain(&self) -> PredSet {
        PredSet::from_fn(self.size, |x| self.has_successor(x))
    }

    /// States with at least one predecessor.
    pub fn range(&self) -> PredSet {
        PredSet::from_indices(self.size, self.targets.iter().copied())
    }

    /// Keeps only pairs whose initial state is in `keep`.
    pub fn restrict_domain(&self, keep: &PredSet) -> Relation {
        let rows = (0..self.size)
            .map(|x| if keep.contains(x) { self.successors(x).to_vec() } else { Vec::new() })
            .collect();
        Relation::from_sorted_rows(self.size, rows)
    }

    /// True when every state has at most one successor.
    pub fn is_functional(&self) -> bool {
        (0..self.size).all(|x| self.successors(x).len() <= 1)
    }

    /// One `(i,j)` line per pair, sorted.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (x, y) in self.pairs() {
            out.push_str(&format!("({x},{y})\n"));
        }
        out
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation[{}]", self.size)?;
        f.debug_set().entries(self.pairs()).finish()
    }
}
