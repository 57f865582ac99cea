//! Finite sets of opaque atoms and their pairwise / three-way statistics.
//!
//! Atoms are integers for the verification engine and byte strings for
//! phrase and k-gram sets; everything downstream only needs `Ord`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A finite set of distinct atoms with element-wise equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Hash)]
pub struct FiniteSet<T: Ord>(BTreeSet<T>);

impl<T: Ord> FiniteSet<T> {
    pub fn new() -> Self {
        FiniteSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, atom: &T) -> bool {
        self.0.contains(atom)
    }

    pub fn insert(&mut self, atom: T) -> bool {
        self.0.insert(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &FiniteSet<T>) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl<T: Ord + Clone> FiniteSet<T> {
    pub fn union(&self, other: &FiniteSet<T>) -> FiniteSet<T> {
        FiniteSet(self.0.union(&other.0).cloned().collect())
    }
}

impl<T: Ord> FromIterator<T> for FiniteSet<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        FiniteSet(iter.into_iter().collect())
    }
}

impl<T: Ord, const N: usize> From<[T; N]> for FiniteSet<T> {
    fn from(atoms: [T; N]) -> Self {
        atoms.into_iter().collect()
    }
}

impl<'a, T: Ord> IntoIterator for &'a FiniteSet<T> {
    type Item = &'a T;
    type IntoIter = std::collections::btree_set::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl<T: Ord + fmt::Display> fmt::Display for FiniteSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, atom) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{atom}")?;
        }
        write!(f, "}}")
    }
}

/// Decodes a subset of the non-negative integers: bit `i` set ⇔ `i` ∈ set.
pub fn set_from_bitmask(mask: u64) -> FiniteSet<i64> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(i64::from)
        .collect()
}

/// The four pairwise cardinalities of `(X, Y)`.
///
/// `min_diff`/`max_diff` are the ordered set-difference sizes, so the
/// documented identities (`m ≤ M`, `m + M = |X\Y| + |Y\X|`,
/// `|X∩Y| + |X\Y| = |X|`) hold by construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PairStats {
    /// |X ∩ Y|
    pub intersection: usize,
    /// |X \ Y|
    pub only_left: usize,
    /// |Y \ X|
    pub only_right: usize,
}

impl PairStats {
    /// Exact counts via a single merge walk over the two sorted sets.
    pub fn compute<T: Ord>(x: &FiniteSet<T>, y: &FiniteSet<T>) -> PairStats {
        let mut stats = PairStats {
            intersection: 0,
            only_left: 0,
            only_right: 0,
        };
        let mut xs = x.iter().peekable();
        let mut ys = y.iter().peekable();
        loop {
            match (xs.peek(), ys.peek()) {
                (Some(a), Some(b)) => match a.cmp(b) {
                    std::cmp::Ordering::Less => {
                        stats.only_left += 1;
                        xs.next();
                    }
                    std::cmp::Ordering::Greater => {
                        stats.only_right += 1;
                        ys.next();
                    }
                    std::cmp::Ordering::Equal => {
                        stats.intersection += 1;
                        xs.next();
                        ys.next();
                    }
                },
                (Some(_), None) => {
                    stats.only_left += 1;
                    xs.next();
                }
                (None, Some(_)) => {
                    stats.only_right += 1;
                    ys.next();
                }
                (None, None) => break stats,
            }
        }
    }

    /// m = min(|X\Y|, |Y\X|)
    pub fn min_diff(&self) -> usize {
        self.only_left.min(self.only_right)
    }

    /// M = max(|X\Y|, |Y\X|)
    pub fn max_diff(&self) -> usize {
        self.only_left.max(self.only_right)
    }

    /// |X Δ Y|
    pub fn sym_diff(&self) -> usize {
        self.only_left + self.only_right
    }

    /// |X ∪ Y|
    pub fn union(&self) -> usize {
        self.intersection + self.only_left + self.only_right
    }

    /// |X|
    pub fn left_len(&self) -> usize {
        self.intersection + self.only_left
    }

    /// |Y|
    pub fn right_len(&self) -> usize {
        self.intersection + self.only_right
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("universe does not contain every element of X ∪ Y ∪ Z")]
    UniverseTooSmall,
}

/// Cardinalities of the eight Venn regions of a triple `(X, Y, Z)`.
///
/// `counts[b]` is indexed by the membership bits `b = xyz` with `x` the high
/// bit, e.g. `counts[0b110]` counts elements in X and Y but not Z. Without an
/// explicit universe the complement region `counts[0b000]` is zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct TriplePartition {
    pub counts: [usize; 8],
}

impl TriplePartition {
    pub fn compute<T: Ord>(
        x: &FiniteSet<T>,
        y: &FiniteSet<T>,
        z: &FiniteSet<T>,
        universe: Option<&FiniteSet<T>>,
    ) -> Result<TriplePartition, SetError> {
        let mut counts = [0usize; 8];
        let mut seen = 0usize;
        let members = x.iter().chain(y.iter()).chain(z.iter());
        let union: BTreeSet<&T> = members.collect();
        for atom in &union {
            let bits = (usize::from(x.contains(atom)) << 2)
                | (usize::from(y.contains(atom)) << 1)
                | usize::from(z.contains(atom));
            counts[bits] += 1;
            seen += 1;
        }
        if let Some(u) = universe {
            for atom in &union {
                if !u.contains(atom) {
                    return Err(SetError::UniverseTooSmall);
                }
            }
            counts[0] = u.len() - seen;
        }
        Ok(TriplePartition { counts })
    }

    pub fn count(&self, in_x: bool, in_y: bool, in_z: bool) -> usize {
        self.counts[(usize::from(in_x) << 2) | (usize::from(in_y) << 1) | usize::from(in_z)]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Pairwise stats for (X, Y) derived from the region counts.
    pub fn pair_xy(&self) -> PairStats {
        PairStats {
            intersection: self.counts[0b110] + self.counts[0b111],
            only_left: self.counts[0b100] + self.counts[0b101],
            only_right: self.counts[0b010] + self.counts[0b011],
        }
    }

    /// Pairwise stats for (X, Z).
    pub fn pair_xz(&self) -> PairStats {
        PairStats {
            intersection: self.counts[0b101] + self.counts[0b111],
            only_left: self.counts[0b100] + self.counts[0b110],
            only_right: self.counts[0b001] + self.counts[0b011],
        }
    }

    /// Pairwise stats for (Y, Z).
    pub fn pair_yz(&self) -> PairStats {
        PairStats {
            intersection: self.counts[0b011] + self.counts[0b111],
            only_left: self.counts[0b010] + self.counts[0b110],
            only_right: self.counts[0b001] + self.counts[0b101],
        }
    }
}
