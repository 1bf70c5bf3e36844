//! Ground universes and bitmask sets.
//!
//! Every finite structure in this crate (choice functions, models, Euler
//! diagrams) lives over a [`Universe`]: an ordered list of named elements.
//! Subsets are [`ElemSet`] bitmasks over element indices, so set algebra is
//! branch-free and iteration order is always ascending by index.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Hard cap on universe size imposed by the 64-bit mask representation.
pub const MAX_UNIVERSE: usize = 64;

/// An ordered collection of distinct named elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Universe {
    /// Builds a universe from element names, preserving their order.
    ///
    /// Fails on duplicates, empty names, or more than [`MAX_UNIVERSE`] names.
    pub fn new<I, S>(names: I) -> Result<Universe, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut u = Universe { names: Vec::new(), index: BTreeMap::new() };
        for name in names {
            let name = name.into();
            if name.is_empty() {
                return Err("empty element name".to_string());
            }
            if u.index.contains_key(&name) {
                return Err(format!("duplicate element name '{name}'"));
            }
            if u.names.len() == MAX_UNIVERSE {
                return Err(format!("universe larger than {MAX_UNIVERSE} elements"));
            }
            u.index.insert(name.clone(), u.names.len());
            u.names.push(name);
        }
        Ok(u)
    }

    /// Universe with elements `a0, a1, ..` of the given size.
    pub fn anonymous(size: usize) -> Universe {
        Universe::new((0..size).map(|i| format!("a{i}"))).expect("generated names are distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The full set over this universe.
    pub fn full(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    /// Parses a list of element names into a set over this universe.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<ElemSet, String> {
        let mut s = ElemSet::EMPTY;
        for n in names {
            let n = n.as_ref();
            match self.lookup(n) {
                Some(i) => s.insert(i),
                None => return Err(format!("unknown element '{n}'")),
            }
        }
        Ok(s)
    }

    /// Renders a set as its sorted element names.
    pub fn render(&self, s: ElemSet) -> Vec<String> {
        s.iter().map(|i| self.names[i].clone()).collect()
    }
}

/// A subset of a [`Universe`], stored as a bitmask over element indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn singleton(i: usize) -> ElemSet {
        ElemSet(1u64 << i)
    }

    pub fn full(n: usize) -> ElemSet {
        if n == 0 {
            ElemSet(0)
        } else {
            ElemSet(u64::MAX >> (64 - n))
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn inter(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn diff(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn subset_of(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: ElemSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Least element index, if any.
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Ascending iterator over element indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, ascending by mask value (starts with the empty set).
    pub fn subsets(self) -> impl Iterator<Item = ElemSet> {
        let full = self.0;
        let mut next: Option<u64> = Some(0);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(ElemSet(cur))
        })
    }

    /// All nonempty subsets of `self`, ascending by mask value.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = ElemSet> {
        self.subsets().filter(|s| !s.is_empty())
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_rejects_duplicates() {
        assert!(Universe::new(["x", "y", "x"]).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = ElemSet(0b0110);
        let b = ElemSet(0b0011);
        assert_eq!(a.union(b), ElemSet(0b0111));
        assert_eq!(a.inter(b), ElemSet(0b0010));
        assert_eq!(a.diff(b), ElemSet(0b0100));
        assert!(ElemSet(0b0010).subset_of(a));
        assert!(!a.subset_of(b));
        assert_eq!(a.len(), 2);
        assert_eq!(a.min(), Some(1));
    }

    #[test]
    fn subsets_enumeration_is_ascending_and_complete() {
        let s = ElemSet(0b101);
        let subs: Vec<u64> = s.subsets().map(|x| x.0).collect();
        assert_eq!(subs, vec![0b000, 0b001, 0b100, 0b101]);
        assert_eq!(s.nonempty_subsets().count(), 3);
    }

    #[test]
    fn full_masks() {
        assert_eq!(ElemSet::full(0), ElemSet::EMPTY);
        assert_eq!(ElemSet::full(3), ElemSet(0b111));
        assert_eq!(ElemSet::full(64).len(), 64);
    }
}
