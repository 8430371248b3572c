//! Subsets of a carrier, as fixed-length bitsets.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extension {
    words: Vec<u64>,
    len: usize,
}

impl Extension {
    pub fn empty(len: usize) -> Self {
        Extension {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut e = Extension::empty(len);
        for i in 0..len {
            e.insert(i);
        }
        e
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut e = Extension::empty(len);
        for i in indices {
            e.insert(i);
        }
        e
    }

    /// Size of the ambient carrier.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} outside a carrier of size {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Extension) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &Extension, f: impl Fn(u64, u64) -> u64) -> Extension {
        debug_assert_eq!(self.len, other.len);
        Extension {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
            len: self.len,
        }
    }

    pub fn intersect(&self, other: &Extension) -> Extension {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Extension) -> Extension {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn minus(&self, other: &Extension) -> Extension {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Extension {
        Extension::full(self.len).minus(self)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Re-indexes onto a sub-carrier whose point `k` is old point `keep[k]`.
    pub fn restrict(&self, keep: &[usize]) -> Extension {
        Extension::from_indices(
            keep.len(),
            keep.iter()
                .enumerate()
                .filter(|(_, &old)| self.contains(old))
                .map(|(k, _)| k),
        )
    }
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
