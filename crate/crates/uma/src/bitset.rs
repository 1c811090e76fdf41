//! Fixed-width bit sets.
//!
//! Literal sets and vertex sets share this type. The complement-pair layout of
//! literals (pairs at indices `2k, 2k+1`) never straddles a word, so [`BitSet::swap_pairs`]
//! computes `S*` with two masks per word.

use std::fmt;

const WORD: usize = 64;
const EVEN: u64 = 0x5555_5555_5555_5555;

/// A fixed-capacity set of indices `0..len`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    /// The empty set over `0..len`.
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(WORD)], len }
    }

    /// The full set `0..len`.
    pub fn full(len: usize) -> Self {
        let mut s = BitSet { words: vec![!0; len.div_ceil(WORD)], len };
        s.trim();
        s
    }

    /// Builds a set from an iterator of indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, it: I) -> Self {
        let mut s = BitSet::new(len);
        for i in it {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Capacity of the set.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.len
    }

    /// Raw words, least significant bit first.
    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Inserts `i`; returns true if it was absent.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let w = &mut self.words[i / WORD];
        let m = 1u64 << (i % WORD);
        let fresh = *w & m == 0;
        *w |= m;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] &= !(1u64 << (i % WORD));
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.insert(i);
        } else {
            self.remove(i);
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, o: &BitSet) {
        debug_assert_eq!(self.len, o.len);
        self.words.iter_mut().zip(&o.words).for_each(|(a, b)| *a |= b);
    }

    pub fn intersect_with(&mut self, o: &BitSet) {
        debug_assert_eq!(self.len, o.len);
        self.words.iter_mut().zip(&o.words).for_each(|(a, b)| *a &= b);
    }

    pub fn difference_with(&mut self, o: &BitSet) {
        debug_assert_eq!(self.len, o.len);
        self.words.iter_mut().zip(&o.words).for_each(|(a, b)| *a &= !b);
    }

    pub fn union(&self, o: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(o);
        s
    }

    pub fn intersection(&self, o: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(o);
        s
    }

    pub fn difference(&self, o: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(o);
        s
    }

    /// `|self ∖ o|` without allocating.
    pub fn difference_count(&self, o: &BitSet) -> usize {
        self.words.iter().zip(&o.words).map(|(a, b)| (a & !b).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, o: &BitSet) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, o: &BitSet) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & b == 0)
    }

    /// Exchanges bits `2k` and `2k+1` for every `k`.
    pub fn swap_pairs(&self) -> BitSet {
        let mut s = BitSet {
            words: self.words.iter().map(|&w| ((w & EVEN) << 1) | ((w >> 1) & EVEN)).collect(),
            len: self.len,
        };
        s.trim();
        s
    }

    /// Iterates over members in increasing order.
    pub fn iter(&self) -> Ones<'_> {
        Ones { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the members of a [`BitSet`].
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Ones<'a>;
    fn into_iter(self) -> Ones<'a> {
        self.iter()
    }
}
