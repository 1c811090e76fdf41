//! Pointed complemented sets: literals, complementation and selections.
//!
//! Literal `0` is the constant-false query and literal `1` its complement, the
//! constant-true query. Proper query `k` occupies indices `2k+2` (positive) and
//! `2k+3` (negated), so `complement(x) = x ^ 1`.

use std::fmt;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A literal index.
pub type Lit = usize;

/// The constant-false literal.
pub const FALSE: Lit = 0;
/// The constant-true literal.
pub const TRUE: Lit = 1;

/// A set of literals. Selections, halfspace bases and belief states all use it.
pub type LitSet = BitSet;

/// Returns the complement `x*`.
#[inline]
pub fn complement(x: Lit) -> Lit {
    x ^ 1
}

/// Index of the complement pair containing `x` (pair 0 is `{0, 1}`).
#[inline]
pub fn pair_of(x: Lit) -> usize {
    x >> 1
}

/// Returns `S* = {x* : x ∈ S}`.
#[inline]
pub fn star(s: &LitSet) -> LitSet {
    s.swap_pairs()
}

/// The alphabet: `n_pairs` proper query pairs plus the reserved pair `{0, 1}`.
#[derive(Clone)]
pub struct Sigma {
    n_pairs: usize,
    names: Arc<Vec<String>>,
}

impl PartialEq for Sigma {
    fn eq(&self, o: &Self) -> bool {
        self.n_pairs == o.n_pairs
    }
}

impl Eq for Sigma {}

impl fmt::Debug for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sigma({} pairs)", self.n_pairs)
    }
}

impl Sigma {
    /// An alphabet whose proper queries are named `q0, q1, ...`.
    pub fn new(n_pairs: usize) -> Self {
        Self::with_names((0..n_pairs).map(|k| format!("q{k}")).collect())
    }

    /// An alphabet with one name per proper query.
    pub fn with_names(names: Vec<String>) -> Self {
        Sigma { n_pairs: names.len(), names: Arc::new(names) }
    }

    /// Number of proper complement pairs.
    #[inline]
    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    /// Number of literals, `2·n_pairs + 2`.
    #[inline]
    pub fn len(&self) -> usize {
        2 * self.n_pairs + 2
    }

    /// Always false: `0` and `1` are present.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Positive literal of proper query `k`.
    #[inline]
    pub fn pos(&self, k: usize) -> Lit {
        assert!(k < self.n_pairs, "query {k} out of range {}", self.n_pairs);
        2 * k + 2
    }

    /// Negated literal of proper query `k`.
    #[inline]
    pub fn neg(&self, k: usize) -> Lit {
        self.pos(k) + 1
    }

    /// True for every literal other than `0` and `1`.
    #[inline]
    pub fn is_proper(&self, x: Lit) -> bool {
        x >= 2 && x < self.len()
    }

    /// Iterates over all literals.
    pub fn lits(&self) -> std::ops::Range<Lit> {
        0..self.len()
    }

    /// Iterates over proper literals.
    pub fn proper_lits(&self) -> std::ops::Range<Lit> {
        2..self.len()
    }

    /// Query names, one per proper pair.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Display name of a literal; negations carry a trailing `*`.
    pub fn name(&self, x: Lit) -> String {
        match x {
            FALSE => "0".into(),
            TRUE => "1".into(),
            _ => {
                let base = &self.names[pair_of(x) - 1];
                if x & 1 == 0 {
                    base.clone()
                } else {
                    format!("{base}*")
                }
            }
        }
    }

    /// Looks up a literal by display name.
    pub fn lit_by_name(&self, name: &str) -> Option<Lit> {
        match name {
            "0" => Some(FALSE),
            "1" => Some(TRUE),
            _ => {
                let (base, neg) = match name.strip_suffix('*') {
                    Some(b) => (b, true),
                    None => (name, false),
                };
                let k = self.names.iter().position(|n| n == base)?;
                Some(if neg { self.neg(k) } else { self.pos(k) })
            }
        }
    }

    /// The empty literal set.
    pub fn empty_set(&self) -> LitSet {
        LitSet::new(self.len())
    }

    /// All literals.
    pub fn full_set(&self) -> LitSet {
        LitSet::full(self.len())
    }

    /// A literal set from indices.
    pub fn set<I: IntoIterator<Item = Lit>>(&self, it: I) -> LitSet {
        LitSet::from_indices(self.len(), it)
    }

    /// The complete selection choosing the positive literal of query `k` iff
    /// bit `k` of `mask` is set.
    pub fn selection_from_mask(&self, mask: u64) -> LitSet {
        let mut s = self.set([TRUE]);
        for k in 0..self.n_pairs {
            s.insert(if mask >> k & 1 == 1 { self.pos(k) } else { self.neg(k) });
        }
        s
    }

    /// Inverse of [`Sigma::selection_from_mask`] for complete selections.
    pub fn mask_of(&self, u: &LitSet) -> u64 {
        (0..self.n_pairs).filter(|&k| u.contains(self.pos(k))).fold(0, |m, k| m | 1 << k)
    }

    /// Renders a literal set as `{a, b*, ...}`.
    pub fn format_set(&self, s: &LitSet) -> String {
        let parts: Vec<String> = s.iter().map(|x| self.name(x)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    fn check(&self, s: &LitSet) -> Result<()> {
        if s.capacity() != self.len() {
            return Err(Error::SigmaMismatch { expected: self.len(), found: s.capacity() });
        }
        Ok(())
    }

    /// True iff `S ∩ S* = ∅`.
    pub fn is_star_selection(&self, s: &LitSet) -> bool {
        s.is_disjoint(&star(s))
    }

    /// True iff `S` holds exactly one literal of every pair and contains `1`.
    pub fn is_complete(&self, s: &LitSet) -> bool {
        s.contains(TRUE) && self.is_star_selection(s) && s.count() == self.n_pairs + 1
    }

    /// Returns `v ▽ S = (v ∖ S) ∪ S*`.
    pub fn flip(&self, v: &LitSet, s: &LitSet) -> Result<LitSet> {
        self.check(v)?;
        self.check(s)?;
        if !s.is_subset(v) {
            return Err(Error::InvalidFlip);
        }
        let mut r = v.difference(s);
        r.union_with(&star(s));
        Ok(r)
    }

    /// Raw Hamming distance `|u ∖ w|` between complete selections.
    pub fn hamming_distance(&self, u: &LitSet, w: &LitSet) -> Result<usize> {
        self.check(u)?;
        self.check(w)?;
        Ok(u.difference_count(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_fixed_point_free_involution() {
        assert_eq!(complement(FALSE), TRUE);
        assert_eq!(complement(2), 3);
        assert_eq!(complement(3), 2);
        for x in 0..40 {
            assert_ne!(complement(x), x);
            assert_eq!(complement(complement(x)), x);
        }
    }

    #[test]
    fn selections() {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        assert!(s.is_star_selection(&s.set([TRUE])));
        assert!(!s.is_star_selection(&s.set([a, complement(a)])));
        assert!(s.is_star_selection(&s.set([TRUE, a, complement(b)])));
        assert!(s.is_complete(&s.set([TRUE, a, b])));
        assert!(!s.is_complete(&s.set([TRUE, a])));
        assert!(!s.is_complete(&s.set([FALSE, a, b])));
    }

    #[test]
    fn flip_and_distance() {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        let v = s.set([TRUE, a, b]);
        assert_eq!(s.flip(&v, &s.empty_set()).unwrap(), v);
        let f = s.flip(&v, &s.set([a])).unwrap();
        assert_eq!(f, s.set([TRUE, complement(a), b]));
        assert_eq!(s.flip(&f, &s.set([complement(a)])).unwrap(), v);
        assert!(s.flip(&v, &s.set([complement(a)])).is_err());
        assert_eq!(s.hamming_distance(&v, &v).unwrap(), 0);
        assert_eq!(s.hamming_distance(&v, &f).unwrap(), 1);
        let g = s.set([TRUE, complement(a), complement(b)]);
        assert_eq!(s.hamming_distance(&v, &g).unwrap(), 2);
    }

    #[test]
    fn names_round_trip() {
        let s = Sigma::with_names(vec!["x".into(), "y".into()]);
        for x in s.lits() {
            assert_eq!(s.lit_by_name(&s.name(x)), Some(x));
        }
        assert_eq!(s.name(s.neg(1)), "y*");
    }

    #[test]
    fn masks_enumerate_complete_selections() {
        let s = Sigma::new(3);
        for m in 0..8 {
            let u = s.selection_from_mask(m);
            assert!(s.is_complete(&u));
            assert_eq!(s.mask_of(&u), m);
        }
    }
}
