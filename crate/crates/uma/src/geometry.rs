//! The dual model space of a non-degenerate PCR.
//!
//! Vertices are the complete coherent selections. Enumeration is exponential
//! and meant for verification; the set-theoretic operations here
//! ([`project_point`], [`project_convex`], [`divergence`]) never enumerate.

use std::collections::{HashMap, VecDeque};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::pcr::{Pcr, PocQuotient};
use crate::pcs::{complement, star, Lit, LitSet, TRUE};

/// Default cap on the number of proper pairs for dual enumeration.
pub const DEFAULT_CAP: usize = 14;

/// A set of vertex indices of a [`DualSpace`].
pub type VertexSet = BitSet;

/// The enumerated dual of a frozen non-degenerate PCR.
#[derive(Clone, Debug)]
pub struct DualSpace {
    pcr: Pcr,
    quotient: PocQuotient,
    coords: Vec<Lit>,
    vertices: Vec<LitSet>,
    index: HashMap<LitSet, usize>,
}

/// Enumerates all complete coherent selections by depth-first assignment over
/// complement pairs, pruning incoherent prefixes.
pub fn enumerate_dual(pcr: &Pcr, cap: usize) -> Result<DualSpace> {
    let sigma = pcr.sigma();
    if sigma.n_pairs() > cap {
        return Err(Error::CapExceeded { n_pairs: sigma.n_pairs(), cap });
    }
    let quotient = pcr.canonical_quotient()?;
    let closure = pcr.closure();
    let mut vertices = Vec::new();
    // Explicit stack of (next pair, partial selection).
    let mut stack = vec![(0usize, sigma.set([TRUE]))];
    while let Some((k, sel)) = stack.pop() {
        if k == sigma.n_pairs() {
            vertices.push(sel);
            continue;
        }
        for x in [sigma.neg(k), sigma.pos(k)] {
            let mut next = sel.clone();
            next.insert(x);
            // Adding x keeps coherence iff ↑x misses (S ∪ {x})*.
            if closure.up(x).is_disjoint(&star(&next)) {
                stack.push((k + 1, next));
            }
        }
    }
    vertices.sort();
    let index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let coords = quotient.coordinates();
    Ok(DualSpace { pcr: pcr.clone(), quotient, coords, vertices, index })
}

impl DualSpace {
    pub fn pcr(&self) -> &Pcr {
        &self.pcr
    }

    pub fn quotient(&self) -> &PocQuotient {
        &self.quotient
    }

    pub fn vertices(&self) -> &[LitSet] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &LitSet {
        &self.vertices[i]
    }

    /// Index of a vertex, if the selection is one.
    pub fn index_of(&self, u: &LitSet) -> Option<usize> {
        self.index.get(u).copied()
    }

    /// An empty vertex subset.
    pub fn empty_vertex_set(&self) -> VertexSet {
        BitSet::new(self.len())
    }

    /// All vertices.
    pub fn all_vertices(&self) -> VertexSet {
        BitSet::full(self.len())
    }

    /// Quotient Hamming distance: the number of equivalence-class coordinates
    /// on which `u` and `w` differ.
    pub fn distance(&self, u: &LitSet, w: &LitSet) -> usize {
        self.coords.iter().filter(|&&c| u.contains(c) != w.contains(c)).count()
    }

    /// Raw literal Hamming distance `|u ∖ w|`.
    pub fn raw_distance(&self, u: &LitSet, w: &LitSet) -> usize {
        u.difference_count(w)
    }

    /// Neighbours of vertex `i`: flip one whole equivalence class.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let u = &self.vertices[i];
        let mut out = Vec::new();
        for &c in &self.coords {
            let x = if u.contains(c) { c } else { complement(c) };
            let cls = &self.quotient.classes[self.quotient.projection[x]];
            let mut w = u.difference(cls);
            w.union_with(&star(cls));
            if let Some(j) = self.index_of(&w) {
                out.push(j);
            }
        }
        out
    }

    /// Undirected edge list `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for i in 0..self.len() {
            for j in self.neighbors(i) {
                if i < j {
                    e.push((i, j));
                }
            }
        }
        e
    }

    /// Hop distances from vertex `src` by breadth-first search.
    pub fn hop_distances(&self, src: usize) -> Vec<usize> {
        let mut d = vec![usize::MAX; self.len()];
        d[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(i) = q.pop_front() {
            for j in self.neighbors(i) {
                if d[j] == usize::MAX {
                    d[j] = d[i] + 1;
                    q.push_back(j);
                }
            }
        }
        d
    }

    /// `⟨S⟩ = {u : S ⊆ u}`.
    pub fn halfspace(&self, s: &LitSet) -> VertexSet {
        BitSet::from_indices(
            self.len(),
            self.vertices.iter().enumerate().filter(|(_, u)| s.is_subset(u)).map(|(i, _)| i),
        )
    }

    /// `I(u, v) = {w : u ∩ v ⊆ w}`.
    pub fn interval(&self, u: &LitSet, v: &LitSet) -> VertexSet {
        self.halfspace(&u.intersection(v))
    }

    /// `K♯ = {a : K ⊆ ⟨a⟩}`, the intersection of the members of `K`.
    pub fn sharp(&self, k: &VertexSet) -> Result<LitSet> {
        let mut it = k.iter();
        let first = it.next().ok_or(Error::EmptySet)?;
        let mut r = self.vertices[first].clone();
        for i in it {
            r.intersect_with(&self.vertices[i]);
        }
        Ok(r)
    }

    /// `hull(K) = ⟨K♯⟩`.
    pub fn convex_hull(&self, k: &VertexSet) -> Result<VertexSet> {
        Ok(self.halfspace(&self.sharp(k)?))
    }

    /// `{a : K ⊆ ⟨a⟩, L ⊆ ⟨a*⟩}`.
    pub fn separator(&self, k: &VertexSet, l: &VertexSet) -> Result<LitSet> {
        Ok(self.sharp(k)?.intersection(&star(&self.sharp(l)?)))
    }

    /// A shortest path from `u` into `⟨T⟩`, flipping at each step the class of
    /// a minimal `c ∈ u` with `c ≤ b*` for some `b ∈ T ∖ u`.
    pub fn geodesic_to(&self, u: &LitSet, t: &LitSet) -> Result<Vec<LitSet>> {
        if !self.pcr.is_coherent(t) {
            return Err(Error::Incoherent);
        }
        let q = &self.quotient;
        let qc = q.quotient_pcr.closure();
        let mut path = vec![u.clone()];
        let mut cur = u.clone();
        while let Some(b) = t.difference(&cur).first() {
            let bs = q.projection[complement(b)];
            // Candidates: non-top classes of cur below b* in the quotient order.
            let cands: Vec<Lit> = cur
                .iter()
                .map(|x| q.projection[x])
                .filter(|&c| c != TRUE && qc.leq(c, bs))
                .collect();
            let c = cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&d| d == c || !qc.leq(d, c)))
                .ok_or(Error::BrokenDual)?;
            let cls = &q.classes[c];
            let mut next = cur.difference(cls);
            next.union_with(&star(cls));
            if self.index_of(&next).is_none() {
                return Err(Error::BrokenDual);
            }
            path.push(next.clone());
            cur = next;
        }
        Ok(path)
    }
}

fn check_coherent(p: &Pcr, t: &LitSet) -> Result<()> {
    if t.capacity() != p.sigma().len() {
        return Err(Error::SigmaMismatch { expected: p.sigma().len(), found: t.capacity() });
    }
    if !p.is_coherent(t) {
        return Err(Error::Incoherent);
    }
    Ok(())
}

/// Nearest vertex of `⟨T⟩` to `u`: `(u ∖ ↓T*) ∪ ↑T`.
pub fn project_point(p: &Pcr, u: &LitSet, t: &LitSet) -> Result<LitSet> {
    check_coherent(p, t)?;
    let up_t = p.up_closure(t);
    let mut r = u.difference(&star(&up_t));
    r.union_with(&up_t);
    Ok(r)
}

/// Halfspace base of the projection of `⟨S⟩` onto `⟨coh(T)⟩`:
/// `(↑S ∪ coh(T)) ∖ coh(T)*`, which is `↑(S ∪ T) ∖ (↑T)*` for coherent `T`.
pub fn project_convex(p: &Pcr, s: &LitSet, t: &LitSet) -> Result<LitSet> {
    check_coherent(p, s)?;
    let up_t = p.up_closure(t);
    let coh_t = up_t.difference(&star(&up_t));
    let mut r = p.up_closure(s).union(&coh_t);
    r.difference_with(&star(&coh_t));
    Ok(r)
}

/// `d(S; T) = |T ∖ S|` for `S, T ∈ C(G)`.
pub fn divergence(p: &Pcr, s: &LitSet, t: &LitSet) -> Result<usize> {
    for x in [s, t] {
        check_coherent(p, x)?;
        if !p.is_forward_closed(x) {
            return Err(Error::NotForwardClosed);
        }
    }
    Ok(t.difference_count(s))
}

/// Coordinatewise majority `(u∩v) ∪ (u∩w) ∪ (v∩w)`.
pub fn median(u: &LitSet, v: &LitSet, w: &LitSet) -> LitSet {
    let mut r = u.intersection(v);
    r.union_with(&u.intersection(w));
    r.union_with(&v.intersection(w));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::Sigma;

    fn bead(l: usize) -> Pcr {
        let s = Sigma::new(l);
        let pairs: Vec<_> = (0..l - 1).map(|k| (s.pos(k), s.pos(k + 1))).collect();
        Pcr::from_pairs(s, pairs)
    }

    fn starfish(l: usize) -> Pcr {
        let s = Sigma::new(l);
        let mut pairs = Vec::new();
        for i in 0..l {
            for j in i + 1..l {
                pairs.push((s.pos(i), s.neg(j)));
            }
        }
        Pcr::from_pairs(s, pairs)
    }

    #[test]
    fn orthogonal_cube() {
        let p = Pcr::new_orthogonal(Sigma::new(3));
        let d = enumerate_dual(&p, DEFAULT_CAP).unwrap();
        assert_eq!(d.len(), 8);
        assert_eq!(d.edges().len(), 12);
    }

    #[test]
    fn bead_is_path() {
        let d = enumerate_dual(&bead(3), DEFAULT_CAP).unwrap();
        assert_eq!(d.len(), 4);
        let deg: Vec<usize> = (0..4).map(|i| d.neighbors(i).len()).collect();
        assert_eq!(deg.iter().filter(|&&x| x == 1).count(), 2);
        assert_eq!(d.edges().len(), 3);
    }

    #[test]
    fn starfish_is_star() {
        let d = enumerate_dual(&starfish(3), DEFAULT_CAP).unwrap();
        assert_eq!(d.len(), 4);
        let mut deg: Vec<usize> = (0..4).map(|i| d.neighbors(i).len()).collect();
        deg.sort();
        assert_eq!(deg, vec![1, 1, 1, 3]);
    }

    #[test]
    fn cap_and_degeneracy_rejected() {
        let p = Pcr::new_orthogonal(Sigma::new(15));
        assert!(matches!(enumerate_dual(&p, DEFAULT_CAP), Err(Error::CapExceeded { .. })));
        let g1 = Pcr::from_pairs(Sigma::new(1), [(0, 1), (1, 0)]);
        assert_eq!(enumerate_dual(&g1, DEFAULT_CAP).unwrap_err(), Error::Degenerate);
    }

    #[test]
    fn halfspaces_and_sharp() {
        let s = Sigma::new(2);
        let p = Pcr::new_orthogonal(s.clone());
        let d = enumerate_dual(&p, DEFAULT_CAP).unwrap();
        assert_eq!(d.halfspace(&s.empty_set()).count(), 4);
        let a = s.pos(0);
        assert!(d.halfspace(&s.set([a, complement(a)])).is_empty());
        let ha = d.halfspace(&s.set([a]));
        let hb = d.halfspace(&s.set([complement(a)]));
        assert!(ha.is_disjoint(&hb) && ha.union(&hb) == d.all_vertices());
        assert_eq!(d.sharp(&d.all_vertices()).unwrap(), s.set([TRUE]));
        assert_eq!(d.sharp(&d.empty_vertex_set()), Err(Error::EmptySet));
        let single = BitSet::from_indices(d.len(), [2]);
        assert_eq!(d.sharp(&single).unwrap(), *d.vertex(2));
        let sep = d.separator(&ha, &hb).unwrap();
        assert_eq!(sep, s.set([a]));
        assert!(d.separator(&ha, &ha).unwrap().is_empty());
    }

    #[test]
    fn median_on_square() {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        let u = s.set([TRUE, a, b]);
        let v = s.set([TRUE, complement(a), b]);
        let w = s.set([TRUE, a, complement(b)]);
        assert_eq!(median(&u, &v, &w), u);
        assert_eq!(median(&u, &u, &v), u);
    }

    #[test]
    fn intervals_and_hulls_on_path() {
        let p = bead(3);
        let d = enumerate_dual(&p, DEFAULT_CAP).unwrap();
        // Endpoints of the path are the two degree-one vertices.
        let ends: Vec<usize> = (0..4).filter(|&i| d.neighbors(i).len() == 1).collect();
        let (u, v) = (d.vertex(ends[0]), d.vertex(ends[1]));
        assert_eq!(d.interval(u, v).count(), 4);
        assert_eq!(d.interval(u, u).count(), 1);
        let k = BitSet::from_indices(4, ends.clone());
        assert_eq!(d.convex_hull(&k).unwrap().count(), 4);
    }

    #[test]
    fn projections_on_cube() {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        let p = Pcr::new_orthogonal(s.clone());
        let u = s.set([TRUE, complement(a), b]);
        assert_eq!(project_point(&p, &u, &s.set([a])).unwrap(), s.set([TRUE, a, b]));
        assert_eq!(project_point(&p, &u, &s.set([b])).unwrap(), u);
        let d = enumerate_dual(&p, DEFAULT_CAP).unwrap();
        let path = d.geodesic_to(&u, &s.set([a])).unwrap();
        assert_eq!(path.len(), 2);
        assert_eq!(d.geodesic_to(&u, &s.set([b])).unwrap(), vec![u.clone()]);
        let sa = p.up_closure(&s.set([a]));
        assert_eq!(project_convex(&p, &sa, &s.empty_set()).unwrap(), sa);
        assert_eq!(project_convex(&p, &sa, &sa).unwrap(), sa);
        assert_eq!(divergence(&p, &sa, &sa).unwrap(), 0);
        assert_eq!(divergence(&p, &s.set([a]), &sa), Err(Error::NotForwardClosed));
    }
}
