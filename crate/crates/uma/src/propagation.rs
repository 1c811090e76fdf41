//! The reasoning kernel: coherent projection and signal propagation by
//! depth-first search over the generating relation. Nothing here enumerates
//! the dual or builds the full closure.

use crate::error::{Error, Result};
use crate::pcr::Pcr;
use crate::pcs::{star, LitSet};

/// Counters reported by [`propagate_with_stats`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropagationStats {
    /// Generating pairs examined across all searches.
    pub edges_visited: usize,
}

/// Extends `visited` to its forward closure from `seeds`, using an explicit
/// stack. Each literal's successor row is scanned at most once per call.
fn dfs(p: &Pcr, seeds: &LitSet, visited: &mut LitSet, stats: &mut PropagationStats) {
    let mut stack: Vec<usize> = Vec::new();
    for a in seeds.iter() {
        if visited.insert(a) {
            stack.push(a);
        }
    }
    while let Some(a) = stack.pop() {
        for b in p.successors(a).iter() {
            stats.edges_visited += 1;
            if visited.insert(b) {
                stack.push(b);
            }
        }
    }
}

/// `↑T` by depth-first search.
pub fn forward_closure(p: &Pcr, t: &LitSet) -> LitSet {
    let mut v = p.sigma().empty_set();
    dfs(p, t, &mut v, &mut PropagationStats::default());
    v
}

/// `coh(T) = ↑T ∖ (↑T)*`.
pub fn coherent_projection(p: &Pcr, t: &LitSet) -> LitSet {
    let up = forward_closure(p, t);
    up.difference(&star(&up))
}

/// `propagate⟨T, S⟩`: the halfspace base of the nearest-point projection of
/// `⟨S⟩` onto `⟨coh(T)⟩`, equal to `↑(S ∪ T) ∖ (↑T)*` when `T` is coherent.
/// `S` must be coherent.
pub fn propagate(p: &Pcr, s: &LitSet, t: &LitSet) -> Result<LitSet> {
    propagate_with_stats(p, s, t).map(|(r, _)| r)
}

/// [`propagate`] plus edge counters; `edges_visited ≤ 2·|G|`.
pub fn propagate_with_stats(p: &Pcr, s: &LitSet, t: &LitSet) -> Result<(LitSet, PropagationStats)> {
    let n = p.sigma().len();
    if s.capacity() != n || t.capacity() != n {
        return Err(Error::SigmaMismatch { expected: n, found: s.capacity().min(t.capacity()) });
    }
    let mut stats = PropagationStats::default();
    let mut up_s = p.sigma().empty_set();
    dfs(p, s, &mut up_s, &mut stats);
    if !up_s.is_disjoint(&star(s)) {
        return Err(Error::Incoherent);
    }
    let mut up_t = p.sigma().empty_set();
    dfs(p, t, &mut up_t, &mut stats);
    // Project onto ⟨coh(T)⟩. For coherent T this is ↑(S ∪ T) ∖ (↑T)*; for
    // incoherent T the raw (↑T)* would also strip literals of ↑S that the
    // projection keeps.
    let coh_t = up_t.difference(&star(&up_t));
    let mut r = up_s.union(&coh_t);
    r.difference_with(&star(&coh_t));
    Ok((r, stats))
}

/// Belief state from a raw observation: `coh(observation)`.
pub fn belief_update(p: &Pcr, observation: &LitSet) -> LitSet {
    coherent_projection(p, observation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::{complement, Sigma, TRUE};

    #[test]
    fn orthogonal_selection() {
        let s = Sigma::new(3);
        let p = Pcr::new_orthogonal(s.clone());
        let t = s.set([s.pos(0), s.neg(2)]);
        assert_eq!(coherent_projection(&p, &t), t.union(&s.set([TRUE])));
    }

    #[test]
    fn forward_closure_applies() {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        let p = Pcr::from_pairs(s.clone(), [(a, b)]);
        assert_eq!(coherent_projection(&p, &s.set([a])), s.set([a, b, TRUE]));
    }

    #[test]
    fn conflicting_pair_annihilates() {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        let p = Pcr::from_pairs(s.clone(), [(a, complement(b))]);
        assert_eq!(coherent_projection(&p, &s.set([a, b])), s.set([TRUE]));
    }

    #[test]
    fn propagate_edge_cases() {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        let p = Pcr::from_pairs(s.clone(), [(a, b)]);
        let load = s.set([a]);
        assert_eq!(propagate(&p, &load, &s.empty_set()).unwrap(), p.up_closure(&load));
        let t = s.set([complement(b)]);
        assert_eq!(propagate(&p, &s.empty_set(), &t).unwrap(), coherent_projection(&p, &t));
        let bad = s.set([a, complement(b)]);
        assert_eq!(propagate(&p, &bad, &t), Err(Error::Incoherent));
    }
}
