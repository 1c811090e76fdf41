//! Naive reference implementations shared by the property tests. Nothing
//! here reuses the library's closure, dual or projection code.

#![allow(dead_code)]

use std::collections::VecDeque;

use proptest::prelude::*;
use uma::{complement, Lit, LitSet, Pcr, Sigma, FALSE, TRUE};

/// `leq[a][b]` by Floyd-Warshall over the generators, their contrapositives,
/// loops and the pointed pairs `0a`, `a1`.
pub fn naive_leq(p: &Pcr) -> Vec<Vec<bool>> {
    let n = p.sigma().len();
    let mut m = vec![vec![false; n]; n];
    for a in 0..n {
        m[a][a] = true;
        m[FALSE][a] = true;
        m[a][TRUE] = true;
        for b in 0..n {
            if p.contains(a, b) {
                m[a][b] = true;
                m[complement(b)][complement(a)] = true;
            }
        }
    }
    for k in 0..n {
        for a in 0..n {
            if m[a][k] {
                for b in 0..n {
                    if m[k][b] {
                        m[a][b] = true;
                    }
                }
            }
        }
    }
    m
}

/// Complete selections with no `a ≤ b*` among their members.
pub fn naive_vertices(p: &Pcr) -> Vec<LitSet> {
    let s = p.sigma();
    let leq = naive_leq(p);
    (0..1u64 << s.n_pairs())
        .map(|m| s.selection_from_mask(m))
        .filter(|u| u.iter().all(|a| u.iter().all(|b| !leq[a][complement(b)])))
        .collect()
}

/// Vertices containing every literal of `t`.
pub fn naive_halfspace(vs: &[LitSet], t: &LitSet) -> Vec<usize> {
    (0..vs.len()).filter(|&i| t.is_subset(&vs[i])).collect()
}

/// Edges of the dual: pairs whose difference is inclusion-minimal among all
/// differences from the same vertex.
pub fn naive_adjacency(vs: &[LitSet]) -> Vec<Vec<usize>> {
    let diff = |i: usize, j: usize| vs[i].difference(&vs[j]);
    (0..vs.len())
        .map(|i| {
            (0..vs.len())
                .filter(|&j| {
                    if i == j {
                        return false;
                    }
                    let d = diff(i, j);
                    !(0..vs.len()).any(|k| k != i && k != j && {
                        let e = diff(i, k);
                        e.is_subset(&d) && e != d
                    })
                })
                .collect()
        })
        .collect()
}

pub fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[src] = 0;
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == usize::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// Unique nearest member of `onto`, or `None` on a tie.
pub fn naive_project(adj: &[Vec<usize>], u: usize, onto: &[usize]) -> Option<usize> {
    let d = bfs(adj, u);
    let best = onto.iter().map(|&k| d[k]).min()?;
    let mut arg = onto.iter().filter(|&&k| d[k] == best);
    let first = *arg.next()?;
    arg.next().is_none().then_some(first)
}

/// A PCR over `1..=max_pairs` queries from a random list of proper pairs.
pub fn arb_pcr(max_pairs: usize, max_rel: usize) -> impl Strategy<Value = Pcr> {
    (1..=max_pairs).prop_flat_map(move |n| {
        let lits = 2..2 * n + 2;
        prop::collection::vec((lits.clone(), lits), 0..=max_rel).prop_map(move |pairs| {
            let pairs = pairs.into_iter().filter(|&(a, b)| a / 2 != b / 2);
            Pcr::from_pairs(Sigma::new(n), pairs)
        })
    })
}

/// A PCR together with two literal masks drawn over its proper literals.
pub fn arb_pcr_with_sets(max_pairs: usize, max_rel: usize) -> impl Strategy<Value = (Pcr, Vec<bool>, Vec<bool>)> {
    arb_pcr(max_pairs, max_rel).prop_flat_map(|p| {
        let m = 2 * p.sigma().n_pairs();
        (Just(p), prop::collection::vec(prop::bool::weighted(0.3), m), prop::collection::vec(prop::bool::weighted(0.2), m))
    })
}

/// The literal set selected by a mask over proper literals.
pub fn set_of(s: &Sigma, mask: &[bool]) -> LitSet {
    s.set(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 2))
}

/// Drops literals from `x` until no `a ≤ b*` remains within it.
pub fn make_coherent(p: &Pcr, x: &LitSet) -> LitSet {
    let leq = naive_leq(p);
    let mut keep: Vec<Lit> = Vec::new();
    for a in x.iter() {
        let up: Vec<Lit> = keep.iter().copied().chain([a]).collect();
        if up.iter().all(|&u| up.iter().all(|&v| !leq[u][complement(v)])) {
            keep.push(a);
        }
    }
    p.sigma().set(keep)
}
