//! Brute-force reference implementations. Everything here enumerates, so it
//! is meant for small alphabets and for cross-checking the closed forms.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::geometry::{DualSpace, VertexSet};
use crate::pcr::{disjoint_pairs, Pcr};
use crate::pcs::{star, LitSet, Sigma, TRUE};
use crate::qual::{Rank, Ranking};
use crate::sim::Environment;

/// Outcome of one oracle comparison. A mismatch carries enough to reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub case: String,
    /// What the closed form produced (or a summary).
    pub formula: String,
    /// What brute force produced (or a summary).
    pub brute: String,
    pub matched: bool,
    pub counterexample: Option<String>,
    pub seed: Option<u64>,
    /// Number of elementary checks performed.
    pub checks: usize,
}

impl OracleReport {
    fn pass(case: impl Into<String>, checks: usize, seed: Option<u64>) -> OracleReport {
        OracleReport {
            case: case.into(),
            formula: "ok".into(),
            brute: "ok".into(),
            matched: true,
            counterexample: None,
            seed,
            checks,
        }
    }

    fn fail(case: impl Into<String>, formula: String, brute: String, cx: String, seed: Option<u64>) -> OracleReport {
        OracleReport { case: case.into(), formula, brute, matched: false, counterexample: Some(cx), seed, checks: 0 }
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.matched { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} checks)", self.case, self.checks)?;
        if let Some(s) = self.seed {
            write!(f, " seed={s}")?;
        }
        if let Some(cx) = &self.counterexample {
            write!(f, "\n  formula: {}\n  brute:   {}\n  input:   {cx}", self.formula, self.brute)?;
        }
        Ok(())
    }
}

/// Adjacency lists of the dual graph.
pub fn dual_adjacency(dual: &DualSpace) -> Vec<Vec<usize>> {
    (0..dual.len()).map(|i| dual.neighbors(i)).collect()
}

/// Hop distances from `src`; unreachable vertices get `usize::MAX`.
pub fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[src] = 0;
    let mut q = VecDeque::from([src]);
    while let Some(i) = q.pop_front() {
        for &j in &adj[i] {
            if d[j] == usize::MAX {
                d[j] = d[i] + 1;
                q.push_back(j);
            }
        }
    }
    d
}

/// All-pairs hop distances.
pub fn all_pairs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    (0..adj.len()).map(|i| bfs(adj, i)).collect()
}

fn unique_argmin(d: &[usize], k: &VertexSet) -> Result<usize> {
    let mut best = usize::MAX;
    let mut arg = Vec::new();
    for i in k.iter() {
        match d[i].cmp(&best) {
            std::cmp::Ordering::Less => {
                best = d[i];
                arg = vec![i];
            }
            std::cmp::Ordering::Equal => arg.push(i),
            std::cmp::Ordering::Greater => {}
        }
    }
    match arg.as_slice() {
        [] => Err(Error::EmptySet),
        [i] if best != usize::MAX => Ok(*i),
        _ => Err(Error::BrokenDual),
    }
}

/// The vertex of `k` at minimum hop distance from vertex `u`. Fails with
/// [`Error::BrokenDual`] when the minimiser is not unique.
pub fn bfs_project(dual: &DualSpace, u: usize, k: &VertexSet) -> Result<usize> {
    let d = dual.hop_distances(u);
    unique_argmin(&d, k)
}

/// Sampling parameters for [`check_median_axioms`].
#[derive(Clone, Copy, Debug)]
pub struct MedianCheck {
    /// Triples are checked exhaustively up to this many vertices.
    pub exhaustive_limit: usize,
    /// Sampled triples above the limit.
    pub samples: usize,
    /// Random convex sets used for the retraction checks.
    pub convex_sets: usize,
    pub seed: u64,
}

impl Default for MedianCheck {
    fn default() -> Self {
        MedianCheck { exhaustive_limit: 256, samples: 2000, convex_sets: 4, seed: 0 }
    }
}

struct Intervals {
    n: usize,
    words: usize,
    bits: Option<Vec<u64>>,
}

impl Intervals {
    fn new(d: &[Vec<usize>]) -> Intervals {
        let n = d.len();
        let words = n.div_ceil(64);
        if n > 512 {
            return Intervals { n, words, bits: None };
        }
        let mut bits = vec![0u64; n * n * words];
        for u in 0..n {
            for v in 0..n {
                let base = (u * n + v) * words;
                for x in 0..n {
                    if d[u][x].saturating_add(d[x][v]) == d[u][v] {
                        bits[base + x / 64] |= 1 << (x % 64);
                    }
                }
            }
        }
        Intervals { n, words, bits: Some(bits) }
    }

    /// Vertices on some geodesic of each of the three pairs.
    fn meet(&self, d: &[Vec<usize>], u: usize, v: usize, w: usize) -> Vec<usize> {
        match &self.bits {
            Some(b) => {
                let row = |a: usize, c: usize| &b[(a * self.n + c) * self.words..][..self.words];
                let (r1, r2, r3) = (row(u, v), row(v, w), row(u, w));
                let mut out = Vec::new();
                for k in 0..self.words {
                    let mut m = r1[k] & r2[k] & r3[k];
                    while m != 0 {
                        out.push(k * 64 + m.trailing_zeros() as usize);
                        m &= m - 1;
                    }
                }
                out
            }
            None => {
                let on = |a: usize, c: usize, x: usize| d[a][x].saturating_add(d[x][c]) == d[a][c];
                (0..self.n).filter(|&x| on(u, v, x) && on(v, w, x) && on(u, w, x)).collect()
            }
        }
    }
}

fn triples<R: Rng>(n: usize, cfg: &MedianCheck, rng: &mut R) -> Vec<(usize, usize, usize)> {
    if n <= cfg.exhaustive_limit {
        let mut t = Vec::new();
        for u in 0..n {
            for v in u..n {
                for w in v..n {
                    t.push((u, v, w));
                }
            }
        }
        t
    } else {
        (0..cfg.samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    }
}

/// Median-graph check on an arbitrary vertex list with adjacency: every
/// triple has exactly one vertex in the intersection of its intervals, and
/// it equals the coordinatewise majority.
pub fn check_median_graph(case: &str, vertices: &[LitSet], adj: &[Vec<usize>], cfg: &MedianCheck) -> OracleReport {
    let mut rng = crate::sim::run_rng(cfg.seed, 0);
    let d = all_pairs(adj);
    if let Some(u) = (0..d.len()).find(|&u| d[u].contains(&usize::MAX)) {
        return OracleReport::fail(case, "connected".into(), "disconnected".into(), format!("vertex {u}"), Some(cfg.seed));
    }
    let iv = Intervals::new(&d);
    let mut checks = 0;
    for (u, v, w) in triples(vertices.len(), cfg, &mut rng) {
        checks += 1;
        let meet = iv.meet(&d, u, v, w);
        let formula = crate::geometry::median(&vertices[u], &vertices[v], &vertices[w]);
        let ok = meet.len() == 1 && vertices[meet[0]] == formula;
        if !ok {
            let shown: Vec<String> = meet.iter().map(|&i| format!("{:?}", vertices[i].iter().collect::<Vec<_>>())).collect();
            return OracleReport::fail(
                case,
                format!("{:?}", formula.iter().collect::<Vec<_>>()),
                format!("[{}]", shown.join(", ")),
                format!(
                    "u={:?} v={:?} w={:?}",
                    vertices[u].iter().collect::<Vec<_>>(),
                    vertices[v].iter().collect::<Vec<_>>(),
                    vertices[w].iter().collect::<Vec<_>>()
                ),
                Some(cfg.seed),
            );
        }
    }
    OracleReport::pass(case, checks, Some(cfg.seed))
}

/// Median axioms on the dual, plus retraction properties of the nearest-point
/// map onto random convex hulls: it fixes the hull, does not increase hop
/// distance and preserves medians.
pub fn check_median_axioms(dual: &DualSpace, cfg: &MedianCheck) -> OracleReport {
    let case = format!("median axioms, {} pairs, {} vertices", dual.pcr().sigma().n_pairs(), dual.len());
    let adj = dual_adjacency(dual);
    let mut rep = check_median_graph(&case, dual.vertices(), &adj, cfg);
    if !rep.matched {
        return rep;
    }
    let n = dual.len();
    let d = all_pairs(&adj);
    let iv = Intervals::new(&d);
    let graph_median = |u: usize, v: usize, w: usize| iv.meet(&d, u, v, w)[0];
    let mut rng = crate::sim::run_rng(cfg.seed, 1);
    for _ in 0..cfg.convex_sets {
        let picks: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect();
        let gen = BitSet::from_indices(n, picks.iter().copied());
        let hull = dual.convex_hull(&gen).expect("nonempty");
        let mut proj = Vec::with_capacity(n);
        for x in 0..n {
            match unique_argmin(&d[x], &hull) {
                Ok(p) => proj.push(p),
                Err(_) => {
                    return OracleReport::fail(
                        &case,
                        "unique nearest point".into(),
                        "tie".into(),
                        format!("x={x} hull of {picks:?}"),
                        Some(cfg.seed),
                    )
                }
            }
        }
        for x in hull.iter() {
            rep.checks += 1;
            if proj[x] != x {
                return OracleReport::fail(&case, "p(k)=k".into(), format!("p({x})={}", proj[x]), format!("hull of {picks:?}"), Some(cfg.seed));
            }
        }
        for (x, y, z) in triples(n, &MedianCheck { exhaustive_limit: 0, ..*cfg }, &mut rng) {
            rep.checks += 2;
            if d[proj[x]][proj[y]] > d[x][y] {
                return OracleReport::fail(&case, "non-expanding".into(), format!("d(p{x},p{y}) > d({x},{y})"), format!("hull of {picks:?}"), Some(cfg.seed));
            }
            let lhs = proj[graph_median(x, y, z)];
            let rhs = graph_median(proj[x], proj[y], proj[z]);
            if lhs != rhs {
                return OracleReport::fail(&case, format!("p(m)={lhs}"), format!("m(p)={rhs}"), format!("x={x} y={y} z={z} hull of {picks:?}"), Some(cfg.seed));
            }
        }
    }
    rep
}

/// All complete selections coherent with `g`, found by scanning every mask.
pub fn brute_dual(g: &Pcr) -> Vec<LitSet> {
    let s = g.sigma();
    (0..1u64 << s.n_pairs()).map(|m| s.selection_from_mask(m)).filter(|u| g.is_coherent(u)).collect()
}

/// Checks that the global minima `F` of `κ` sit inside the minima `F̂` of the
/// completion of its 2-restriction, that `F̂` lies in the dual of the derived
/// PCR `G`, and that `F̂` is the halfspace of the minset inside that dual.
pub fn ranking_min_hull(kappa: &Ranking) -> OracleReport {
    let s = kappa.sigma();
    let case = format!("ranking minima hull, {} pairs", s.n_pairs());
    let w = kappa.two_restriction();
    let g = w.derived_pcr();
    let m = w.minset(Rank::ZERO);
    let completion = match w.completion() {
        Ok(c) => c,
        Err(e) => return OracleReport::fail(&case, "valid 2-ranking".into(), e.to_string(), format!("{:?}", kappa.values()), None),
    };
    let f: Vec<u64> = kappa.global_minima();
    let f_hat: Vec<u64> = completion.global_minima();
    let dual: Vec<u64> = brute_dual(&g).iter().map(|u| s.mask_of(u)).collect();
    let halfspace: Vec<u64> = brute_dual(&g).iter().filter(|u| m.is_subset(u)).map(|u| s.mask_of(u)).collect();
    let cx = || format!("kappa={:?}", kappa.values().iter().map(|r| r.to_string()).collect::<Vec<_>>());
    if !f.iter().all(|x| f_hat.contains(x)) {
        return OracleReport::fail(&case, format!("F={f:?}"), format!("F^={f_hat:?}"), cx(), None);
    }
    if !f_hat.iter().all(|x| dual.contains(x)) {
        return OracleReport::fail(&case, format!("F^={f_hat:?}"), format!("dual={dual:?}"), cx(), None);
    }
    if f_hat != halfspace {
        return OracleReport::fail(&case, format!("<M;G>={halfspace:?}"), format!("F^={f_hat:?}"), cx(), None);
    }
    OracleReport::pass(case, 3, None)
}

/// Stationary distribution of the lazy walk by power iteration.
pub fn stationary_distribution(env: &Environment) -> Result<Vec<f64>> {
    use crate::sim::Move;
    let n = env.n_positions();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..1_000_000 {
        let mut next = vec![0.0; n];
        for (p, &mass) in pi.iter().enumerate() {
            for m in [Move::Left, Move::Right, Move::Stay] {
                next[env.step(p, m)] += mass / 3.0;
            }
        }
        let residual: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if residual < 1e-12 {
            return Ok(pi);
        }
    }
    Err(Error::BadParameter("power iteration did not converge".into()))
}

/// A random relation on `n_pairs` proper pairs, each ordered pair with
/// distinct complement pairs present with probability `density`; degenerate
/// draws are rejected.
pub fn random_pcr<R: Rng>(n_pairs: usize, density: f64, rng: &mut R) -> Pcr {
    let s = Sigma::new(n_pairs);
    loop {
        let mut pairs = Vec::new();
        for a in s.proper_lits() {
            for b in s.proper_lits() {
                if disjoint_pairs(a, b) && rng.gen_bool(density) {
                    pairs.push((a, b));
                }
            }
        }
        let p = Pcr::from_pairs(s.clone(), pairs);
        if !p.is_degenerate() {
            return p;
        }
    }
}

/// A random complete coherent selection, built pair by pair in random order.
pub fn random_vertex<R: Rng>(p: &Pcr, rng: &mut R) -> LitSet {
    let s = p.sigma();
    let closure = p.closure();
    let mut order: Vec<usize> = (0..s.n_pairs()).collect();
    order.shuffle(rng);
    // Depth-first search in random order; backtracks out of dead ends.
    let mut stack = vec![(0usize, s.set([TRUE]))];
    while let Some((depth, sel)) = stack.pop() {
        if depth == order.len() {
            return sel;
        }
        let k = order[depth];
        let mut lits = [s.neg(k), s.pos(k)];
        if rng.gen_bool(0.5) {
            lits.swap(0, 1);
        }
        // Push the preferred literal last so it is explored first.
        for &x in lits.iter().rev() {
            let mut next = sel.clone();
            next.insert(x);
            if closure.up(x).is_disjoint(&star(&next)) {
                stack.push((depth + 1, next));
            }
        }
    }
    unreachable!("a non-degenerate relation has at least one vertex")
}

/// A random coherent subset of a random vertex.
pub fn random_coherent<R: Rng>(p: &Pcr, keep: f64, rng: &mut R) -> LitSet {
    let v = random_vertex(p, rng);
    p.sigma().set(v.iter().filter(|_| rng.gen_bool(keep)))
}

/// A random ranking with values in `0..=max_rank`, each mask infinite with
/// probability `p_inf`; at least one value is finite.
pub fn random_ranking<R: Rng>(n_pairs: usize, max_rank: u32, p_inf: f64, rng: &mut R) -> Ranking {
    let s = Sigma::new(n_pairs);
    loop {
        let v: Vec<Rank> = (0..1usize << n_pairs)
            .map(|_| if rng.gen_bool(p_inf) { Rank::INF } else { Rank::fin(rng.gen_range(0..=max_rank)) })
            .collect();
        if let Ok(r) = Ranking::new(s.clone(), v) {
            return r;
        }
    }
}
