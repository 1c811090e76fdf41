//! Pointed complemented relations.
//!
//! A [`Pcr`] stores its generating relation as a bit matrix closed under the
//! contrapositive rule `ab ∈ G ⇔ b*a* ∈ G` and always containing every `0a`.
//! The reflexive-transitive closure is computed lazily (Warshall on bit rows)
//! and cached until the next insertion.

use std::sync::OnceLock;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::pcs::{complement, pair_of, star, Lit, LitSet, Sigma, FALSE, TRUE};

/// The cached order `≤_G`.
#[derive(Clone, Debug)]
pub struct Closure {
    /// `up[a] = ↑{a}`.
    up: Vec<LitSet>,
}

impl Closure {
    fn compute(adj: &[LitSet]) -> Closure {
        let n = adj.len();
        let mut up: Vec<LitSet> = adj.to_vec();
        for (a, row) in up.iter_mut().enumerate() {
            row.insert(a);
        }
        for k in 0..n {
            let rk = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&rk);
                }
            }
        }
        Closure { up }
    }

    /// `↑{a}`.
    #[inline]
    pub fn up(&self, a: Lit) -> &LitSet {
        &self.up[a]
    }

    /// `↓{a}`, via `b ≤ a ⇔ a* ≤ b*`.
    #[inline]
    pub fn down(&self, a: Lit) -> LitSet {
        star(&self.up[complement(a)])
    }

    #[inline]
    pub fn leq(&self, a: Lit, b: Lit) -> bool {
        self.up[a].contains(b)
    }
}

/// A pointed complemented relation over a [`Sigma`].
#[derive(Clone, Debug)]
pub struct Pcr {
    sigma: Sigma,
    adj: Vec<LitSet>,
    closure: OnceLock<Closure>,
}

impl PartialEq for Pcr {
    fn eq(&self, o: &Self) -> bool {
        self.sigma == o.sigma && self.adj == o.adj
    }
}

impl Pcr {
    /// The smallest PCR: exactly the pairs `0a` and `a1`.
    pub fn new_orthogonal(sigma: Sigma) -> Pcr {
        let n = sigma.len();
        let mut adj = vec![BitSet::new(n); n];
        adj[FALSE] = BitSet::full(n);
        for row in adj.iter_mut() {
            row.insert(TRUE);
        }
        Pcr { sigma, adj, closure: OnceLock::new() }
    }

    /// The orthogonal PCR extended by `pairs` and their contrapositives.
    pub fn from_pairs<I: IntoIterator<Item = (Lit, Lit)>>(sigma: Sigma, pairs: I) -> Pcr {
        let mut p = Pcr::new_orthogonal(sigma);
        for (a, b) in pairs {
            p.insert(a, b);
        }
        p
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    /// Adds `ab` and `b*a*`; invalidates the closure cache.
    pub fn insert(&mut self, a: Lit, b: Lit) {
        let fresh = self.adj[a].insert(b) | self.adj[complement(b)].insert(complement(a));
        if fresh {
            self.closure = OnceLock::new();
        }
    }

    /// True iff `ab` is a generating relation.
    #[inline]
    pub fn contains(&self, a: Lit, b: Lit) -> bool {
        self.adj[a].contains(b)
    }

    /// Direct successors of `a` in the generating relation.
    #[inline]
    pub fn successors(&self, a: Lit) -> &LitSet {
        &self.adj[a]
    }

    /// `|G|`, the number of generating pairs.
    pub fn relation_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum()
    }

    /// Generating pairs other than the mandatory `0a`, `a1` and loops.
    pub fn informative_pairs(&self) -> Vec<(Lit, Lit)> {
        let mut v = Vec::new();
        for a in self.sigma.lits() {
            if a == FALSE {
                continue;
            }
            for b in self.adj[a].iter() {
                if b != TRUE && b != a {
                    v.push((a, b));
                }
            }
        }
        v
    }

    /// The cached reflexive-transitive closure.
    pub fn closure(&self) -> &Closure {
        self.closure.get_or_init(|| Closure::compute(&self.adj))
    }

    /// `a ≤_G b`.
    pub fn leq(&self, a: Lit, b: Lit) -> bool {
        self.closure().leq(a, b)
    }

    /// `↑S`.
    pub fn up_closure(&self, s: &LitSet) -> LitSet {
        let c = self.closure();
        let mut r = self.sigma.empty_set();
        for a in s.iter() {
            r.union_with(c.up(a));
        }
        r
    }

    /// `↓S = (↑S*)*`.
    pub fn down_closure(&self, s: &LitSet) -> LitSet {
        star(&self.up_closure(&star(s)))
    }

    /// No `a, b ∈ S` with `a ≤ b*`; equivalently `↑S ∩ S* = ∅`.
    pub fn is_coherent(&self, s: &LitSet) -> bool {
        self.up_closure(s).is_disjoint(&star(s))
    }

    /// `↑S = S`.
    pub fn is_forward_closed(&self, s: &LitSet) -> bool {
        self.up_closure(s) == *s
    }

    /// Membership in `C(G)`: coherent and forward-closed.
    pub fn is_coherent_closed(&self, s: &LitSet) -> bool {
        let up = self.up_closure(s);
        up == *s && up.is_disjoint(&star(s))
    }

    /// `N(G) = {a : a ≤ a*}`.
    pub fn negligibles(&self) -> LitSet {
        let c = self.closure();
        self.sigma.set(self.sigma.lits().filter(|&a| c.leq(a, complement(a))))
    }

    /// True iff `N(G) ∩ N(G)* ≠ ∅`.
    pub fn is_degenerate(&self) -> bool {
        let n = self.negligibles();
        !n.is_disjoint(&star(&n))
    }

    /// `[a]_G = ↑a ∩ ↓a`.
    pub fn equivalence_class(&self, a: Lit) -> LitSet {
        let c = self.closure();
        c.up(a).intersection(&c.down(a))
    }

    /// True iff the relation is transitive, antisymmetric and `N(G) = {0}`.
    pub fn is_poc_set(&self) -> bool {
        let c = self.closure();
        let transitive = self.sigma.lits().all(|a| {
            let mut row = self.adj[a].clone();
            row.insert(a);
            row == *c.up(a)
        });
        let antisymmetric = self.sigma.lits().all(|a| self.equivalence_class(a).count() == 1);
        transitive && antisymmetric && self.negligibles() == self.sigma.set([FALSE])
    }

    /// The canonical quotient onto a poc set.
    pub fn canonical_quotient(&self) -> Result<PocQuotient> {
        if self.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let n = self.sigma.len();
        let neg = self.negligibles();
        let neg_star = star(&neg);
        let mut projection = vec![usize::MAX; n];
        let mut classes = vec![neg.clone(), neg_star.clone()];
        for a in neg.iter() {
            projection[a] = FALSE;
        }
        for a in neg_star.iter() {
            projection[a] = TRUE;
        }
        let mut names = Vec::new();
        for a in self.sigma.proper_lits() {
            if projection[a] != usize::MAX {
                continue;
            }
            let cls = self.equivalence_class(a);
            let id = classes.len();
            for x in cls.iter() {
                projection[x] = id;
                projection[complement(x)] = id + 1;
            }
            classes.push(cls.clone());
            classes.push(star(&cls));
            names.push(self.sigma.name(a));
        }
        let qsigma = Sigma::with_names(names);
        let c = self.closure();
        let reps: Vec<Lit> = classes.iter().map(|k| k.first().expect("classes are nonempty")).collect();
        let mut q = Pcr::new_orthogonal(qsigma);
        for x in 2..classes.len() {
            for y in 2..classes.len() {
                if x != y && c.leq(reps[x], reps[y]) {
                    q.insert(x, y);
                }
            }
        }
        Ok(PocQuotient { classes, projection, quotient_pcr: q })
    }

    /// The direct sum: shared `0, 1`, disjoint proper parts, no cross relations.
    pub fn direct_sum(p: &Pcr, q: &Pcr) -> Result<Pcr> {
        if p.is_degenerate() || q.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let mut names = p.sigma.names().to_vec();
        names.extend(q.sigma.names().iter().cloned());
        let off = 2 * p.sigma.n_pairs();
        let lift = |x: Lit| if x < 2 { x } else { x + off };
        let mut pairs = p.informative_pairs();
        pairs.extend(q.informative_pairs().into_iter().map(|(a, b)| (lift(a), lift(b))));
        Ok(Pcr::from_pairs(Sigma::with_names(names), pairs))
    }

    /// Renders the relation in the `a -> b` dump format.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.informative_pairs() {
            out.push_str(&format!("{} -> {}\n", self.sigma.name(a), self.sigma.name(b)));
        }
        out.push_str(&format!("# negligible: {}\n", self.sigma.format_set(&self.negligibles())));
        if let Ok(q) = self.canonical_quotient() {
            out.push_str(&format!("# classes: {}\n", q.classes.len()));
            for cls in &q.classes {
                out.push_str(&format!("#   {}\n", self.sigma.format_set(cls)));
            }
        } else {
            out.push_str("# degenerate\n");
        }
        out
    }
}

/// The canonical quotient of a non-degenerate PCR.
#[derive(Clone, Debug)]
pub struct PocQuotient {
    /// Class of each quotient literal. Index 0 is `N(G)`, index 1 is `N(G)*`.
    pub classes: Vec<LitSet>,
    /// Quotient literal of each original literal.
    pub projection: Vec<Lit>,
    /// The poc set over the class alphabet.
    pub quotient_pcr: Pcr,
}

impl PocQuotient {
    /// `π(S)`.
    pub fn project(&self, s: &LitSet) -> LitSet {
        let qs = self.quotient_pcr.sigma();
        qs.set(s.iter().map(|x| self.projection[x]))
    }

    /// `{a : π(a) ∈ S}`.
    pub fn lift(&self, s: &LitSet) -> LitSet {
        let mut r = BitSet::new(self.projection.len());
        for x in s.iter() {
            r.union_with(&self.classes[x]);
        }
        r
    }

    /// One literal per proper quotient pair; these index the quotient Hamming
    /// coordinates.
    pub fn coordinates(&self) -> Vec<Lit> {
        (1..self.quotient_pcr.sigma().n_pairs() + 1)
            .map(|k| self.classes[2 * k].first().expect("classes are nonempty"))
            .collect()
    }
}

/// Pair index helper exposed for callers that iterate over ordered proper pairs.
#[inline]
pub fn disjoint_pairs(a: Lit, b: Lit) -> bool {
    pair_of(a) != pair_of(b)
}
