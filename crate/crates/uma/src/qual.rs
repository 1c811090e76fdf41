//! Qualitative snapshots: 2-rankings with values in the extended naturals.

use std::fmt;

use crate::error::{Error, Result};
use crate::pcr::{disjoint_pairs, Pcr};
use crate::pcs::{complement, Lit, LitSet, Sigma, FALSE, TRUE};

/// An extended natural number. `Rank::INF` is a saturating sentinel.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rank(u32);

impl Rank {
    pub const ZERO: Rank = Rank(0);
    pub const INF: Rank = Rank(u32::MAX);

    /// A finite rank. Panics on the sentinel value.
    pub fn fin(n: u32) -> Rank {
        assert!(n != u32::MAX, "finite rank out of range");
        Rank(n)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self != Rank::INF
    }

    /// The finite value, if any.
    #[inline]
    pub fn value(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }

    /// Raw encoding; `u32::MAX` stands for infinity.
    #[inline]
    pub fn to_bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn from_bits(b: u32) -> Rank {
        Rank(b)
    }

    /// Addition saturating at infinity.
    #[inline]
    pub fn sat_add(self, o: Rank) -> Rank {
        Rank(self.0.saturating_add(o.0))
    }
}

impl fmt::Debug for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "inf"),
        }
    }
}

/// A ranking on the complete selections `H(Σ)`, indexed by
/// [`Sigma::selection_from_mask`] masks. Oracle scale only.
#[derive(Clone, Debug, PartialEq)]
pub struct Ranking {
    sigma: Sigma,
    values: Vec<Rank>,
}

impl Ranking {
    /// Builds a ranking from one value per mask; some value must be finite.
    pub fn new(sigma: Sigma, values: Vec<Rank>) -> Result<Ranking> {
        if values.len() != 1 << sigma.n_pairs() {
            return Err(Error::BadParameter(format!("expected {} values", 1usize << sigma.n_pairs())));
        }
        if values.iter().all(|v| !v.is_finite()) {
            return Err(Error::BadValue("ranking has no finite value".into()));
        }
        Ok(Ranking { sigma, values })
    }

    /// `π(u, r)`: `r` on sets containing `u`, infinity elsewhere.
    pub fn point_mass(sigma: &Sigma, u: &LitSet, r: Rank) -> Result<Ranking> {
        if !r.is_finite() {
            return Err(Error::BadValue("point mass rank must be finite".into()));
        }
        let mut values = vec![Rank::INF; 1 << sigma.n_pairs()];
        values[sigma.mask_of(u) as usize] = r;
        Ranking::new(sigma.clone(), values)
    }

    /// Pointwise minimum.
    pub fn min_with(&self, o: &Ranking) -> Ranking {
        let values = self.values.iter().zip(&o.values).map(|(a, b)| *a.min(b)).collect();
        Ranking { sigma: self.sigma.clone(), values }
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    pub fn values(&self) -> &[Rank] {
        &self.values
    }

    /// `κ(u)` for a complete selection.
    pub fn at(&self, u: &LitSet) -> Rank {
        self.values[self.sigma.mask_of(u) as usize]
    }

    /// `κ(F)`, the minimum over a family of complete selections.
    pub fn of_set<'a, I: IntoIterator<Item = &'a LitSet>>(&self, f: I) -> Rank {
        f.into_iter().map(|u| self.at(u)).min().unwrap_or(Rank::INF)
    }

    /// Masks attaining the global minimum.
    pub fn global_minima(&self) -> Vec<u64> {
        let m = self.values.iter().min().copied().unwrap_or(Rank::INF);
        (0..self.values.len() as u64).filter(|&i| self.values[i as usize] == m).collect()
    }

    /// `w_ab = κ(⟨ab⟩)` over `H(Σ)`.
    pub fn two_restriction(&self) -> QualSnapshot {
        let n = self.sigma.len();
        let mut w = vec![Rank::INF; n * n];
        for (mask, &r) in self.values.iter().enumerate() {
            if !r.is_finite() {
                continue;
            }
            let u = self.sigma.selection_from_mask(mask as u64);
            for a in u.iter() {
                for b in u.iter() {
                    let e = &mut w[a * n + b];
                    *e = (*e).min(r);
                }
            }
        }
        QualSnapshot { sigma: self.sigma.clone(), w: Some(w), delta: Rank::ZERO }
    }
}

/// A 2-ranking plus its derivation tolerance `δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct QualSnapshot {
    sigma: Sigma,
    /// Row-major `|Σ|×|Σ|` matrix; `None` before the first observation.
    w: Option<Vec<Rank>>,
    delta: Rank,
}

impl QualSnapshot {
    /// An uninitialized snapshot with `δ = 0`.
    pub fn new(sigma: Sigma) -> QualSnapshot {
        QualSnapshot { sigma, w: None, delta: Rank::ZERO }
    }

    /// Wraps an explicit matrix; validity is not checked here.
    pub fn from_matrix(sigma: Sigma, w: Vec<Rank>) -> Result<QualSnapshot> {
        if w.len() != sigma.len() * sigma.len() {
            return Err(Error::BadParameter("matrix size does not match alphabet".into()));
        }
        Ok(QualSnapshot { sigma, w: Some(w), delta: Rank::ZERO })
    }

    /// `w_ab = r` iff `a, b ∈ u`, else infinity.
    pub fn point_mass(sigma: &Sigma, u: &LitSet, r: Rank) -> QualSnapshot {
        let mut s = QualSnapshot::new(sigma.clone());
        s.w = Some(point_mass_matrix(sigma, u, r));
        s
    }

    pub fn with_delta(mut self, delta: Rank) -> QualSnapshot {
        self.delta = delta;
        self
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    pub fn delta(&self) -> Rank {
        self.delta
    }

    pub fn is_initialized(&self) -> bool {
        self.w.is_some()
    }

    pub fn matrix(&self) -> Option<&[Rank]> {
        self.w.as_deref()
    }

    /// `w_ab`; infinity everywhere before initialization.
    #[inline]
    pub fn get(&self, a: Lit, b: Lit) -> Rank {
        match &self.w {
            Some(w) => w[a * self.sigma.len() + b],
            None => Rank::INF,
        }
    }

    /// `w_a = w_aa`.
    #[inline]
    pub fn w_a(&self, a: Lit) -> Rank {
        self.get(a, a)
    }

    /// `w_∅ = min(w_a, w_a*)`, read off the pair `{0, 1}`.
    pub fn w_empty(&self) -> Rank {
        self.w_a(TRUE).min(self.w_a(FALSE))
    }

    /// Entrywise minimum with the point-mass restriction at `(u, r)`.
    pub fn update(&mut self, u: &LitSet, r: Rank) -> Result<()> {
        if !r.is_finite() {
            return Err(Error::BadValue("observation rank must be finite".into()));
        }
        if !self.sigma.is_complete(u) {
            return Err(Error::BadParameter("observation must be a complete selection".into()));
        }
        let n = self.sigma.len();
        match &mut self.w {
            None => self.w = Some(point_mass_matrix(&self.sigma, u, r)),
            Some(w) => {
                let lits: Vec<Lit> = u.iter().collect();
                for &a in &lits {
                    let row = &mut w[a * n..(a + 1) * n];
                    for &b in &lits {
                        if r < row[b] {
                            row[b] = r;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Lists violated 2-ranking conditions; empty iff valid.
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        if self.w.is_none() {
            return bad;
        }
        let s = &self.sigma;
        let n = s.len();
        for a in s.lits() {
            for b in s.lits() {
                if self.get(a, b) != self.get(b, a) {
                    bad.push(format!("asymmetric at ({a},{b})"));
                }
            }
        }
        for a in s.lits() {
            if self.get(FALSE, a).is_finite() || self.get(a, complement(a)).is_finite() {
                bad.push(format!("condition 1 at {a}"));
            }
        }
        let we = self.w_empty();
        if !we.is_finite() {
            bad.push("condition 2: w_empty infinite".into());
        }
        for a in s.lits() {
            if self.w_a(a).min(self.w_a(complement(a))) != we {
                bad.push(format!("condition 2 at {a}"));
            }
            for b in s.lits() {
                if self.w_a(a) != self.get(a, b).min(self.get(a, complement(b))) {
                    bad.push(format!("condition 3 at ({a},{b})"));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.get(a, complement(b));
                for c in 0..n {
                    if self.get(a, complement(c)) < ab.min(self.get(b, complement(c))) {
                        bad.push(format!("condition 4 at ({a},{b},{c})"));
                    }
                }
            }
        }
        bad
    }

    fn relation(&self, keep: impl Fn(Lit, Lit) -> bool) -> Pcr {
        let mut p = Pcr::new_orthogonal(self.sigma.clone());
        if self.w.is_none() {
            return p;
        }
        for a in self.sigma.lits() {
            for b in self.sigma.lits() {
                if disjoint_pairs(a, b) && keep(a, b) {
                    p.insert(a, b);
                }
            }
        }
        p
    }

    /// `r⟨w; δ⟩`: `ab` iff the pairs of `a, b` differ and `w_ab* > δ`
    /// (`w_ab* = ∞` when `δ = ∞`).
    pub fn residual_pcr(&self, delta: Rank) -> Pcr {
        self.relation(|a, b| {
            let x = self.get(a, complement(b));
            if delta.is_finite() {
                x > delta
            } else {
                !x.is_finite()
            }
        })
    }

    /// The derived PCR at the snapshot's `δ`.
    pub fn derived_pcr(&self) -> Pcr {
        let delta = self.delta;
        self.relation(|a, b| {
            let x = self.get(a, complement(b));
            let ab = self.get(a, b);
            let nn = self.get(complement(a), complement(b));
            if delta.is_finite() {
                !x.is_finite() || x > delta.sat_add(ab.max(nn))
            } else {
                !x.is_finite() && ab.is_finite() && nn.is_finite()
            }
        })
    }

    /// `M(w; ε) = {a : w_a < w_a* − ε}`; empty before initialization.
    pub fn minset(&self, eps: Rank) -> LitSet {
        let mut m = self.sigma.empty_set();
        if self.w.is_none() {
            return m;
        }
        for a in self.sigma.lits() {
            let wa = self.w_a(a);
            let wn = self.w_a(complement(a));
            if wa.is_finite() && wa.sat_add(eps) < wn {
                m.insert(a);
            }
        }
        m
    }

    /// The completion `ŵ(u) = max_{a,b ∈ u} w_ab` as a ranking on `H(Σ)`.
    pub fn completion(&self) -> Result<Ranking> {
        if self.w.is_none() || !self.validate().is_empty() {
            return Err(Error::BadValue("completion needs a valid 2-ranking".into()));
        }
        let values = (0..1u64 << self.sigma.n_pairs())
            .map(|m| {
                let u = self.sigma.selection_from_mask(m);
                let mut best = Rank::ZERO;
                for a in u.iter() {
                    for b in u.iter() {
                        best = best.max(self.get(a, b));
                    }
                }
                best
            })
            .collect();
        Ranking::new(self.sigma.clone(), values)
    }
}

fn point_mass_matrix(sigma: &Sigma, u: &LitSet, r: Rank) -> Vec<Rank> {
    let n = sigma.len();
    let mut w = vec![Rank::INF; n * n];
    for a in u.iter() {
        for b in u.iter() {
            w[a * n + b] = r;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma2() -> (Sigma, Lit, Lit) {
        let s = Sigma::new(2);
        let (a, b) = (s.pos(0), s.pos(1));
        (s, a, b)
    }

    #[test]
    fn rank_arithmetic() {
        assert_eq!(Rank::INF.sat_add(Rank::fin(3)), Rank::INF);
        assert_eq!(Rank::fin(2).sat_add(Rank::fin(3)), Rank::fin(5));
        assert!(Rank::fin(7) < Rank::INF);
        assert_eq!(Rank::INF.to_string(), "inf");
    }

    #[test]
    fn point_mass_ranking() {
        let (s, a, b) = sigma2();
        let u = s.set([TRUE, a, b]);
        let v = s.set([TRUE, complement(a), b]);
        let k = Ranking::point_mass(&s, &u, Rank::fin(3)).unwrap();
        assert_eq!(k.at(&u), Rank::fin(3));
        assert_eq!(k.at(&v), Rank::INF);
        let k2 = k.min_with(&Ranking::point_mass(&s, &v, Rank::fin(1)).unwrap());
        assert_eq!(k2.of_set([&u, &v]), Rank::fin(1));
        let w = k.two_restriction();
        assert_eq!(w, QualSnapshot::point_mass(&s, &u, Rank::fin(3)));
        assert_eq!(w.w_empty(), Rank::fin(3));
        assert!(w.validate().is_empty());
        assert_eq!(w.completion().unwrap(), k);
    }

    #[test]
    fn update_semantics() {
        let (s, a, b) = sigma2();
        let u = s.set([TRUE, a, b]);
        let mut w = QualSnapshot::new(s.clone());
        w.update(&u, Rank::fin(2)).unwrap();
        assert_eq!(w, QualSnapshot::point_mass(&s, &u, Rank::fin(2)));
        let before = w.clone();
        w.update(&u, Rank::fin(2)).unwrap();
        assert_eq!(w, before);
        assert!(w.update(&u, Rank::INF).is_err());
    }

    #[test]
    fn minsets() {
        let (s, a, b) = sigma2();
        let u = s.set([TRUE, a, b]);
        let w = QualSnapshot::point_mass(&s, &u, Rank::fin(1));
        assert_eq!(w.minset(Rank::ZERO), u);
        let mut sym = w.clone();
        for m in 0..4 {
            sym.update(&s.selection_from_mask(m), Rank::fin(1)).unwrap();
        }
        assert_eq!(sym.minset(Rank::ZERO), s.set([TRUE]));
        assert!(QualSnapshot::new(s).minset(Rank::ZERO).is_empty());
    }

    #[test]
    fn all_equal_snapshot_has_no_proper_relations() {
        let (s, _, _) = sigma2();
        let mut w = QualSnapshot::new(s.clone());
        for m in 0..4 {
            w.update(&s.selection_from_mask(m), Rank::fin(1)).unwrap();
        }
        assert!(w.derived_pcr().informative_pairs().is_empty());
        assert!(w.residual_pcr(Rank::fin(1)).informative_pairs().is_empty());
    }

    #[test]
    fn point_mass_residual() {
        let (s, a, b) = sigma2();
        let u = s.set([TRUE, a, b]);
        let w = QualSnapshot::point_mass(&s, &u, Rank::fin(1));
        let r = w.residual_pcr(Rank::fin(1));
        for x in s.lits() {
            for y in s.lits() {
                if disjoint_pairs(x, y) && x != FALSE {
                    let expect = !w.get(x, complement(y)).is_finite();
                    assert_eq!(r.contains(x, y), expect, "{x} {y}");
                }
            }
        }
        assert!(!r.is_degenerate());
    }

    #[test]
    fn two_observation_instance() {
        // u = {1,a,b} at rank 0 and v = {1,a*,b} at rank 1.
        let (s, a, b) = sigma2();
        let u = s.set([TRUE, a, b]);
        let v = s.set([TRUE, complement(a), b]);
        let mut w = QualSnapshot::new(s.clone());
        w.update(&u, Rank::fin(0)).unwrap();
        w.update(&v, Rank::fin(1)).unwrap();
        let g = w.derived_pcr();
        // b* was never observed, so 1 ≤ b and b* is negligible.
        assert!(g.contains(TRUE, b));
        // w_{b a*} = 1 > 0 + max(w_ba, w_{b*a*}) = max(0, inf) fails: no b ≤ a.
        assert!(!g.contains(b, a));
        // a ≤ b: w_{ab*} = inf.
        assert!(g.contains(a, b));
        assert!(!g.is_degenerate());
        assert_eq!(w.minset(Rank::ZERO), s.set([TRUE, a, b]));
    }
}
