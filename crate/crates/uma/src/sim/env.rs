//! Environments, value signals and position dynamics.

use rand::Rng;

use crate::bitset::BitSet;
use crate::pcr::Pcr;
use crate::pcs::{LitSet, Sigma};

/// Environment family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvKind {
    /// Positions `0..=N`; sensor `a_i` (`i = 1..=N`) holds iff `pos < i`.
    IntervalGps,
    /// Positions `0..N` on a cycle; sensor `a_k` holds iff `dist(k, pos) ≤ radius`.
    CircleBeacons,
    /// Positions `0..=N`; sensor `a_i` holds iff `pos ∈ A_i` for a random
    /// proper nonempty `A_i`.
    IntervalRandom,
}

/// Unresolved environment parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnvSpec {
    pub kind: EnvKind,
    pub n: usize,
    /// Beacon radius; defaults to 4 at `N = 20` and `⌊N/5⌋` otherwise.
    pub radius: Option<usize>,
    /// Fixes the random sensor layout across runs; drawn per run when absent.
    pub seed: Option<u64>,
}

impl EnvSpec {
    pub fn new(kind: EnvKind, n: usize) -> EnvSpec {
        EnvSpec { kind, n, radius: None, seed: None }
    }

    /// Builds the environment; random sensor sets come from the layout seed
    /// when set and from `rng` otherwise.
    pub fn build<R: Rng>(&self, rng: &mut R) -> Environment {
        match self.kind {
            EnvKind::IntervalGps => Environment::interval_gps(self.n),
            EnvKind::CircleBeacons => Environment::circle(self.n, self.radius),
            EnvKind::IntervalRandom => match self.seed {
                Some(s) => Environment::interval_random(self.n, &mut super::run_rng(s, 0)),
                None => Environment::interval_random(self.n, rng),
            },
        }
    }
}

/// Joint motion of the bead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    pub fn as_str(self) -> &'static str {
        match self {
            Move::Left => "lt",
            Move::Right => "rt",
            Move::Stay => "stay",
        }
    }

    /// Signed unit displacement.
    pub fn sign(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }
}

/// A finite environment with a fixed sensor realization.
#[derive(Clone, Debug)]
pub struct Environment {
    kind: EnvKind,
    n: usize,
    radius: usize,
    sigma: Sigma,
    /// `extent[k]`: positions where sensor `k` holds.
    extent: Vec<BitSet>,
    /// Precomputed observation per position.
    views: Vec<LitSet>,
}

impl Environment {
    fn from_extents(kind: EnvKind, n: usize, radius: usize, names: Vec<String>, extent: Vec<BitSet>) -> Self {
        let sigma = Sigma::with_names(names);
        let positions = extent.first().map_or(0, BitSet::capacity);
        let views = (0..positions)
            .map(|p| {
                let mut u = sigma.set([crate::pcs::TRUE]);
                for (k, e) in extent.iter().enumerate() {
                    u.insert(if e.contains(p) { sigma.pos(k) } else { sigma.neg(k) });
                }
                u
            })
            .collect();
        Environment { kind, n, radius, sigma, extent, views }
    }

    /// Interval GPS with `N` nested sensors.
    pub fn interval_gps(n: usize) -> Self {
        assert!(n >= 1, "interval needs at least one sensor");
        let names = (1..=n).map(|i| format!("a{i}")).collect();
        let extent = (1..=n).map(|i| BitSet::from_indices(n + 1, 0..i)).collect();
        Environment::from_extents(EnvKind::IntervalGps, n, 0, names, extent)
    }

    /// Circle of `N` positions with one beacon per position.
    pub fn circle(n: usize, radius: Option<usize>) -> Self {
        assert!(n >= 3, "circle needs at least three positions");
        let r = radius.unwrap_or(if n == 20 { 4 } else { (n / 5).max(1) });
        let names = (0..n).map(|k| format!("a{k}")).collect();
        let extent = (0..n)
            .map(|k| BitSet::from_indices(n, (0..n).filter(|&p| circ_dist(n, k, p) <= r)))
            .collect();
        Environment::from_extents(EnvKind::CircleBeacons, n, r, names, extent)
    }

    /// Interval with random proper nonempty sensor extents, each position kept
    /// with probability 1/2 and redrawn on empty or full sets.
    pub fn interval_random<R: Rng>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "interval needs at least one sensor");
        let names = (1..=n).map(|i| format!("a{i}")).collect();
        let extent = (0..n)
            .map(|_| loop {
                let s = BitSet::from_indices(n + 1, (0..=n).filter(|_| rng.gen_bool(0.5)));
                if !s.is_empty() && s.count() < n + 1 {
                    break s;
                }
            })
            .collect();
        Environment::from_extents(EnvKind::IntervalRandom, n, 0, names, extent)
    }

    pub fn kind(&self) -> EnvKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    /// Positions where sensor `k` holds.
    pub fn extent(&self, k: usize) -> &BitSet {
        &self.extent[k]
    }

    pub fn n_positions(&self) -> usize {
        self.views.len()
    }

    fn is_circle(&self) -> bool {
        self.kind == EnvKind::CircleBeacons
    }

    /// The complete selection observed at `pos`.
    pub fn sense(&self, pos: usize) -> &LitSet {
        &self.views[pos]
    }

    pub fn dist(&self, p: usize, q: usize) -> usize {
        if self.is_circle() {
            circ_dist(self.n, p, q)
        } else {
            p.abs_diff(q)
        }
    }

    /// `N` on the interval, `⌊N/2⌋` on the circle.
    pub fn diam(&self) -> usize {
        if self.is_circle() {
            self.n / 2
        } else {
            self.n
        }
    }

    /// Applies a move: clamped on the interval, wrapped on the circle.
    pub fn step(&self, pos: usize, m: Move) -> usize {
        let last = self.n_positions() - 1;
        match (m, self.is_circle()) {
            (Move::Stay, _) => pos,
            (Move::Left, true) => (pos + self.n - 1) % self.n,
            (Move::Right, true) => (pos + 1) % self.n,
            (Move::Left, false) => pos.saturating_sub(1),
            (Move::Right, false) => (pos + 1).min(last),
        }
    }

    /// A uniformly random position.
    pub fn iid_step<R: Rng>(&self, rng: &mut R) -> usize {
        rng.gen_range(0..self.n_positions())
    }

    /// One lazy random-walk step: left, right or stay with probability 1/3 each.
    pub fn lazy_step<R: Rng>(&self, pos: usize, rng: &mut R) -> usize {
        self.step(pos, random_move(rng))
    }

    /// `ab` iff `ρ(a) ⊆ ρ(b)` over all positions.
    pub fn ground_truth_pcr(&self) -> Pcr {
        ground_truth_from_worlds(&self.sigma, &self.views)
    }
}

/// Uniform choice among the three moves.
pub fn random_move<R: Rng>(rng: &mut R) -> Move {
    match rng.gen_range(0..3) {
        0 => Move::Left,
        1 => Move::Right,
        _ => Move::Stay,
    }
}

/// Circular distance on `Z_n`.
pub fn circ_dist(n: usize, p: usize, q: usize) -> usize {
    let d = p.abs_diff(q) % n;
    d.min(n - d)
}

/// `ab` iff every world containing `a` contains `b`.
pub fn ground_truth_from_worlds(sigma: &Sigma, worlds: &[LitSet]) -> Pcr {
    let ext: Vec<BitSet> = sigma
        .lits()
        .map(|a| BitSet::from_indices(worlds.len(), (0..worlds.len()).filter(|&i| worlds[i].contains(a))))
        .collect();
    let mut p = Pcr::new_orthogonal(sigma.clone());
    for a in sigma.lits() {
        for b in sigma.lits() {
            if a != b && ext[a].is_subset(&ext[b]) {
                p.insert(a, b);
            }
        }
    }
    p
}

/// Value signal family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalFamily {
    /// 0 at the target, 1 elsewhere.
    QualDull,
    /// Distance to the target.
    QualSharp,
    /// `1 + diam − dist`.
    RealDull,
    /// `(1 + diam − dist)^4`.
    RealSharp,
}

impl SignalFamily {
    pub fn is_qualitative(self) -> bool {
        matches!(self, SignalFamily::QualDull | SignalFamily::QualSharp)
    }
}

/// A static value signal peaked at `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValueSignal {
    pub family: SignalFamily,
    pub target: usize,
}

impl ValueSignal {
    /// The value at `pos`. Qualitative families return integral ranks.
    pub fn value(&self, env: &Environment, pos: usize) -> f64 {
        let d = env.dist(pos, self.target);
        match self.family {
            SignalFamily::QualDull => f64::from(u8::from(d != 0)),
            SignalFamily::QualSharp => d as f64,
            SignalFamily::RealDull => (1 + env.diam() - d) as f64,
            SignalFamily::RealSharp => ((1 + env.diam() - d) as f64).powi(4),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn interval_sensing() {
        let e = Environment::interval_gps(3);
        let s = e.sigma();
        assert_eq!(*e.sense(0), s.set([1, s.pos(0), s.pos(1), s.pos(2)]));
        assert_eq!(*e.sense(3), s.set([1, s.neg(0), s.neg(1), s.neg(2)]));
    }

    #[test]
    fn circle_sensing() {
        let e = Environment::circle(20, None);
        assert_eq!(e.radius(), 4);
        let s = e.sigma();
        let on: Vec<usize> = (0..20).filter(|&k| e.sense(0).contains(s.pos(k))).collect();
        assert_eq!(on, vec![0, 1, 2, 3, 4, 16, 17, 18, 19]);
    }

    #[test]
    fn moves() {
        let e = Environment::interval_gps(5);
        assert_eq!(e.step(0, Move::Left), 0);
        assert_eq!(e.step(5, Move::Right), 5);
        let c = Environment::circle(20, None);
        assert_eq!(c.step(0, Move::Left), 19);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!([19, 0, 1].contains(&c.lazy_step(0, &mut rng)));
        }
    }

    #[test]
    fn interval_truth_is_chain() {
        let e = Environment::interval_gps(4);
        let g = e.ground_truth_pcr();
        let s = e.sigma();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.contains(s.pos(i), s.pos(j)), i < j, "{i} {j}");
            }
        }
        assert!(g.is_poc_set());
    }

    #[test]
    fn circle_truth_matches_beacon_overlaps() {
        let e = Environment::circle(20, None);
        let g = e.ground_truth_pcr();
        let s = e.sigma();
        let mut found = Vec::new();
        for (a, b) in g.informative_pairs() {
            if a % 2 == 0 && b % 2 == 1 {
                found.push(((a - 2) / 2, (b - 2) / 2));
            }
        }
        let k = 0;
        let mut partners: Vec<usize> = found.iter().filter(|(x, _)| *x == k).map(|(_, y)| *y).collect();
        partners.sort();
        assert_eq!(partners, vec![9, 10, 11]);
        assert_eq!(found.len(), 60);
        // Only a_k < a_l* relations (and their contrapositives) occur.
        assert_eq!(g.informative_pairs().len(), 60);
        assert!(s.n_pairs() == 20);
    }

    #[test]
    fn random_extents_are_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = Environment::interval_random(6, &mut rng);
        for k in 0..6 {
            let c = e.extent(k).count();
            assert!(c > 0 && c < 7);
        }
    }

    #[test]
    fn signals() {
        let e = Environment::interval_gps(20);
        let v = |f| ValueSignal { family: f, target: 5 }.value(&e, 8);
        assert_eq!(v(SignalFamily::QualDull), 1.0);
        assert_eq!(v(SignalFamily::QualSharp), 3.0);
        assert_eq!(v(SignalFamily::RealDull), 18.0);
        assert_eq!(v(SignalFamily::RealSharp), 18f64.powi(4));
        assert_eq!(ValueSignal { family: SignalFamily::QualDull, target: 8 }.value(&e, 8), 0.0);
    }
}
