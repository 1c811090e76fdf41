//! Binary agents acting on a bead: delayed queries, action-conditioned
//! snapshots, prediction by propagation, divergence-driven decisions and
//! hard-wired arbitration.

use rand::Rng;

use crate::error::Result;
use crate::pcr::Pcr;
use crate::pcs::{pair_of, Lit, LitSet, Sigma};
use crate::propagation::coherent_projection;
use crate::sim::env::random_move;
use crate::sim::{run_rng, EnvSpec, Environment, Learner, LearnerSpec, Move, SignalFamily, ValueSignal};

/// `Σ(A ∪ #A)`: base queries followed by their delayed copies `#a`.
pub fn delayed_extend(sigma: &Sigma) -> Sigma {
    let mut names = sigma.names().to_vec();
    names.extend(sigma.names().iter().map(|n| format!("#{n}")));
    Sigma::with_names(names)
}

/// The delayed copy of a proper base literal, given `n_base` base queries.
#[inline]
pub fn delayed_lit(n_base: usize, x: Lit) -> Lit {
    debug_assert!(x >= 2 && pair_of(x) <= n_base);
    x + 2 * n_base
}

/// `now ∪ #prev` over the extended alphabet.
pub fn extend_observation(ext: &Sigma, now: &LitSet, prev: &LitSet) -> LitSet {
    let n_base = ext.n_pairs() / 2;
    let mut u = ext.empty_set();
    for x in now.iter() {
        u.insert(x);
    }
    for x in prev.iter().filter(|&x| x >= 2) {
        u.insert(delayed_lit(n_base, x));
    }
    u
}

/// Maps the undelayed part of `s` to delayed literals; `0` and `1` are kept
/// and delayed literals are dropped.
pub fn shift_to_delayed(ext: &Sigma, s: &LitSet) -> LitSet {
    let n_base = ext.n_pairs() / 2;
    let mut r = ext.empty_set();
    for x in s.iter() {
        if x < 2 {
            r.insert(x);
        } else if pair_of(x) <= n_base {
            r.insert(delayed_lit(n_base, x));
        }
    }
    r
}

/// A binary agent for one action, holding one snapshot for cycles where the
/// action occurred and one for cycles where it did not.
#[derive(Clone, Debug)]
pub struct BuaAgent {
    action: Move,
    sigma: Sigma,
    snaps: [Learner; 2],
    derived: [Option<Pcr>; 2],
    updates: [u64; 2],
}

fn slot(acted: bool) -> usize {
    usize::from(!acted)
}

impl BuaAgent {
    /// A fresh agent over the extended alphabet `ext`.
    pub fn new(action: Move, spec: &LearnerSpec, ext: &Sigma) -> Result<BuaAgent> {
        Ok(BuaAgent {
            action,
            sigma: ext.clone(),
            snaps: [spec.build(ext)?, spec.build(ext)?],
            derived: [None, None],
            updates: [0, 0],
        })
    }

    pub fn action(&self) -> Move {
        self.action
    }

    /// Snapshot for `β = α` (`acted`) or `β = α*`.
    pub fn snapshot(&self, acted: bool) -> &Learner {
        &self.snaps[slot(acted)]
    }

    /// Number of updates absorbed by the `β` snapshot.
    pub fn updates(&self, acted: bool) -> u64 {
        self.updates[slot(acted)]
    }

    /// `G^β`, cached until the snapshot changes.
    pub fn pcr(&mut self, acted: bool) -> &Pcr {
        let i = slot(acted);
        if self.derived[i].is_none() {
            self.derived[i] = Some(self.snaps[i].derived());
        }
        self.derived[i].as_ref().expect("just filled")
    }

    /// `M(w^β)`.
    pub fn minset(&self, acted: bool) -> LitSet {
        self.snaps[slot(acted)].minset()
    }

    /// `current^β`: the undelayed part of the raw observation. It is not
    /// projected through `G^β`, which models transitions: a present state
    /// the action cannot reach (the left end after moving right) is
    /// negligible there and would project to nothing. The delayed part is
    /// dropped by the shift anyway.
    pub fn current(&self, observation: &LitSet) -> LitSet {
        let n_base = self.sigma.n_pairs() / 2;
        self.sigma.set(observation.iter().filter(|&x| pair_of(x) <= n_base))
    }

    /// `P^β = coh_{G^β}(#current)` for a given belief state.
    pub fn predict_from(&mut self, acted: bool, current: &LitSet) -> LitSet {
        let shifted = shift_to_delayed(&self.sigma, current);
        coherent_projection(self.pcr(acted), &shifted)
    }

    /// `P^β` from a raw extended observation.
    pub fn predict(&mut self, acted: bool, observation: &LitSet) -> LitSet {
        let cur = self.current(observation);
        self.predict_from(acted, &cur)
    }

    /// `d(P^β; M(w^β)) = |M ∖ P|`.
    pub fn divergence(&mut self, acted: bool, observation: &LitSet) -> usize {
        let p = self.predict(acted, observation);
        self.minset(acted).difference_count(&p)
    }

    /// True if acting looks closer to the minset; ties go to a fair coin.
    pub fn decide<R: Rng>(&mut self, observation: &LitSet, rng: &mut R) -> bool {
        let d_act = self.divergence(true, observation);
        let d_idle = self.divergence(false, observation);
        match d_act.cmp(&d_idle) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => rng.gen_bool(0.5),
        }
    }

    /// Feeds the transition outcome to the snapshot matching what happened.
    pub fn observe(&mut self, acted: bool, observation: &LitSet, value: f64) -> Result<()> {
        let i = slot(acted);
        self.snaps[i].observe(observation, value)?;
        self.derived[i] = None;
        self.updates[i] += 1;
        Ok(())
    }
}

/// Joint action from the `rt` and `lt` decisions; a coin suppresses one of
/// them when both fire.
pub fn arbitrate<R: Rng>(rt: bool, lt: bool, rng: &mut R) -> Move {
    match (rt, lt) {
        (true, true) => {
            if rng.gen_bool(0.5) {
                Move::Right
            } else {
                Move::Left
            }
        }
        (true, false) => Move::Right,
        (false, true) => Move::Left,
        (false, false) => Move::Stay,
    }
}

/// A pair of agents (`rt`, `lt`) steering one bead.
#[derive(Clone, Debug)]
pub struct Sniffy {
    pub rt: BuaAgent,
    pub lt: BuaAgent,
}

impl Sniffy {
    pub fn new(spec: &LearnerSpec, ext: &Sigma) -> Result<Sniffy> {
        Ok(Sniffy { rt: BuaAgent::new(Move::Right, spec, ext)?, lt: BuaAgent::new(Move::Left, spec, ext)? })
    }

    /// Agents' joint decision for the current extended observation.
    pub fn act<R: Rng>(&mut self, observation: &LitSet, rng: &mut R) -> Move {
        let r = self.rt.decide(observation, rng);
        let l = self.lt.decide(observation, rng);
        arbitrate(r, l, rng)
    }

    /// Routes the transition outcome to each agent's matching snapshot.
    pub fn observe(&mut self, taken: Move, observation: &LitSet, value: f64) -> Result<()> {
        self.rt.observe(taken == Move::Right, observation, value)?;
        self.lt.observe(taken == Move::Left, observation, value)
    }
}

/// Agent-run parameters.
#[derive(Clone, Debug)]
pub struct SniffyConfig {
    pub env: EnvSpec,
    pub family: SignalFamily,
    /// Fixed target; uniform random per run when absent.
    pub target: Option<usize>,
    pub learner: LearnerSpec,
    /// Steps of lazy-walk override before the agents take control.
    pub training: usize,
    /// Steps under agent control.
    pub steps: usize,
    /// Position at hand-over; the bead keeps its trained position when absent.
    pub start: Option<usize>,
}

/// One logged cycle: the state at `t` and the move taken from it.
#[derive(Clone, Debug, PartialEq)]
pub struct SniffyRecord {
    pub t: usize,
    pub pos: usize,
    pub dist: usize,
    pub action: Option<Move>,
    pub value: f64,
}

/// Outcome of one agent run.
#[derive(Clone, Debug, PartialEq)]
pub struct SniffyRun {
    pub target: usize,
    pub records: Vec<SniffyRecord>,
    /// Position when control was handed to the agents.
    pub handover_pos: usize,
    pub final_pos: usize,
    /// Net signed displacement during the control phase.
    pub displacement: i64,
}

/// Runs one agent episode; deterministic in `(master, run)`.
pub fn run_sniffy(cfg: &SniffyConfig, master: u64, run: u64) -> Result<SniffyRun> {
    run_sniffy_with_agents(cfg, master, run).map(|(r, _)| r)
}

/// [`run_sniffy`], also returning the trained agents.
pub fn run_sniffy_with_agents(cfg: &SniffyConfig, master: u64, run: u64) -> Result<(SniffyRun, Sniffy)> {
    cfg.learner.check_signal(cfg.family)?;
    let mut rng = run_rng(master, run);
    let env = cfg.env.build(&mut rng);
    let target = cfg.target.unwrap_or_else(|| rng.gen_range(0..env.n_positions()));
    let signal = ValueSignal { family: cfg.family, target };
    let ext = delayed_extend(env.sigma());
    let mut agents = Sniffy::new(&cfg.learner, &ext)?;
    let mut pos = env.iid_step(&mut rng);
    let mut obs = extend_observation(&ext, env.sense(pos), env.sense(pos));
    let mut records = Vec::with_capacity(cfg.training + cfg.steps + 1);
    let mut handover_pos = pos;
    let mut displacement = 0i64;
    for t in 0..cfg.training + cfg.steps {
        if t == cfg.training {
            if let Some(s) = cfg.start {
                pos = s;
                obs = extend_observation(&ext, env.sense(pos), env.sense(pos));
            }
            handover_pos = pos;
        }
        let mv = if t < cfg.training { random_move(&mut rng) } else { agents.act(&obs, &mut rng) };
        records.push(SniffyRecord {
            t,
            pos,
            dist: env.dist(pos, target),
            action: Some(mv),
            value: signal.value(&env, pos),
        });
        let next = env.step(pos, mv);
        if t >= cfg.training && next != pos {
            displacement += mv.sign();
        }
        obs = extend_observation(&ext, env.sense(next), env.sense(pos));
        agents.observe(mv, &obs, signal.value(&env, next))?;
        pos = next;
    }
    if cfg.steps == 0 {
        handover_pos = pos;
    }
    records.push(SniffyRecord {
        t: cfg.training + cfg.steps,
        pos,
        dist: env.dist(pos, target),
        action: None,
        value: signal.value(&env, pos),
    });
    Ok((SniffyRun { target, records, handover_pos, final_pos: pos, displacement }, agents))
}

/// Agents whose snapshots have absorbed every transition the dynamics allow,
/// once each: `rt` sees `p → p+1`, `rt*` sees `p → p` and `p → p−1`, and
/// symmetrically for `lt`.
pub fn converged_agents(env: &Environment, signal: &ValueSignal, spec: &LearnerSpec) -> Result<Sniffy> {
    let ext = delayed_extend(env.sigma());
    let mut s = Sniffy::new(spec, &ext)?;
    for p in 0..env.n_positions() {
        for mv in [Move::Left, Move::Right, Move::Stay] {
            let q = env.step(p, mv);
            let obs = extend_observation(&ext, env.sense(q), env.sense(p));
            let v = signal.value(env, q);
            // A stay is idle for both agents; a move is active for one.
            s.observe(mv, &obs, v)?;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::TRUE;
    use crate::sim::{EnvKind, LearnerKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extension_layout() {
        let s = Sigma::new(3);
        let e = delayed_extend(&s);
        assert_eq!(e.len(), 2 * (2 * 3) + 2);
        assert_eq!(e.name(delayed_lit(3, s.neg(1))), "#q1*");
        let now = s.set([TRUE, s.pos(0), s.neg(1), s.pos(2)]);
        let u = extend_observation(&e, &now, &now);
        assert!(e.is_complete(&u));
        let sh = shift_to_delayed(&e, &u);
        assert_eq!(sh.count(), 4);
        assert!(sh.contains(TRUE) && sh.contains(delayed_lit(3, s.pos(0))));
    }

    #[test]
    fn arbitration_never_moves_both_ways() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(arbitrate(true, false, &mut rng), Move::Right);
        assert_eq!(arbitrate(false, true, &mut rng), Move::Left);
        assert_eq!(arbitrate(false, false, &mut rng), Move::Stay);
        let rights = (0..2000).filter(|_| arbitrate(true, true, &mut rng) == Move::Right).count();
        assert!((900..1100).contains(&rights), "{rights}");
    }

    #[test]
    fn fresh_agent_ties() {
        let s = Sigma::new(2);
        let e = delayed_extend(&s);
        let mut a = BuaAgent::new(Move::Left, &LearnerSpec::new(LearnerKind::Qualitative, 2), &e).unwrap();
        let now = s.set([TRUE, s.pos(0), s.pos(1)]);
        let obs = extend_observation(&e, &now, &now);
        assert_eq!(a.divergence(true, &obs), 0);
        assert_eq!(a.divergence(false, &obs), 0);
    }

    #[test]
    fn snapshot_update_counts_match_actions() {
        let cfg = SniffyConfig {
            env: EnvSpec::new(EnvKind::IntervalGps, 5),
            family: SignalFamily::QualDull,
            target: Some(2),
            learner: LearnerSpec::new(LearnerKind::Qualitative, 5),
            training: 200,
            steps: 50,
            start: None,
        };
        let (run, agents) = run_sniffy_with_agents(&cfg, 1, 0).unwrap();
        assert_eq!(run.records.len(), 251);
        let count = |m: Move| run.records.iter().filter(|r| r.action == Some(m)).count() as u64;
        assert_eq!(agents.rt.updates(true), count(Move::Right));
        assert_eq!(agents.rt.updates(false), 250 - count(Move::Right));
        assert_eq!(agents.lt.updates(true), count(Move::Left));
        assert_eq!(agents.lt.updates(false), 250 - count(Move::Left));
    }
}
