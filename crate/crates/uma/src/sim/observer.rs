//! Passive observers: a single snapshot fed by i.i.d. or lazy-walk positions.

use rand::Rng;

use crate::error::Result;
use crate::oracle::stationary_distribution;
use crate::pcr::Pcr;
use crate::sim::{err_closure, err_pcr, expected_pcr, run_rng, EnvSpec, Environment, Learner, LearnerSpec, Sampling};
use crate::sim::{SignalFamily, ValueSignal};

/// Observer run parameters.
#[derive(Clone, Debug)]
pub struct ObserverConfig {
    pub env: EnvSpec,
    pub family: SignalFamily,
    /// Fixed target; uniform random per run when absent.
    pub target: Option<usize>,
    pub learner: LearnerSpec,
    pub sampling: Sampling,
    pub steps: usize,
    /// Record every `k`-th step; step 0 and the last step are always recorded.
    pub record_every: usize,
}

/// One logged step. Step 0 precedes the first observation.
#[derive(Clone, Debug, PartialEq)]
pub struct ObserverRecord {
    pub t: usize,
    pub pos: usize,
    pub target: usize,
    pub dist: usize,
    pub err_pcr: f64,
    pub err_closure: f64,
    pub value: f64,
}

/// Position distribution implied by the sampling mode.
pub fn position_distribution(env: &Environment, sampling: Sampling) -> Result<Vec<f64>> {
    match sampling {
        Sampling::Iid => Ok(vec![1.0 / env.n_positions() as f64; env.n_positions()]),
        Sampling::LazyWalk => stationary_distribution(env),
    }
}

/// Runs one observer; deterministic in `(master, run)`.
pub fn run_observer(cfg: &ObserverConfig, master: u64, run: u64) -> Result<Vec<ObserverRecord>> {
    run_observer_with_learner(cfg, master, run).map(|(r, _)| r)
}

/// [`run_observer`], also returning the final learner.
pub fn run_observer_with_learner(cfg: &ObserverConfig, master: u64, run: u64) -> Result<(Vec<ObserverRecord>, Learner)> {
    cfg.learner.check_signal(cfg.family)?;
    let mut rng = run_rng(master, run);
    let env = cfg.env.build(&mut rng);
    let target = cfg.target.unwrap_or_else(|| rng.gen_range(0..env.n_positions()));
    let signal = ValueSignal { family: cfg.family, target };
    let truth = env.ground_truth_pcr();
    let pi = position_distribution(&env, cfg.sampling)?;
    let expected = expected_pcr(&env, &signal, &cfg.learner, &pi)?;
    let mut learner = cfg.learner.build(env.sigma())?;
    let every = cfg.record_every.max(1);
    let mut pos = env.iid_step(&mut rng);
    let mut out = Vec::new();
    let record = |t: usize, pos: usize, learned: &Pcr, value: f64| ObserverRecord {
        t,
        pos,
        target,
        dist: env.dist(pos, target),
        err_pcr: err_pcr(learned, &expected),
        err_closure: err_closure(learned, &truth),
        value,
    };
    out.push(record(0, pos, &Pcr::new_orthogonal(env.sigma().clone()), signal.value(&env, pos)));
    for t in 1..=cfg.steps {
        let v = signal.value(&env, pos);
        learner.observe(env.sense(pos), v)?;
        if t % every == 0 || t == cfg.steps {
            out.push(record(t, pos, &learner.derived(), v));
        }
        pos = match cfg.sampling {
            Sampling::Iid => env.iid_step(&mut rng),
            Sampling::LazyWalk => env.lazy_step(pos, &mut rng),
        };
    }
    Ok((out, learner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{EnvKind, LearnerKind};

    fn cfg(kind: LearnerKind, family: SignalFamily) -> ObserverConfig {
        ObserverConfig {
            env: EnvSpec::new(EnvKind::IntervalGps, 6),
            family,
            target: None,
            learner: LearnerSpec::new(kind, 6),
            sampling: Sampling::Iid,
            steps: 400,
            record_every: 100,
        }
    }

    #[test]
    fn small_interval_converges() {
        for (k, f) in [
            (LearnerKind::Empirical, SignalFamily::RealDull),
            (LearnerKind::Discounted(0.99), SignalFamily::RealSharp),
            (LearnerKind::Qualitative, SignalFamily::QualSharp),
        ] {
            let recs = run_observer(&cfg(k, f), 11, 0).unwrap();
            assert_eq!(recs.len(), 5);
            let last = recs.last().unwrap();
            assert_eq!((last.err_pcr, last.err_closure), (0.0, 0.0), "{k:?}");
            assert!(recs[0].err_pcr > 0.0);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let c = cfg(LearnerKind::Qualitative, SignalFamily::QualDull);
        assert_eq!(run_observer(&c, 5, 3).unwrap(), run_observer(&c, 5, 3).unwrap());
    }

    #[test]
    fn mismatched_signal_rejected() {
        assert!(run_observer(&cfg(LearnerKind::Empirical, SignalFamily::QualDull), 1, 0).is_err());
    }
}
