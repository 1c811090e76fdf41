//! Observer experiments and binary agents on small discrete environments.

pub mod agent;
pub mod env;
pub mod observer;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pcr::{disjoint_pairs, Pcr};
use crate::pcs::{LitSet, Sigma};
use crate::qual::{QualSnapshot, Rank};
use crate::real::{RealSnapshot, Schedule};

pub use env::{EnvKind, EnvSpec, Environment, Move, SignalFamily, ValueSignal};

/// Per-run generator: the master seed selects the key, the run id the stream.
pub fn run_rng(master: u64, run: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(master);
    r.set_stream(run);
    r
}

/// How positions are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Iid,
    LazyWalk,
}

/// Snapshot flavour of a learner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LearnerKind {
    /// Real-valued, `q(t) = (t+1)/(t+2)`.
    Empirical,
    /// Real-valued, constant discount.
    Discounted(f64),
    /// Extended-natural ranks.
    Qualitative,
}

/// Learner parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearnerSpec {
    pub kind: LearnerKind,
    /// Uniform threshold for real snapshots.
    pub tau: f64,
    /// Derivation tolerance for qualitative snapshots.
    pub delta: Rank,
}

impl LearnerSpec {
    /// Defaults: `τ = 1/(2N)`, `δ = 0`.
    pub fn new(kind: LearnerKind, n: usize) -> LearnerSpec {
        LearnerSpec { kind, tau: 1.0 / (2.0 * n as f64), delta: Rank::ZERO }
    }

    /// Rejects a real learner fed a qualitative signal and vice versa.
    pub fn check_signal(&self, family: SignalFamily) -> Result<()> {
        let qual = self.kind == LearnerKind::Qualitative;
        if qual != family.is_qualitative() {
            return Err(Error::BadParameter(format!("learner {:?} cannot use signal {:?}", self.kind, family)));
        }
        Ok(())
    }

    /// A fresh snapshot over `sigma`.
    pub fn build(&self, sigma: &Sigma) -> Result<Learner> {
        Ok(match self.kind {
            LearnerKind::Qualitative => Learner::Qual(QualSnapshot::new(sigma.clone()).with_delta(self.delta)),
            LearnerKind::Empirical => Learner::Real(RealSnapshot::new(sigma.clone(), Schedule::Empirical, self.tau)?),
            LearnerKind::Discounted(q) => Learner::Real(RealSnapshot::new(sigma.clone(), Schedule::Fixed(q), self.tau)?),
        })
    }
}

/// A snapshot of either flavour.
#[derive(Clone, Debug)]
pub enum Learner {
    Qual(QualSnapshot),
    Real(RealSnapshot<f64>),
}

impl Learner {
    /// Absorbs one observation. Qualitative learners read `value` as a rank.
    pub fn observe(&mut self, u: &LitSet, value: f64) -> Result<()> {
        match self {
            Learner::Qual(s) => {
                if !(value >= 0.0 && value.fract() == 0.0 && value < u32::MAX as f64) {
                    return Err(Error::BadValue(value.to_string()));
                }
                s.update(u, Rank::fin(value as u32))
            }
            Learner::Real(s) => s.update(u, value),
        }
    }

    /// The derived PCR; orthogonal before the first observation.
    pub fn derived(&self) -> Pcr {
        match self {
            Learner::Qual(s) => s.derived_pcr(),
            Learner::Real(s) => s.derived_pcr().unwrap_or_else(|_| Pcr::new_orthogonal(s.sigma().clone())),
        }
    }

    /// The minset (`ε = 0` for qualitative snapshots).
    pub fn minset(&self) -> LitSet {
        match self {
            Learner::Qual(s) => s.minset(Rank::ZERO),
            Learner::Real(s) => s.minset(),
        }
    }

    pub fn is_initialized(&self) -> bool {
        match self {
            Learner::Qual(s) => s.is_initialized(),
            Learner::Real(s) => s.count() > 0,
        }
    }
}

/// PCR derived from the exact expected weights (real learners) or the exact
/// limiting 2-ranking (qualitative learners) under position distribution `pi`.
pub fn expected_pcr(env: &Environment, signal: &ValueSignal, spec: &LearnerSpec, pi: &[f64]) -> Result<Pcr> {
    expected_pcr_over(env.sigma(), spec, (0..pi.len()).map(|p| (env.sense(p).clone(), signal.value(env, p), pi[p])))
}

/// [`expected_pcr`] over arbitrary weighted worlds `(u, value, probability)`.
pub fn expected_pcr_over<I>(sigma: &Sigma, spec: &LearnerSpec, worlds: I) -> Result<Pcr>
where
    I: IntoIterator<Item = (LitSet, f64, f64)>,
{
    let n = sigma.len();
    if spec.kind == LearnerKind::Qualitative {
        let mut s = QualSnapshot::new(sigma.clone()).with_delta(spec.delta);
        for (u, v, p) in worlds {
            if p > 0.0 {
                s.update(&u, Rank::fin(v as u32))?;
            }
        }
        return Ok(s.derived_pcr());
    }
    let mut w = vec![0.0f64; n * n];
    for (u, v, p) in worlds {
        for a in u.iter() {
            for b in u.iter() {
                w[a * n + b] += p * v;
            }
        }
    }
    RealSnapshot::from_matrix(sigma.clone(), w, Schedule::Empirical, spec.tau)?.derived_pcr()
}

/// Ordered proper pairs with distinct complement pairs.
fn metric_pairs(sigma: &Sigma) -> impl Iterator<Item = (usize, usize)> + '_ {
    sigma.proper_lits().flat_map(move |a| sigma.proper_lits().filter(move |&b| disjoint_pairs(a, b)).map(move |b| (a, b)))
}

/// Fraction of ordered proper pairs on which the generating relations differ.
pub fn err_pcr(learned: &Pcr, expected: &Pcr) -> f64 {
    let (mut bad, mut tot) = (0usize, 0usize);
    for (a, b) in metric_pairs(learned.sigma()) {
        tot += 1;
        bad += usize::from(learned.contains(a, b) != expected.contains(a, b));
    }
    bad as f64 / tot.max(1) as f64
}

/// Fraction of ordered proper pairs on which the transitive closure of the
/// learned relation differs from the true order.
pub fn err_closure(learned: &Pcr, truth: &Pcr) -> f64 {
    let (mut bad, mut tot) = (0usize, 0usize);
    for (a, b) in metric_pairs(learned.sigma()) {
        tot += 1;
        bad += usize::from(learned.leq(a, b) != truth.leq(a, b));
    }
    bad as f64 / tot.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_expected_pcrs_are_the_chain() {
        let env = Environment::interval_gps(6);
        let truth = env.ground_truth_pcr();
        let pi = vec![1.0 / 7.0; 7];
        for (kind, fam) in [
            (LearnerKind::Empirical, SignalFamily::RealDull),
            (LearnerKind::Empirical, SignalFamily::RealSharp),
            (LearnerKind::Qualitative, SignalFamily::QualDull),
            (LearnerKind::Qualitative, SignalFamily::QualSharp),
        ] {
            for t in 0..7 {
                let sig = ValueSignal { family: fam, target: t };
                let e = expected_pcr(&env, &sig, &LearnerSpec::new(kind, 6), &pi).unwrap();
                assert_eq!(err_closure(&e, &truth), 0.0, "{kind:?} {fam:?} {t}");
            }
        }
    }

    #[test]
    fn no_knowledge_baseline() {
        let env = Environment::interval_gps(4);
        let truth = env.ground_truth_pcr();
        let empty = Pcr::new_orthogonal(env.sigma().clone());
        let rel = metric_pairs(env.sigma()).filter(|&(a, b)| truth.contains(a, b)).count();
        let tot = metric_pairs(env.sigma()).count();
        assert_eq!(tot, 8 * 6);
        assert_eq!(err_pcr(&empty, &truth), rel as f64 / tot as f64);
    }
}
