//! Run configuration: the TOML file format and its resolution into
//! simulation parameters.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use uma::sim::agent::SniffyConfig;
use uma::sim::observer::ObserverConfig;
use uma::sim::{EnvKind, EnvSpec, LearnerKind, LearnerSpec, Sampling, SignalFamily};
use uma::Rank;

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub env: EnvSection,
    #[serde(default)]
    pub signal: SignalSection,
    #[serde(default)]
    pub learner: LearnerSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EnvSection {
    /// `interval-gps`, `circle` or `interval-random`.
    pub kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// Fixed random-sensor layout; drawn per run when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for EnvSection {
    fn default() -> Self {
        EnvSection { kind: "interval-gps".into(), n: 20, radius: None, seed: None }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SignalSection {
    /// `dull` or `sharp`; the learner decides between ranks and reals.
    pub family: String,
    /// Fixed target position; uniform per run when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
}

impl Default for SignalSection {
    fn default() -> Self {
        SignalSection { family: "dull".into(), target: None }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LearnerSection {
    /// `empirical`, `discounted` or `qualitative`.
    pub snapshot: String,
    /// Discount for `discounted` snapshots.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Threshold for real snapshots; `1/(2N)` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Derivation tolerance for qualitative snapshots.
    #[serde(default)]
    pub delta: u32,
}

impl Default for LearnerSection {
    fn default() -> Self {
        LearnerSection { snapshot: "qualitative".into(), q: None, tau: None, delta: 0 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// `observer` or `sniffy`.
    pub mode: String,
    /// Observations (observer) or agent-controlled cycles (sniffy).
    pub steps: usize,
    /// Random-walk cycles before the agents take over.
    #[serde(default = "default_training")]
    pub training: usize,
    /// Number of runs.
    pub batch: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Observer position sampling: `iid` or `lazy`.
    #[serde(default = "default_sampling")]
    pub sampling: String,
    /// Observer rows are logged every this many steps.
    #[serde(default = "default_every")]
    pub record_every: usize,
    /// Position at hand-over to the agents.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
}

fn default_training() -> usize {
    2000
}

fn default_sampling() -> String {
    "iid".into()
}

fn default_every() -> usize {
    1
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            mode: "observer".into(),
            steps: 10_000,
            training: default_training(),
            batch: 100,
            seed: None,
            sampling: default_sampling(),
            record_every: default_every(),
            start: None,
        }
    }
}

/// The parsed experiment, ready to run.
#[derive(Clone, Debug)]
pub enum Experiment {
    Observer(ObserverConfig),
    Sniffy(SniffyConfig),
}

impl RunConfig {
    /// Reads and parses a config file; parse errors carry line and column.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        RunConfig::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<RunConfig> {
        Ok(toml::from_str(text)?)
    }

    /// Resolves names and defaults; the seed must already be materialized.
    pub fn experiment(&self) -> Result<Experiment> {
        let kind = match self.env.kind.as_str() {
            "interval-gps" => EnvKind::IntervalGps,
            "circle" => EnvKind::CircleBeacons,
            "interval-random" => EnvKind::IntervalRandom,
            k => bail!("env.kind: unknown environment {k:?} (expected interval-gps, circle or interval-random)"),
        };
        let n = self.env.n;
        if n == 0 || (kind == EnvKind::CircleBeacons && n < 3) {
            bail!("env.N: too small for {}", self.env.kind);
        }
        let env = EnvSpec { kind, n, radius: self.env.radius, seed: self.env.seed };
        let lk = match self.learner.snapshot.as_str() {
            "empirical" => LearnerKind::Empirical,
            "discounted" => {
                let q = self.learner.q.unwrap_or(0.999);
                if !(q > 0.0 && q <= 1.0) {
                    bail!("learner.q: discount must lie in (0, 1], got {q}");
                }
                LearnerKind::Discounted(q)
            }
            "qualitative" => LearnerKind::Qualitative,
            s => bail!("learner.snapshot: unknown snapshot {s:?} (expected empirical, discounted or qualitative)"),
        };
        let qual = lk == LearnerKind::Qualitative;
        let family = match (self.signal.family.as_str(), qual) {
            ("dull", true) => SignalFamily::QualDull,
            ("sharp", true) => SignalFamily::QualSharp,
            ("dull", false) => SignalFamily::RealDull,
            ("sharp", false) => SignalFamily::RealSharp,
            (f, _) => bail!("signal.family: unknown family {f:?} (expected dull or sharp)"),
        };
        let mut learner = LearnerSpec::new(lk, n);
        if let Some(t) = self.learner.tau {
            if !(t > 0.0 && t <= 1.0) {
                bail!("learner.tau: threshold must lie in (0, 1], got {t}");
            }
            learner.tau = t;
        }
        learner.delta = Rank::fin(self.learner.delta);
        let positions = if kind == EnvKind::CircleBeacons { n } else { n + 1 };
        for (name, v) in [("signal.target", self.signal.target), ("run.start", self.run.start)] {
            if let Some(p) = v {
                if p >= positions {
                    bail!("{name}: position {p} outside 0..{positions}");
                }
            }
        }
        if self.run.batch == 0 {
            bail!("run.batch: need at least one run");
        }
        Ok(match self.run.mode.as_str() {
            "observer" => {
                let sampling = match self.run.sampling.as_str() {
                    "iid" => Sampling::Iid,
                    "lazy" => Sampling::LazyWalk,
                    s => bail!("run.sampling: unknown sampling {s:?} (expected iid or lazy)"),
                };
                Experiment::Observer(ObserverConfig {
                    env,
                    family,
                    target: self.signal.target,
                    learner,
                    sampling,
                    steps: self.run.steps,
                    record_every: self.run.record_every.max(1),
                })
            }
            "sniffy" => Experiment::Sniffy(SniffyConfig {
                env,
                family,
                target: self.signal.target,
                learner,
                training: self.run.training,
                steps: self.run.steps,
                start: self.run.start,
            }),
            m => bail!("run.mode: unknown mode {m:?} (expected observer or sniffy)"),
        })
    }
}
