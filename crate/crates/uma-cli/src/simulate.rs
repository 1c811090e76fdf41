//! The `simulate` subcommand: one CSV per batch, checkpoints for run 0 and
//! a summary line.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use uma::checkpoint::{encode_qual, encode_real};
use uma::sim::agent::{run_sniffy_with_agents, SniffyRun};
use uma::sim::observer::{run_observer_with_learner, ObserverRecord};
use uma::sim::Learner;

use crate::config::{Experiment, RunConfig};
use crate::{Failure, Log};

/// One CSV row; unused columns stay empty.
#[derive(Serialize)]
struct Row<'a> {
    run_id: u64,
    t: usize,
    mode: &'a str,
    pos: usize,
    target: usize,
    dist: usize,
    err_pcr: Option<f64>,
    err_closure: Option<f64>,
    action: Option<&'a str>,
    value: f64,
}

pub fn run(config: &Path, out: &Path, seed: Option<u64>, log: Log) -> std::result::Result<(), Failure> {
    let mut cfg = RunConfig::load(config)?;
    let seed = match seed.or(cfg.run.seed) {
        Some(s) => s,
        None => {
            let s = rand::random::<u64>();
            log.info(format!("no seed given, generated {s}"));
            s
        }
    };
    cfg.run.seed = Some(seed);
    let exp = cfg.experiment()?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let resolved = toml::to_string(&cfg).context("cannot serialize config")?;
    fs::write(out.join("config.toml"), resolved).context("cannot write resolved config")?;
    log.info(format!("{} batch of {} runs, seed {seed}, output {}", cfg.run.mode, cfg.run.batch, out.display()));
    match exp {
        Experiment::Observer(oc) => {
            let runs: Vec<(Vec<ObserverRecord>, Option<Learner>)> = (0..cfg.run.batch as u64)
                .into_par_iter()
                .map(|r| {
                    let (recs, learner) = run_observer_with_learner(&oc, seed, r)?;
                    Ok((recs, (r == 0).then_some(learner)))
                })
                .collect::<uma::Result<_>>()
                .context("observer run failed")?;
            let path = out.join("observer.csv");
            let mut w = csv::Writer::from_path(&path).with_context(|| format!("cannot write {}", path.display()))?;
            for (id, (recs, _)) in runs.iter().enumerate() {
                for r in recs {
                    w.serialize(Row {
                        run_id: id as u64,
                        t: r.t,
                        mode: "observer",
                        pos: r.pos,
                        target: r.target,
                        dist: r.dist,
                        err_pcr: Some(r.err_pcr),
                        err_closure: Some(r.err_closure),
                        action: None,
                        value: r.value,
                    })
                    .context("csv write failed")?;
                }
            }
            w.flush().context("csv flush failed")?;
            if let Some(l) = &runs[0].1 {
                write_checkpoint(&out.join("run0.umas"), l)?;
            }
            let last = |f: fn(&ObserverRecord) -> f64| -> Vec<f64> { runs.iter().map(|(r, _)| f(r.last().expect("records"))).collect() };
            let t = runs[0].0.last().map_or(0, |r| r.t);
            let (pm, ps) = mean_std(&last(|r| r.err_pcr));
            let (cm, cs) = mean_std(&last(|r| r.err_closure));
            println!("summary: observer runs={} t={t} err_pcr={pm:.4}±{ps:.4} err_closure={cm:.4}±{cs:.4}", runs.len());
        }
        Experiment::Sniffy(sc) => {
            let runs: Vec<(SniffyRun, Option<uma::sim::agent::Sniffy>)> = (0..cfg.run.batch as u64)
                .into_par_iter()
                .map(|r| {
                    let (run, agents) = run_sniffy_with_agents(&sc, seed, r)?;
                    Ok((run, (r == 0).then_some(agents)))
                })
                .collect::<uma::Result<_>>()
                .context("agent run failed")?;
            let path = out.join("sniffy.csv");
            let mut w = csv::Writer::from_path(&path).with_context(|| format!("cannot write {}", path.display()))?;
            for (id, (run, _)) in runs.iter().enumerate() {
                for r in &run.records {
                    w.serialize(Row {
                        run_id: id as u64,
                        t: r.t,
                        mode: "sniffy",
                        pos: r.pos,
                        target: run.target,
                        dist: r.dist,
                        err_pcr: None,
                        err_closure: None,
                        action: r.action.map(|m| m.as_str()),
                        value: r.value,
                    })
                    .context("csv write failed")?;
                }
            }
            w.flush().context("csv flush failed")?;
            if let Some(a) = &runs[0].1 {
                for (name, agent) in [("rt", &a.rt), ("lt", &a.lt)] {
                    write_checkpoint(&out.join(format!("run0_{name}_acted.umas")), agent.snapshot(true))?;
                    write_checkpoint(&out.join(format!("run0_{name}_idle.umas")), agent.snapshot(false))?;
                }
            }
            let d: Vec<f64> = runs.iter().map(|(r, _)| r.records.last().expect("records").dist as f64).collect();
            let (m, s) = mean_std(&d);
            let t = sc.training + sc.steps;
            println!("summary: sniffy runs={} t={t} dist={m:.4}±{s:.4}", runs.len());
        }
    }
    Ok(())
}

fn write_checkpoint(path: &Path, l: &Learner) -> Result<()> {
    let bytes = match l {
        Learner::Qual(s) => encode_qual(s),
        Learner::Real(s) => encode_real(s),
    };
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

/// Mean and sample standard deviation; the deviation of one value is 0.
fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (m, 0.0);
    }
    let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

#[cfg(test)]
mod tests {
    use super::mean_std;

    #[test]
    fn summary_statistics() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-12);
    }
}
