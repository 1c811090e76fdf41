//! The `verify` subcommand: invariant suites with a pass/fail table.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use uma::verify::{suites, VerifyConfig, SIMULATION_SUITES};

use crate::{Failure, Log};

pub fn run(quick: bool, seed: u64, out: &Path, skip: &[String], log: Log) -> Result<(), Failure> {
    let all = suites();
    if let Some(bad) = skip.iter().find(|s| !all.iter().any(|(n, _)| n == s)) {
        let names: Vec<&str> = all.iter().map(|(n, _)| *n).collect();
        return Err(anyhow::anyhow!("unknown suite {bad:?} (suites: {})", names.join(", ")).into());
    }
    let cfg = if quick { VerifyConfig::quick(seed) } else { VerifyConfig::full(seed) };
    log.info(format!("{} suite, seed {seed}", if quick { "quick" } else { "full" }));
    let mut dump = String::new();
    let mut failed = 0;
    for (name, suite) in all {
        if skip.iter().any(|s| s == name) {
            println!("SKIP {name}");
            continue;
        }
        if !cfg.simulations && SIMULATION_SUITES.contains(&name) {
            log.debug(format!("skipping {name}"));
            continue;
        }
        log.debug(format!("running {name}"));
        let o = suite(&cfg);
        println!("{o}");
        if !o.passed {
            failed += 1;
            for r in &o.failures {
                writeln!(dump, "{r}\n").expect("string write");
            }
        }
    }
    if failed == 0 {
        println!("verify: all suites pass");
        return Ok(());
    }
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let path = out.join("counterexamples.txt");
    fs::write(&path, dump).with_context(|| format!("cannot write {}", path.display()))?;
    println!("verify: {failed} suite(s) failed, counterexamples in {}", path.display());
    Err(Failure::Verification)
}
