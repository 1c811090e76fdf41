//! The `inspect` subcommand: a textual report on a snapshot checkpoint.

use std::path::Path;

use anyhow::Context;
use uma::checkpoint::{decode, Checkpoint};
use uma::geometry::{enumerate_dual, DEFAULT_CAP};
use uma::{Pcr, Rank};

use crate::Failure;

pub fn run(path: &Path, tau: f64, delta: u32, dual: bool) -> Result<(), Failure> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let ck = decode(&bytes, None, tau).with_context(|| format!("corrupt checkpoint {}", path.display()))?;
    let (kind, pcr, minset) = match ck {
        Checkpoint::Qual(s) => {
            let s = s.with_delta(Rank::fin(delta));
            let kind = if s.is_initialized() { format!("qualitative, delta {delta}") } else { "qualitative, fresh".into() };
            (kind, s.derived_pcr(), s.minset(Rank::ZERO))
        }
        Checkpoint::Real(s) => {
            let p = s.derived_pcr().unwrap_or_else(|_| Pcr::new_orthogonal(s.sigma().clone()));
            (format!("real, tau {tau}"), p, s.minset())
        }
    };
    print!("{}", report(&kind, &pcr, &minset, dual));
    Ok(())
}

/// Formats the report; separate from I/O for testing.
pub fn report(kind: &str, pcr: &Pcr, minset: &uma::LitSet, dual: bool) -> String {
    let s = pcr.sigma();
    let mut out = format!("snapshot: {kind}, {} queries\n", s.n_pairs());
    let rel = pcr.informative_pairs();
    out.push_str(&format!("relations: {}\n", rel.len()));
    for (a, b) in rel {
        out.push_str(&format!("  {} -> {}\n", s.name(a), s.name(b)));
    }
    out.push_str(&format!("negligible: {}\n", s.format_set(&pcr.negligibles())));
    out.push_str(&format!("minset: {}\n", s.format_set(minset)));
    match pcr.canonical_quotient() {
        Ok(q) => out.push_str(&format!("quotient classes: {} ({} proper pairs)\n", q.classes.len(), q.quotient_pcr.sigma().n_pairs())),
        Err(e) => out.push_str(&format!("quotient: {e}\n")),
    }
    if dual {
        match enumerate_dual(pcr, DEFAULT_CAP) {
            Ok(d) => out.push_str(&format!("dual vertices: {}\n", d.len())),
            Err(e) => out.push_str(&format!("dual: {e}\n")),
        }
    }
    out
}
