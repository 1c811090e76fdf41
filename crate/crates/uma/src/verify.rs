//! Verification suites shared by the `verify` command and the acceptance
//! tests. Each suite compares closed forms against brute force or checks a
//! statistical claim, and reports a pass flag, a one-line summary and any
//! reproducible counterexamples.

use std::fmt;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::geometry::{divergence, enumerate_dual, project_convex, project_point, DualSpace, DEFAULT_CAP};
use crate::oracle::{
    all_pairs, brute_dual, check_median_axioms, dual_adjacency, random_coherent, random_pcr, random_ranking,
    ranking_min_hull, MedianCheck, OracleReport,
};
use crate::pcr::Pcr;
use crate::pcs::{complement, LitSet, Sigma};
use crate::propagation::{coherent_projection, propagate_with_stats};
use crate::real::{chernoff_bound, RealSnapshot, Schedule};
use crate::sim::agent::{converged_agents, delayed_extend, extend_observation, run_sniffy, SniffyConfig};
use crate::sim::env::circ_dist;
use crate::sim::observer::{run_observer, ObserverConfig};
use crate::sim::{run_rng, EnvKind, EnvSpec, Environment, LearnerKind, LearnerSpec, Sampling, SignalFamily, ValueSignal};

/// Result of one suite.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub failures: Vec<OracleReport>,
    pub seconds: f64,
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<22} {} [{:.1}s]", self.name, self.summary, self.seconds)?;
        for r in self.failures.iter().take(3) {
            write!(f, "\n  {r}")?;
        }
        Ok(())
    }
}

/// Sample counts and seeds for every suite.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub propagation_instances: usize,
    pub propagation_max_pairs: usize,
    pub median_duals: usize,
    pub median_max_pairs: usize,
    pub helly_triples: usize,
    pub coherence_instances: usize,
    pub quotient_instances: usize,
    pub minset_rankings: usize,
    pub validity_updates: usize,
    pub chernoff_trials: usize,
    pub geometry_instances: usize,
    pub observer_runs: usize,
    pub observer_steps: usize,
    pub circle_runs: usize,
    pub sniffy_runs: usize,
    pub sniffy_training: usize,
    pub sniffy_steps: usize,
    /// Include the simulation batches.
    pub simulations: bool,
}

impl VerifyConfig {
    /// The acceptance scale.
    pub fn full(seed: u64) -> VerifyConfig {
        VerifyConfig {
            seed,
            propagation_instances: 500,
            propagation_max_pairs: 10,
            median_duals: 40,
            median_max_pairs: 8,
            helly_triples: 1000,
            coherence_instances: 1000,
            quotient_instances: 200,
            minset_rankings: 200,
            validity_updates: 10_000,
            chernoff_trials: 1000,
            geometry_instances: 300,
            observer_runs: 100,
            observer_steps: 10_000,
            circle_runs: 20,
            sniffy_runs: 100,
            sniffy_training: 2000,
            sniffy_steps: 500,
            simulations: true,
        }
    }

    /// A reduced suite that finishes in seconds.
    pub fn quick(seed: u64) -> VerifyConfig {
        VerifyConfig {
            propagation_instances: 60,
            propagation_max_pairs: 7,
            median_duals: 6,
            median_max_pairs: 6,
            helly_triples: 200,
            coherence_instances: 200,
            quotient_instances: 40,
            minset_rankings: 40,
            validity_updates: 2000,
            chernoff_trials: 100,
            geometry_instances: 40,
            simulations: false,
            ..VerifyConfig::full(seed)
        }
    }
}

fn outcome(name: &'static str, start: Instant, checks: usize, failures: Vec<OracleReport>) -> SuiteOutcome {
    let passed = failures.is_empty();
    let summary = format!("{checks} checks, {} mismatches", failures.len());
    SuiteOutcome { name, passed, summary, failures, seconds: start.elapsed().as_secs_f64() }
}

fn fail(case: String, formula: String, brute: String, input: String, seed: u64) -> OracleReport {
    OracleReport { case, formula, brute, matched: false, counterexample: Some(input), seed: Some(seed), checks: 0 }
}

fn show(s: &Sigma, x: &LitSet) -> String {
    s.format_set(x)
}

/// A random non-degenerate PCR of random size and density.
fn instance_pcr<R: Rng>(min_pairs: usize, max_pairs: usize, rng: &mut R) -> Pcr {
    let n = rng.gen_range(min_pairs..=max_pairs);
    // About 0.1 to 1.5 relations per pair, whatever the alphabet size.
    let slots = (4 * n * n.saturating_sub(1)).max(1) as f64;
    let density = (rng.gen_range(0.1..1.5) * n as f64 / slots).min(1.0);
    random_pcr(n, density, rng)
}

/// A random literal set: coherent half the time, arbitrary otherwise.
fn instance_load<R: Rng>(p: &Pcr, rng: &mut R) -> LitSet {
    if rng.gen_bool(0.5) {
        random_coherent(p, 0.3, rng)
    } else {
        let s = p.sigma();
        s.set(s.proper_lits().filter(|_| rng.gen_bool(0.1)))
    }
}

/// Pointwise BFS projection of every vertex of `from` onto `onto`.
fn bfs_projection_set(dual: &DualSpace, adj: &[Vec<usize>], from: &BitSet, onto: &BitSet) -> Option<BitSet> {
    let mut image = dual.empty_vertex_set();
    for u in from.iter() {
        let d = crate::oracle::bfs(adj, u);
        let best = onto.iter().map(|k| d[k]).min()?;
        let mut arg = onto.iter().filter(|&k| d[k] == best);
        let first = arg.next()?;
        if arg.next().is_some() {
            return None;
        }
        image.insert(first);
    }
    Some(image)
}

/// `⟨propagate(T, S)⟩` equals the set of BFS projections of `⟨S⟩` onto
/// `⟨coh(T)⟩`, and the search visits at most `2|G|` generating pairs.
pub fn suite_propagation(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let seed = cfg.seed;
    let failures: Vec<OracleReport> = (0..cfg.propagation_instances)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = run_rng(seed, i as u64);
            let p = instance_pcr(2, cfg.propagation_max_pairs, &mut rng);
            let s = random_coherent(&p, 0.5, &mut rng);
            let t = instance_load(&p, &mut rng);
            let sg = p.sigma();
            let case = format!("propagation #{i}");
            let input = format!("G={:?} S={} T={}", p.informative_pairs(), show(sg, &s), show(sg, &t));
            let dual = enumerate_dual(&p, DEFAULT_CAP).ok()?;
            let adj = dual_adjacency(&dual);
            let (r, stats) = match propagate_with_stats(&p, &s, &t) {
                Ok(x) => x,
                Err(e) => return Some(fail(case, e.to_string(), "defined".into(), input, seed)),
            };
            if stats.edges_visited > 2 * p.relation_count() {
                return Some(fail(case, format!("{} edges", stats.edges_visited), format!("<= {}", 2 * p.relation_count()), input, seed));
            }
            let onto = dual.halfspace(&coherent_projection(&p, &t));
            let brute = match bfs_projection_set(&dual, &adj, &dual.halfspace(&s), &onto) {
                Some(b) => b,
                None => return Some(fail(case, "unique projections".into(), "tie or empty target".into(), input, seed)),
            };
            let formula = dual.halfspace(&r);
            (formula != brute).then(|| fail(case, format!("{:?}", formula.iter().collect::<Vec<_>>()), format!("{:?}", brute.iter().collect::<Vec<_>>()), input, seed))
        })
        .collect();
    outcome("propagation", start, cfg.propagation_instances, failures)
}

/// Median-graph axioms exhaustively on small duals, plus sampled Helly
/// checks on halfspace triples.
pub fn suite_median_helly(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let seed = cfg.seed;
    let mc = |i: usize| MedianCheck { exhaustive_limit: usize::MAX, samples: 0, convex_sets: 4, seed: seed ^ i as u64 };
    let mut pcrs = vec![Pcr::new_orthogonal(Sigma::new(cfg.median_max_pairs))];
    let mut rng = run_rng(seed, 0);
    for _ in 1..cfg.median_duals {
        pcrs.push(instance_pcr(2, cfg.median_max_pairs, &mut rng));
    }
    let mut checks = 0;
    let mut failures = Vec::new();
    let reports: Vec<OracleReport> = pcrs
        .par_iter()
        .enumerate()
        .map(|(i, p)| match enumerate_dual(p, DEFAULT_CAP) {
            Ok(d) => check_median_axioms(&d, &mc(i)),
            Err(e) => fail(format!("median #{i}"), e.to_string(), "dual".into(), format!("{:?}", p.informative_pairs()), seed),
        })
        .collect();
    for r in reports {
        checks += r.checks;
        if !r.matched {
            failures.push(r);
        }
    }
    // Helly: pairwise-meeting halfspaces have a common vertex, and two
    // halfspaces meet exactly when their literals form a coherent pair.
    let mut done = 0;
    while done < cfg.helly_triples {
        let p = instance_pcr(2, cfg.median_max_pairs, &mut rng);
        let d = enumerate_dual(&p, DEFAULT_CAP).expect("non-degenerate");
        let sg = p.sigma();
        for _ in 0..50 {
            let lits: Vec<usize> = (0..3).map(|_| rng.gen_range(sg.proper_lits())).collect();
            let hs: Vec<BitSet> = lits.iter().map(|&a| d.halfspace(&sg.set([a]))).collect();
            let mut ok = true;
            for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                let meet = !hs[x].is_disjoint(&hs[y]);
                if meet != p.is_coherent(&sg.set([lits[x], lits[y]])) {
                    ok = false;
                }
            }
            let pairwise = !hs[0].is_disjoint(&hs[1]) && !hs[0].is_disjoint(&hs[2]) && !hs[1].is_disjoint(&hs[2]);
            let triple = hs[0].intersection(&hs[1]).intersection(&hs[2]);
            if pairwise && triple.is_empty() {
                ok = false;
            }
            done += 1;
            checks += 1;
            if !ok {
                failures.push(fail("helly".into(), "common vertex".into(), "none".into(), format!("G={:?} lits={lits:?}", p.informative_pairs()), seed));
            }
        }
    }
    outcome("median-helly", start, checks, failures)
}

/// Laws of the coherent projection, and containment of `coh(A)` in every
/// vertex nearest to a complete observation `A`.
pub fn suite_coherence(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let seed = cfg.seed;
    let failures: Vec<OracleReport> = (0..cfg.coherence_instances)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = run_rng(seed, i as u64);
            let p = instance_pcr(1, 8, &mut rng);
            let sg = p.sigma();
            let a = if rng.gen_bool(0.5) {
                sg.selection_from_mask(rng.gen_range(0..1u64 << sg.n_pairs()))
            } else {
                instance_load(&p, &mut rng)
            };
            let c = coherent_projection(&p, &a);
            let case = format!("coherence #{i}");
            let input = format!("G={:?} A={}", p.informative_pairs(), show(sg, &a));
            let bad = |law: &str| Some(fail(case.clone(), law.into(), show(sg, &c), input.clone(), seed));
            if !p.is_coherent(&c) || !p.is_forward_closed(&c) {
                return bad("coh(A) in C(G)");
            }
            if coherent_projection(&p, &c) != c {
                return bad("idempotent");
            }
            if p.is_coherent(&a) && !a.is_subset(&c) {
                return bad("A coherent implies A in coh(A)");
            }
            if (c == a) != p.is_coherent_closed(&a) {
                return bad("fixed points are C(G)");
            }
            if sg.is_complete(&a) {
                let verts = brute_dual(&p);
                let best = verts.iter().map(|v| a.difference_count(v)).min()?;
                if let Some(v) = verts.iter().find(|v| a.difference_count(v) == best && !c.is_subset(v)) {
                    return Some(fail(case, "coh(A) inside nearest vertex".into(), show(sg, v), input, seed));
                }
            }
            None
        })
        .collect();
    outcome("coherence", start, cfg.coherence_instances, failures)
}

/// A random PCR with some forced equivalences, so that quotients are proper.
fn pcr_with_classes<R: Rng>(rng: &mut R) -> Pcr {
    loop {
        let p = instance_pcr(2, 8, rng);
        let sg = p.sigma().clone();
        let mut pairs = p.informative_pairs();
        for _ in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(sg.proper_lits());
            let b = rng.gen_range(sg.proper_lits());
            if crate::pcr::disjoint_pairs(a, b) {
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
        let q = Pcr::from_pairs(sg, pairs);
        if !q.is_degenerate() {
            return q;
        }
    }
}

/// The dual of a PCR and of its canonical quotient correspond bijectively.
pub fn suite_quotient(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let seed = cfg.seed;
    let failures: Vec<OracleReport> = (0..cfg.quotient_instances)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = run_rng(seed, i as u64);
            let p = pcr_with_classes(&mut rng);
            let q = p.canonical_quotient().ok()?;
            let case = format!("quotient #{i}");
            let input = format!("G={:?}", p.informative_pairs());
            let dg = brute_dual(&p);
            let dq = brute_dual(&q.quotient_pcr);
            if dg.len() != dq.len() {
                return Some(fail(case, format!("|dual G|={}", dg.len()), format!("|dual Q|={}", dq.len()), input, seed));
            }
            let mut images = std::collections::BTreeSet::new();
            for u in &dg {
                let pu = q.project(u);
                if !dq.contains(&pu) || q.lift(&pu) != *u {
                    return Some(fail(case, "project is a vertex and lifts back".into(), show(p.sigma(), u), input, seed));
                }
                images.insert(pu);
            }
            (images.len() != dq.len()).then(|| fail(case, "bijection".into(), format!("{} images", images.len()), input, seed))
        })
        .collect();
    outcome("quotient-duality", start, cfg.quotient_instances, failures)
}

/// Global minima of the completion form the minset halfspace.
pub fn suite_minset(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let seed = cfg.seed;
    let failures: Vec<OracleReport> = (0..cfg.minset_rankings)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = run_rng(seed, i as u64);
            let n = rng.gen_range(1..=6);
            let k = random_ranking(n, rng.gen_range(1..=4), rng.gen_range(0.0..0.6), &mut rng);
            let mut r = ranking_min_hull(&k);
            r.seed = Some(seed);
            (!r.matched).then_some(r)
        })
        .collect();
    outcome("minset-plateau", start, cfg.minset_rankings, failures)
}

/// Validity conditions survive long runs of discounted updates.
pub fn suite_validity(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let seed = cfg.seed;
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut checks = 0;
    for (j, q) in [0.9, 0.99, 0.999].into_iter().enumerate() {
        let mut rng = run_rng(seed, j as u64);
        let s = Sigma::new(6);
        let mut w = RealSnapshot::new(s.clone(), Schedule::Fixed(q), 0.05).expect("valid tau");
        for t in 0..cfg.validity_updates {
            let u = s.selection_from_mask(rng.gen_range(0..64));
            let v = rng.gen_range(1.0..50.0);
            w.update(&u, v).expect("finite value");
            if t % 500 == 499 || t + 1 == cfg.validity_updates {
                checks += 1;
                let rep = w.validate(1e-9);
                worst = rep.residuals.iter().copied().fold(worst, f64::max);
                if !rep.is_valid() {
                    failures.push(fail(format!("validity q={q}"), format!("{:?}", rep.violations), "none".into(), format!("after {} updates", t + 1), seed));
                    break;
                }
            }
        }
    }
    let mut o = outcome("weight-validity", start, checks, failures);
    o.summary.push_str(&format!(", worst residual {worst:.2e}"));
    o
}

/// Deviation frequencies of empirical weights stay below the concentration
/// bound.
pub fn suite_chernoff(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let seed = cfg.seed;
    let env = Environment::interval_gps(6);
    let sg = env.sigma().clone();
    // (deviation as a fraction of the range, signal, literal pair)
    let settings = [
        (0.10, SignalFamily::RealDull, (sg.pos(1), sg.pos(3))),
        (0.15, SignalFamily::RealSharp, (sg.pos(2), sg.pos(4))),
        (0.08, SignalFamily::RealDull, (sg.neg(0), sg.pos(5))),
    ];
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for (si, &(frac, family, (a, b))) in settings.iter().enumerate() {
        let sig = ValueSignal { family, target: 2 };
        let n_pos = env.n_positions();
        let vals: Vec<f64> = (0..n_pos).map(|p| sig.value(&env, p)).collect();
        let cap = vals.iter().copied().fold(0.0, f64::max);
        let x = |p: usize| if env.sense(p).contains(a) && env.sense(p).contains(b) { vals[p] } else { 0.0 };
        let mean = (0..n_pos).map(x).sum::<f64>() / n_pos as f64;
        let delta = frac * cap;
        for n in [50u64, 100, 200] {
            let hits: usize = (0..cfg.chernoff_trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = run_rng(seed ^ (si as u64) << 32 ^ n << 16, trial as u64);
                    let mut w = RealSnapshot::new(sg.clone(), Schedule::Empirical, 0.1).expect("valid tau");
                    for _ in 0..n {
                        let p = env.iid_step(&mut rng);
                        w.update(env.sense(p), vals[p]).expect("finite value");
                    }
                    usize::from((w.get(a, b) - mean).abs() >= delta)
                })
                .sum();
            let freq = hits as f64 / cfg.chernoff_trials as f64;
            let bound = chernoff_bound(n - 1, delta, mean / cap, cap).expect("valid parameters");
            lines.push(format!("{freq:.3}<={bound:.3}"));
            if freq > bound {
                failures.push(fail(format!("chernoff setting {si} t+1={n}"), format!("bound {bound:.4}"), format!("freq {freq:.4}"), format!("delta={delta} pair=({a},{b})"), seed));
            }
        }
    }
    let mut o = outcome("chernoff", start, 9, failures);
    o.summary = format!("{} ({})", o.summary, lines.join(" "));
    o
}

/// Closed-form geometry (nearest point, convex projection, divergence bound,
/// geodesics, hulls, distances) against brute force on the dual graph.
pub fn suite_geometry(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let seed = cfg.seed;
    let failures: Vec<OracleReport> = (0..cfg.geometry_instances)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = run_rng(seed, i as u64);
            let p = instance_pcr(1, 7, &mut rng);
            let sg = p.sigma();
            let d = enumerate_dual(&p, DEFAULT_CAP).ok()?;
            let adj = dual_adjacency(&d);
            let hops = all_pairs(&adj);
            let s = random_coherent(&p, 0.4, &mut rng);
            let t = random_coherent(&p, 0.4, &mut rng);
            let case = format!("geometry #{i}");
            let input = format!("G={:?} S={} T={}", p.informative_pairs(), show(sg, &s), show(sg, &t));
            let bad = |what: &str, got: String| Some(fail(case.clone(), what.into(), got, input.clone(), seed));
            let ht = d.halfspace(&t);
            let hs = d.halfspace(&s);
            // Hop distance equals the quotient Hamming distance.
            for u in 0..d.len() {
                for v in 0..d.len() {
                    if hops[u][v] != d.distance(d.vertex(u), d.vertex(v)) {
                        return bad("hop = quotient distance", format!("{u},{v}"));
                    }
                }
            }
            // Nearest point of ⟨T⟩.
            let u = rng.gen_range(0..d.len());
            let pp = project_point(&p, d.vertex(u), &t).ok()?;
            let best = ht.iter().map(|k| hops[u][k]).min()?;
            let near: Vec<usize> = ht.iter().filter(|&k| hops[u][k] == best).collect();
            if near.len() != 1 || *d.vertex(near[0]) != pp {
                return bad("project_point", show(sg, &pp));
            }
            // Geodesic into ⟨T⟩ has the hop length of the projection.
            match d.geodesic_to(d.vertex(u), &t) {
                Ok(path) if path.len() == best + 1 && t.is_subset(path.last()?) => {}
                _ => return bad("geodesic", format!("len {best}")),
            }
            // Convex projection of ⟨S⟩ onto ⟨coh(T)⟩.
            let image = bfs_projection_set(&d, &adj, &hs, &ht)?;
            if d.halfspace(&project_convex(&p, &s, &t).ok()?) != image {
                return bad("project_convex", format!("{:?}", image.iter().collect::<Vec<_>>()));
            }
            // Divergence bounds the distance from ⟨↑S⟩ to ⟨↑T⟩.
            let (us, ut) = (p.up_closure(&s), p.up_closure(&t));
            let div = divergence(&p, &us, &ut).ok()?;
            for x in d.halfspace(&us).iter() {
                let dist = d.halfspace(&ut).iter().map(|k| hops[x][k]).min()?;
                if dist > div {
                    return bad("divergence bound", format!("{dist} > {div}"));
                }
            }
            // Hull of two vertices is their geodesic interval.
            let (a, b) = (rng.gen_range(0..d.len()), rng.gen_range(0..d.len()));
            let hull = d.convex_hull(&BitSet::from_indices(d.len(), [a, b])).ok()?;
            let interval = BitSet::from_indices(d.len(), (0..d.len()).filter(|&w| hops[a][w] + hops[w][b] == hops[a][b]));
            if hull != interval || d.interval(d.vertex(a), d.vertex(b)) != interval {
                return bad("hull = interval", format!("{a},{b}"));
            }
            // Separator size is the gate distance between disjoint hulls.
            let sep = d.separator(&BitSet::from_indices(d.len(), [a]), &BitSet::from_indices(d.len(), [b])).ok()?;
            if sep.iter().filter(|&x| d.quotient().coordinates().iter().any(|&c| c == x || complement(c) == x)).count() != hops[a][b] {
                return bad("separator", show(sg, &sep));
            }
            None
        })
        .collect();
    outcome("geometry", start, cfg.geometry_instances, failures)
}

/// Divergences and decision regions of converged dull-peak circle agents with
/// target 0, indexed by position `k`.
#[derive(Clone, Debug)]
pub struct CircleFixture {
    /// `(d(P^lt), d(P^lt*), d(P^rt), d(P^rt*))` per position.
    pub divergences: Vec<[usize; 4]>,
    pub lt_active: Vec<usize>,
    pub rt_active: Vec<usize>,
}

/// Builds the circle fixture at `N = 20`, radius 4.
pub fn circle_fixture() -> CircleFixture {
    let env = Environment::circle(20, None);
    let sig = ValueSignal { family: SignalFamily::QualDull, target: 0 };
    let spec = LearnerSpec::new(LearnerKind::Qualitative, 20);
    let mut s = converged_agents(&env, &sig, &spec).expect("qualitative signal");
    let ext = delayed_extend(env.sigma());
    let mut out = CircleFixture { divergences: Vec::new(), lt_active: Vec::new(), rt_active: Vec::new() };
    for k in 0..20 {
        let obs = extend_observation(&ext, env.sense(k), env.sense(k));
        let d = [s.lt.divergence(true, &obs), s.lt.divergence(false, &obs), s.rt.divergence(true, &obs), s.rt.divergence(false, &obs)];
        if d[0] < d[1] {
            out.lt_active.push(k);
        }
        if d[2] < d[3] {
            out.rt_active.push(k);
        }
        out.divergences.push(d);
    }
    out
}

/// Closed-form divergences `4·min{9, dist(±1, k)}` and the decision regions
/// `lt` active iff `k ∈ {1..11}`, `rt` active iff `k ∈ {9..19}`.
pub fn suite_circle_fixture(_cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let f = circle_fixture();
    let mut failures = Vec::new();
    for (k, d) in f.divergences.iter().enumerate() {
        let lt = 4 * circ_dist(20, 1, k).min(9);
        let rt = 4 * circ_dist(20, 19, k).min(9);
        if d[0] != lt || d[2] != rt {
            failures.push(fail(format!("circle divergences k={k}"), format!("lt {lt} rt {rt}"), format!("lt {} rt {}", d[0], d[2]), String::new(), 0));
        }
    }
    let div_ok = failures.is_empty();
    let want_lt: Vec<usize> = (1..=11).collect();
    let want_rt: Vec<usize> = (9..=19).collect();
    let regions_ok = f.lt_active == want_lt && f.rt_active == want_rt;
    if !regions_ok {
        failures.push(fail(
            "circle decision regions".into(),
            format!("lt {want_lt:?} rt {want_rt:?}"),
            format!("lt {:?} rt {:?}", f.lt_active, f.rt_active),
            format!("idle divergences lt* {:?}", f.divergences.iter().map(|d| d[1]).collect::<Vec<_>>()),
            0,
        ));
    }
    let summary = format!(
        "divergences {}, regions {} (lt active {:?})",
        if div_ok { "match" } else { "differ" },
        if regions_ok { "match" } else { "differ" },
        f.lt_active
    );
    SuiteOutcome { name: "circle-fixture", passed: failures.is_empty(), summary, failures, seconds: start.elapsed().as_secs_f64() }
}

/// The six learner variants on the interval.
pub fn interval_variants() -> [(LearnerKind, SignalFamily); 6] {
    [
        (LearnerKind::Empirical, SignalFamily::RealDull),
        (LearnerKind::Empirical, SignalFamily::RealSharp),
        (LearnerKind::Discounted(0.999), SignalFamily::RealDull),
        (LearnerKind::Discounted(0.999), SignalFamily::RealSharp),
        (LearnerKind::Qualitative, SignalFamily::QualDull),
        (LearnerKind::Qualitative, SignalFamily::QualSharp),
    ]
}

fn observer_finals(cfg: &ObserverConfig, seed: u64, runs: usize) -> Vec<(f64, f64)> {
    (0..runs)
        .into_par_iter()
        .map(|r| {
            let recs = run_observer(cfg, seed, r as u64).expect("valid observer config");
            let last = recs.last().expect("at least one record");
            (last.err_pcr, last.err_closure)
        })
        .collect()
}

/// Every interval variant reaches zero error within the step budget in at
/// least 95% of runs.
pub fn suite_interval_convergence(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (kind, family) in interval_variants() {
        let oc = ObserverConfig {
            env: EnvSpec::new(EnvKind::IntervalGps, 20),
            family,
            target: None,
            learner: LearnerSpec::new(kind, 20),
            sampling: Sampling::Iid,
            steps: cfg.observer_steps,
            record_every: cfg.observer_steps,
        };
        let finals = observer_finals(&oc, cfg.seed, cfg.observer_runs);
        let ok = finals.iter().filter(|&&(p, c)| p == 0.0 && c == 0.0).count();
        parts.push(format!("{ok}"));
        if ok * 100 < 95 * cfg.observer_runs {
            failures.push(fail(format!("interval {kind:?} {family:?}"), ">= 95%".into(), format!("{ok}/{}", cfg.observer_runs), String::new(), cfg.seed));
        }
    }
    let summary = format!("runs at zero error per variant: {}/{}", parts.join(","), cfg.observer_runs);
    SuiteOutcome { name: "interval-convergence", passed: failures.is_empty(), summary, failures, seconds: start.elapsed().as_secs_f64() }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len().max(1) as f64
}

fn stderr(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let n = xs.len() as f64;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)).sqrt() / n.sqrt()
}

/// On the circle, dull-peak closure error vanishes while sharp-peak closure
/// error stays positive.
pub fn suite_circle_discrepancy(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let run = |family| {
        let oc = ObserverConfig {
            env: EnvSpec::new(EnvKind::CircleBeacons, 20),
            family,
            target: None,
            learner: LearnerSpec::new(LearnerKind::Qualitative, 20),
            sampling: Sampling::Iid,
            steps: cfg.observer_steps,
            record_every: cfg.observer_steps,
        };
        let f = observer_finals(&oc, cfg.seed, cfg.circle_runs);
        (mean(&f.iter().map(|x| x.0).collect::<Vec<_>>()), mean(&f.iter().map(|x| x.1).collect::<Vec<_>>()))
    };
    let (dull_pcr, dull) = run(SignalFamily::QualDull);
    let (sharp_pcr, sharp) = run(SignalFamily::QualSharp);
    let passed = dull == 0.0 && sharp > 0.0;
    let summary = format!("closure error dull {dull:.4} sharp {sharp:.4} (pcr error dull {dull_pcr:.4} sharp {sharp_pcr:.4})");
    let failures = if passed {
        Vec::new()
    } else {
        vec![fail("circle discrepancy".into(), "dull = 0 < sharp".into(), summary.clone(), String::new(), cfg.seed)]
    };
    SuiteOutcome { name: "circle-discrepancy", passed, summary, failures, seconds: start.elapsed().as_secs_f64() }
}

fn sniffy_config(cfg: &VerifyConfig, kind: EnvKind) -> SniffyConfig {
    SniffyConfig {
        env: EnvSpec::new(kind, 20),
        family: SignalFamily::QualDull,
        target: None,
        learner: LearnerSpec::new(LearnerKind::Qualitative, 20),
        training: cfg.sniffy_training,
        steps: cfg.sniffy_steps,
        start: None,
    }
}

/// Qualitative dull-peak agents on the interval end within mean distance 1.
pub fn suite_sniffy_interval(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let sc = sniffy_config(cfg, EnvKind::IntervalGps);
    let dists: Vec<f64> = (0..cfg.sniffy_runs)
        .into_par_iter()
        .map(|r| run_sniffy(&sc, cfg.seed, r as u64).expect("valid config").records.last().expect("records").dist as f64)
        .collect();
    let m = mean(&dists);
    let at_target = dists.iter().filter(|&&d| d == 0.0).count();
    let passed = m < 1.0;
    let summary = format!("mean final distance {m:.3} (std err {:.3}, {at_target}/{} at target)", stderr(&dists), dists.len());
    let failures = if passed { Vec::new() } else { vec![fail("sniffy interval".into(), "< 1".into(), format!("{m:.3}"), String::new(), cfg.seed)] };
    SuiteOutcome { name: "sniffy-interval", passed, summary, failures, seconds: start.elapsed().as_secs_f64() }
}

/// On the circle most runs end nearer the target than its antipode, and runs
/// started at the antipode show no systematic drift.
pub fn suite_sniffy_antipode(cfg: &VerifyConfig) -> SuiteOutcome {
    let start = Instant::now();
    let sc = sniffy_config(cfg, EnvKind::CircleBeacons);
    let nearer = (0..cfg.sniffy_runs)
        .into_par_iter()
        .filter(|&r| {
            let run = run_sniffy(&sc, cfg.seed, r as u64).expect("valid config");
            let d = run.records.last().expect("records").dist;
            d < 10 - d
        })
        .count();
    let frac = nearer as f64 / cfg.sniffy_runs as f64;
    let anti = SniffyConfig { target: Some(0), start: Some(10), ..sc };
    let disp: Vec<f64> = (0..cfg.sniffy_runs)
        .into_par_iter()
        .map(|r| run_sniffy(&anti, cfg.seed, r as u64).expect("valid config").displacement as f64)
        .collect();
    let (m, se) = (mean(&disp), stderr(&disp));
    let passed = frac > 0.5 && m.abs() <= 2.0 * se;
    let summary = format!("nearer-than-antipode {frac:.2}, antipode drift {m:.2} ± {se:.2}");
    let failures = if passed { Vec::new() } else { vec![fail("sniffy antipode".into(), "frac > 0.5, |drift| <= 2se".into(), summary.clone(), String::new(), cfg.seed)] };
    SuiteOutcome { name: "sniffy-antipode", passed, summary, failures, seconds: start.elapsed().as_secs_f64() }
}

/// A named suite runner.
pub type Suite = (&'static str, fn(&VerifyConfig) -> SuiteOutcome);

/// Every suite, in reporting order. Simulation batches come last.
pub fn suites() -> Vec<Suite> {
    vec![
        ("propagation", suite_propagation),
        ("median-helly", suite_median_helly),
        ("coherence", suite_coherence),
        ("quotient-duality", suite_quotient),
        ("minset-plateau", suite_minset),
        ("weight-validity", suite_validity),
        ("chernoff", suite_chernoff),
        ("geometry", suite_geometry),
        ("circle-fixture", suite_circle_fixture),
        ("interval-convergence", suite_interval_convergence),
        ("circle-discrepancy", suite_circle_discrepancy),
        ("sniffy-interval", suite_sniffy_interval),
        ("sniffy-antipode", suite_sniffy_antipode),
    ]
}

/// Names of the simulation suites, skipped when `simulations` is off.
pub const SIMULATION_SUITES: [&str; 4] = ["interval-convergence", "circle-discrepancy", "sniffy-interval", "sniffy-antipode"];

/// Runs every applicable suite.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteOutcome> {
    suites()
        .into_iter()
        .filter(|(name, _)| cfg.simulations || !SIMULATION_SUITES.contains(name))
        .map(|(_, f)| f(cfg))
        .collect()
}
