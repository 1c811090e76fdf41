//! Property tests for qualitative and real snapshots and their checkpoints.

mod common;

use common::*;
use proptest::prelude::*;
use uma::checkpoint::{decode, encode_qual, encode_real, Checkpoint};
use uma::{complement, QualSnapshot, Rank, RealSnapshot, RealSnapshotF32, Schedule, Sigma};

/// Observations as (mask, value) pairs over `n` queries.
fn arb_updates(max_pairs: usize, max_value: u32, len: usize) -> impl Strategy<Value = (usize, Vec<(u64, u32)>)> {
    (1..=max_pairs).prop_flat_map(move |n| (Just(n), prop::collection::vec((0..1u64 << n, 0..=max_value), 1..=len)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn qualitative_weights_are_pairwise_minima((n, ups) in arb_updates(5, 6, 20)) {
        let s = Sigma::new(n);
        let mut q = QualSnapshot::new(s.clone());
        for &(m, v) in &ups {
            q.update(&s.selection_from_mask(m), Rank::fin(v)).unwrap();
        }
        for a in s.lits() {
            for b in s.lits() {
                let want = ups
                    .iter()
                    .filter(|(m, _)| {
                        let u = s.selection_from_mask(*m);
                        u.contains(a) && u.contains(b)
                    })
                    .map(|&(_, v)| Rank::fin(v))
                    .min()
                    .unwrap_or(Rank::INF);
                prop_assert_eq!(q.get(a, b), want);
            }
        }
        prop_assert!(q.validate().is_empty());
    }

    #[test]
    fn qualitative_updates_commute((n, ups) in arb_updates(4, 6, 12)) {
        let s = Sigma::new(n);
        let feed = |order: &mut dyn Iterator<Item = &(u64, u32)>| {
            let mut q = QualSnapshot::new(s.clone());
            for &(m, v) in order {
                q.update(&s.selection_from_mask(m), Rank::fin(v)).unwrap();
            }
            q
        };
        prop_assert_eq!(feed(&mut ups.iter()), feed(&mut ups.iter().rev()));
    }

    #[test]
    fn minset_contains_every_best_observation((n, ups) in arb_updates(5, 4, 16)) {
        let s = Sigma::new(n);
        let mut q = QualSnapshot::new(s.clone());
        for &(m, v) in &ups {
            q.update(&s.selection_from_mask(m), Rank::fin(v)).unwrap();
        }
        let g = q.derived_pcr();
        let mset = q.minset(Rank::ZERO);
        prop_assert!(g.is_coherent(&mset));
        prop_assert_eq!(g.up_closure(&mset), mset.clone());
        let vs = naive_vertices(&g);
        let best = ups.iter().map(|u| u.1).min().unwrap();
        for &(m, v) in &ups {
            let u = s.selection_from_mask(m);
            if v == best {
                prop_assert!(vs.contains(&u), "best world outside the derived dual");
                prop_assert!(mset.is_subset(&u));
            }
        }
    }

    #[test]
    fn empirical_weights_are_plain_averages((n, ups) in arb_updates(4, 9, 30)) {
        let s = Sigma::new(n);
        let mut w = RealSnapshot::<f64>::new(s.clone(), Schedule::Empirical, 0.1).unwrap();
        for &(m, v) in &ups {
            w.update(&s.selection_from_mask(m), f64::from(v + 1)).unwrap();
        }
        let k = ups.len() as f64;
        for a in s.lits() {
            for b in s.lits() {
                let sum: f64 = ups
                    .iter()
                    .filter(|(m, _)| {
                        let u = s.selection_from_mask(*m);
                        u.contains(a) && u.contains(b)
                    })
                    .map(|&(_, v)| f64::from(v + 1))
                    .sum();
                prop_assert!((w.get(a, b) - sum / k).abs() <= 1e-9 * (1.0 + sum));
            }
        }
    }

    #[test]
    fn discounted_updates_stay_valid((n, ups) in arb_updates(4, 50, 200), q in 0.5f64..1.0) {
        let s = Sigma::new(n);
        let mut w = RealSnapshot::<f64>::new(s.clone(), Schedule::Fixed(q), 0.1).unwrap();
        for &(m, v) in &ups {
            w.update(&s.selection_from_mask(m), f64::from(v + 1)).unwrap();
        }
        let report = w.validate(1e-9);
        prop_assert!(report.is_valid(), "{:?}", report);
        for a in s.lits() {
            prop_assert!(w.get(a, complement(a)) == 0.0);
        }
    }

    #[test]
    fn checkpoints_round_trip((n, ups) in arb_updates(4, 9, 20)) {
        let s = Sigma::new(n);
        let mut q = QualSnapshot::new(s.clone());
        let mut r = RealSnapshot::<f64>::new(s.clone(), Schedule::Empirical, 0.1).unwrap();
        let mut r32 = RealSnapshotF32::new(s.clone(), Schedule::Empirical, 0.1).unwrap();
        for &(m, v) in &ups {
            let u = s.selection_from_mask(m);
            q.update(&u, Rank::fin(v)).unwrap();
            r.update(&u, f64::from(v + 1)).unwrap();
            r32.update(&u, (v + 1) as f32).unwrap();
        }
        match decode(&encode_qual(&q), Some(s.clone()), 0.1).unwrap() {
            Checkpoint::Qual(d) => prop_assert_eq!(d, q),
            Checkpoint::Real(_) => prop_assert!(false, "wrong kind"),
        }
        match decode(&encode_real(&r), None, 0.1).unwrap() {
            Checkpoint::Real(d) => prop_assert_eq!(d.matrix(), r.matrix()),
            Checkpoint::Qual(_) => prop_assert!(false, "wrong kind"),
        }
        match decode(&encode_real(&r32), None, 0.1).unwrap() {
            Checkpoint::Real(d) => {
                let want: Vec<f64> = r32.matrix().iter().map(|&x| f64::from(x)).collect();
                prop_assert_eq!(d.matrix(), &want[..]);
            }
            Checkpoint::Qual(_) => prop_assert!(false, "wrong kind"),
        }
        let bytes = encode_real(&r);
        for cut in [0, 5, 11, bytes.len() - 1] {
            prop_assert!(decode(&bytes[..cut], None, 0.1).is_err());
        }
    }
}
