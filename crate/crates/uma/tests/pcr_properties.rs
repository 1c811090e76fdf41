//! Property tests for literal sets, relations, duals and quotients.

mod common;

use common::*;
use proptest::prelude::*;
use uma::geometry::{enumerate_dual, DEFAULT_CAP};
use uma::pcs::star;
use uma::{complement, Sigma};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn star_is_an_involutive_union_homomorphism(n in 1usize..8, a in prop::collection::vec(any::<bool>(), 14), b in prop::collection::vec(any::<bool>(), 14)) {
        let s = Sigma::new(n);
        let x = set_of(&s, &a[..2 * n]);
        let y = set_of(&s, &b[..2 * n]);
        prop_assert_eq!(star(&star(&x)), x.clone());
        prop_assert_eq!(star(&x.union(&y)), star(&x).union(&star(&y)));
        for l in x.iter() {
            prop_assert!(star(&x).contains(complement(l)));
        }
    }

    #[test]
    fn closure_matches_floyd_warshall(p in arb_pcr(6, 10)) {
        let leq = naive_leq(&p);
        for a in p.sigma().lits() {
            for b in p.sigma().lits() {
                prop_assert_eq!(p.leq(a, b), leq[a][b], "{} <= {}", a, b);
            }
        }
    }

    #[test]
    fn order_reverses_under_complement(p in arb_pcr(6, 10)) {
        for a in p.sigma().lits() {
            for b in p.sigma().lits() {
                prop_assert_eq!(p.leq(a, b), p.leq(complement(b), complement(a)));
            }
        }
    }

    #[test]
    fn dual_enumeration_matches_mask_scan(p in arb_pcr(6, 8)) {
        let naive = naive_vertices(&p);
        match enumerate_dual(&p, DEFAULT_CAP) {
            Ok(d) => {
                let mut got = d.vertices().to_vec();
                got.sort();
                let mut want = naive;
                want.sort();
                prop_assert_eq!(got, want);
            }
            Err(_) => prop_assert!(p.is_degenerate()),
        }
    }

    #[test]
    fn degenerate_iff_empty_dual(p in arb_pcr(5, 12)) {
        prop_assert_eq!(p.is_degenerate(), naive_vertices(&p).is_empty());
    }

    #[test]
    fn quotient_dual_is_in_bijection(p in arb_pcr(6, 8)) {
        prop_assume!(!p.is_degenerate());
        let q = p.canonical_quotient().unwrap();
        prop_assert!(q.quotient_pcr.is_poc_set());
        let dp = naive_vertices(&p);
        let dq = naive_vertices(&q.quotient_pcr);
        prop_assert_eq!(dp.len(), dq.len());
        let mut images: Vec<_> = dp.iter().map(|u| q.project(u)).collect();
        images.sort();
        images.dedup();
        prop_assert_eq!(images.len(), dq.len());
        for u in &dp {
            prop_assert!(dq.contains(&q.project(u)));
            prop_assert_eq!(&q.lift(&q.project(u)), u);
        }
    }

    #[test]
    fn coherent_closed_sets_are_vertex_intersections(p in arb_pcr(5, 8), mask in prop::collection::vec(prop::bool::weighted(0.3), 10)) {
        prop_assume!(!p.is_degenerate());
        let s = make_coherent(&p, &set_of(p.sigma(), &mask[..2 * p.sigma().n_pairs()]));
        let up = p.up_closure(&s);
        prop_assert!(p.is_coherent(&up));
        let vs = naive_vertices(&p);
        let hs = naive_halfspace(&vs, &up);
        prop_assert!(!hs.is_empty());
        // The proper part of the closure is exactly what every vertex of the halfspace shares.
        let mut meet = vs[hs[0]].clone();
        for &i in &hs[1..] {
            meet.intersect_with(&vs[i]);
        }
        let neg_free = up.difference(&p.negligibles());
        prop_assert!(neg_free.is_subset(&meet));
    }
}
