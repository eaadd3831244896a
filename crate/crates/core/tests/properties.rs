use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cloudlab::cloud::{clique_number, SkeletonGraph};
use cloudlab::coloring::{chromatic_number, is_t_colorable, separable_chromatic_number};
use cloudlab::partition::{build_partition_logic, verify_set_representation};
use cloudlab::states::{
    enumerate_states, propagate_indices, propagate_scheduled, state_properties, Kind, Propagation,
    StateSet, TwoValuedState,
};
use cloudlab::Cloud;

const CASES: u32 = 256;

/// Up to 12 vertices `v0..`, 1 to 7 contexts of size 2 to 4, all declared so
/// isolated vertices stay in the cloud.
fn cloud_strategy() -> impl Strategy<Value = Cloud> {
    (3usize..=12)
        .prop_flat_map(|n| {
            let ctx = proptest::collection::btree_set(0..n, 2..=4.min(n));
            (Just(n), proptest::collection::vec(ctx, 1..=7))
        })
        .prop_map(|(n, contexts)| {
            let mut b = Cloud::builder("random");
            for i in 0..n {
                b.vertex(&format!("v{i}"), None).unwrap();
            }
            let unique: BTreeSet<BTreeSet<usize>> = contexts.into_iter().collect();
            for c in unique {
                let names: Vec<String> = c.iter().map(|i| format!("v{i}")).collect();
                b.context(&names).unwrap();
            }
            b.build().unwrap()
        })
}

fn graph_strategy(max: usize) -> impl Strategy<Value = SkeletonGraph> {
    (2usize..=max).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(p, _)| *p)
                .collect();
            SkeletonGraph::anonymous(n, &edges)
        })
    })
}

fn brute_force(cloud: &Cloud) -> Vec<TwoValuedState> {
    let n = cloud.vertex_count();
    (0u32..1 << n)
        .map(|bits| TwoValuedState::total((0..n).map(|i| bits >> i & 1 == 1)))
        .filter(|s| s.is_type_ii(cloud))
        .collect()
}

fn outcome(p: &Propagation) -> Option<&TwoValuedState> {
    p.state()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn full_implies_separating_implies_unital(c in cloud_strategy()) {
        let s = enumerate_states(&c).unwrap();
        let p = state_properties(&c, &s).unwrap();
        prop_assert!(!p.full || p.separating);
        prop_assert!(!p.separating || p.unital);
        prop_assert_eq!(p.count, s.len());
    }

    #[test]
    fn type_ii_states_survive_propagation(c in cloud_strategy()) {
        for s in enumerate_states(&c).unwrap().iter() {
            let seed: Vec<(usize, bool)> = (0..c.vertex_count()).map(|v| (v, s.is_one(v))).collect();
            prop_assert!(propagate_indices(&c, &seed).is_consistent());
            let ones: Vec<(usize, bool)> = s.ones().map(|v| (v, true)).collect();
            let p = propagate_indices(&c, &ones);
            let closure = outcome(&p).expect("consistent");
            for v in 0..c.vertex_count() {
                if let Some(x) = closure.get(v) {
                    prop_assert_eq!(x, s.is_one(v));
                }
            }
        }
    }

    #[test]
    fn propagation_is_confluent(c in cloud_strategy(), seed_bits in any::<u64>(), order in any::<u64>()) {
        let n = c.vertex_count();
        let seed: Vec<(usize, bool)> = (0..n)
            .filter(|v| seed_bits >> (2 * v) & 1 == 1)
            .map(|v| (v, seed_bits >> (2 * v + 1) & 1 == 1))
            .collect();
        let fifo = propagate_indices(&c, &seed);
        let mut rng = StdRng::seed_from_u64(order);
        let shuffled = propagate_scheduled(&c, &seed, |len| rng.random_range(0..len));
        prop_assert_eq!(fifo.is_consistent(), shuffled.is_consistent());
        prop_assert_eq!(outcome(&fifo), outcome(&shuffled));
        if let Some(k) = shuffled.contradiction() {
            prop_assert!(k.replays(&c));
        }
    }

    #[test]
    fn enumeration_matches_brute_force(c in cloud_strategy()) {
        let got = enumerate_states(&c).unwrap();
        let want = StateSet::new(Kind::II, c.vertex_count(), brute_force(&c));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn chromatic_number_bounds(g in graph_strategy(10)) {
        let (chi, col) = chromatic_number(&g);
        prop_assert!(col.is_proper(&g));
        prop_assert!(col.palette() <= chi);
        prop_assert!(chi >= g.clique_number());
        if chi > 1 {
            prop_assert!(is_t_colorable(&g, chi - 1).is_none());
        }
        let (sep, cert) = separable_chromatic_number(&g);
        prop_assert!(sep >= chi);
        for p in &cert.pairs {
            prop_assert!(p.coloring.is_proper(&g));
            prop_assert_ne!(p.coloring.color(p.x), p.coloring.color(p.y));
        }
    }

    #[test]
    fn pair_separability_matches_added_edge(g in graph_strategy(7), t in 1usize..=4) {
        let n = g.vertex_count();
        for (x, y) in g.nonadjacent_pairs() {
            let mut separable = false;
            let mut colors = vec![0usize; n];
            'all: loop {
                let proper = g.edges().iter().all(|&(u, v)| colors[u] != colors[v]);
                if proper && colors[x] != colors[y] {
                    separable = true;
                    break;
                }
                for c in colors.iter_mut() {
                    *c += 1;
                    if *c < t {
                        continue 'all;
                    }
                    *c = 0;
                }
                break;
            }
            let chi_plus = chromatic_number(&g.with_edge(x, y)).0;
            prop_assert_eq!(separable, chi_plus <= t, "pair ({}, {}) t={}", x, y, t);
        }
    }

    #[test]
    fn partition_logic_round_trip(c in cloud_strategy()) {
        let s = enumerate_states(&c).unwrap();
        prop_assume!(!s.is_empty());
        let pl = build_partition_logic(&c, &s).unwrap();
        prop_assert_eq!(pl.read_back(), s.clone());
        let r = verify_set_representation(&pl, &c);
        prop_assert!(r.partitions_hold());
        let props = state_properties(&c, &s).unwrap();
        prop_assert_eq!(r.injective(), props.separating_raw());
    }

    #[test]
    fn clique_number_of_cloud_bounds_context_size(c in cloud_strategy()) {
        prop_assert!(clique_number(&c) >= c.max_context_size());
    }
}
