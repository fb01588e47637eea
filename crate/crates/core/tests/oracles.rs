//! Property tests of the exact routines against brute-force oracles.

use std::collections::BTreeSet;

use misforge_core::avgfree::{build_avg_free_set, verify_avg_free, AvgFreeSet, Vector};
use misforge_core::dupgraph::{build_dup, verify_dup};
use misforge_core::embedding::{embed, verify_inducedness, GraphFamily};
use misforge_core::graph::Graph;
use misforge_core::hardness::{
    check_properties, sample_base_instance, write_misr, GenConfig,
};
use misforge_core::oracle::{enumerate_all_mis, greedy_mis, is_mis};
use misforge_core::Budget;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every multiset of size `t` drawn from `0..m`, as non-decreasing index lists.
fn multisets(m: usize, t: usize) -> Vec<Vec<usize>> {
    if t == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(m, t - 1) {
        let lo = rest.last().copied().unwrap_or(0);
        for i in lo..m {
            let mut next = rest.clone();
            next.push(i);
            out.push(next);
        }
    }
    out
}

fn naive_avg_free(vectors: &[Vector], max_t: usize) -> bool {
    let d = vectors.first().map_or(0, Vec::len);
    for t in 2..=max_t {
        for pick in multisets(vectors.len(), t) {
            if pick.iter().all(|&i| i == pick[0]) {
                continue;
            }
            let sum: Vec<u64> = (0..d)
                .map(|c| pick.iter().map(|&i| vectors[i][c] as u64).sum())
                .collect();
            if vectors
                .iter()
                .any(|a| a.iter().zip(&sum).all(|(&x, &s)| x as u64 * t as u64 == s))
            {
                return false;
            }
        }
    }
    true
}

fn all_points(ell: u32, d: u32) -> Vec<Vector> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vector| {
                (1..=ell).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::new(n, edges).unwrap()
        })
    })
}

fn brute_force_mis(g: &Graph) -> Vec<BTreeSet<usize>> {
    let n = g.num_vertices();
    let mut out: Vec<BTreeSet<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
        .filter(|s| is_mis(g, s))
        .collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn avg_free_check_matches_naive(ell in 1u32..=4, d in 1u32..=2, mask in any::<u16>(), max_t in 2usize..=4) {
        let points = all_points(ell, d);
        let chosen: Vec<Vector> = points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 16) & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        prop_assume!(!chosen.is_empty());
        let set = AvgFreeSet::from_vectors(ell, d, chosen.clone()).unwrap();
        let fast = verify_avg_free(&set, max_t, &Budget::default()).unwrap();
        prop_assert_eq!(fast, naive_avg_free(set.vectors(), max_t));
    }

    #[test]
    fn built_sets_are_avg_free_by_the_naive_check(ell in 1u32..=5, d in 1u32..=3) {
        let set = build_avg_free_set(ell, d, &Budget::default()).unwrap();
        prop_assert!(naive_avg_free(set.vectors(), 3));
        prop_assert!(set.len() as u128 >= AvgFreeSet::pigeonhole_bound(ell, d));
    }

    #[test]
    fn mis_enumeration_matches_brute_force(g in graph_strategy(10)) {
        prop_assert_eq!(enumerate_all_mis(&g, &Budget::default()).unwrap(), brute_force_mis(&g));
    }

    #[test]
    fn greedy_is_maximal_independent(g in graph_strategy(16), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..g.num_vertices()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(is_mis(&g, &greedy_mis(&g, &order)));
    }

    #[test]
    fn dup_graphs_verify_and_reject_a_stray_edge(ell in 1u32..=3, d in 1u32..=2, k in 1usize..=3, pick in any::<u64>()) {
        prop_assume!((((k + 2) as u64) * ell as u64).pow(d) <= 1024);
        let budget = Budget::default();
        let dup = build_dup(ell, d, k, &budget).unwrap();
        let report = verify_dup(&dup, &budget).unwrap();
        prop_assert!(report.passed(), "{}", report);

        let g = dup.graph();
        let w = dup.layer_size();
        let layer = (pick % k as u64) as usize;
        let a = g.vertex(layer, (pick >> 8) as usize % w);
        let b = g.vertex(layer + 1, (pick >> 32) as usize % w);
        prop_assume!(!g.has_edge(a, b));
        let bad = dup.with_foreign_edge(a, b).unwrap();
        prop_assert!(!verify_dup(&bad, &budget).unwrap().passed());
    }

    #[test]
    fn embeddings_are_induced_on_every_upc(ell in 1u32..=2, d in 1u32..=2, k in 1usize..=2, width in 1usize..=3, density in 0.0f64..1.0, seed in any::<u64>()) {
        let dup = build_dup(ell, d, k, &Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = GraphFamily::random(dup.q(), dup.p(), vec![width; k + 1], density, &mut rng).unwrap();
        let g = embed(&family, &dup).unwrap();
        for i in 0..dup.q() {
            prop_assert!(verify_inducedness(&g, &dup, &family, i), "UPC {}", i);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_sound(seed in any::<u64>(), two_levels in any::<bool>()) {
        let (n0, levels) = if two_levels { (2, vec![(1, 1), (1, 1)]) } else { (4, vec![(2, 1)]) };
        let config = GenConfig::toy(n0, levels, seed);
        let a = config.generate(&Budget::default()).unwrap();
        let b = config.generate(&Budget::default()).unwrap();
        prop_assert_eq!(write_misr(&config, &a), write_misr(&config, &b));
        let report = check_properties(&a);
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn any_base_instance_fits_any_slot(seed in any::<u64>(), i in 0usize..2, fill in any::<u64>()) {
        let config = GenConfig::toy(4, vec![(2, 1)], seed);
        let inst = config.generate(&Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(fill);
        let replacement = sample_base_instance(4, &mut rng).unwrap();
        let swapped = inst.with_subinstance(i, 0, replacement.clone()).unwrap();
        prop_assert_eq!(swapped.sub(i, 0).unwrap(), &replacement);
        prop_assert_eq!(swapped.sub(1 - i, 0), inst.sub(1 - i, 0));
        let report = check_properties(&swapped);
        prop_assert!(report.passed(), "{}", report);
    }
}
