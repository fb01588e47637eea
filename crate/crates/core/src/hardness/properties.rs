//! Brute-force audit of a sampled instance.

use std::collections::BTreeSet;

use crate::graph::{canonical_edges, Edge};
use crate::hardness::instance::{Instance, Node, Side};
use crate::report::Report;

/// Checks every structural property of `inst` and, recursively, of its sub-instances.
///
/// Check names: `special-disjoint`, `induced-union`, `copies-identical`,
/// `players-reconstruct`, `clique-avoids-special`, `clique-count`,
/// `players-disjoint`, `vertex-count`, `subinstances` for recursive
/// instances, and `base-edges` for base instances.
pub fn check_properties(inst: &Instance) -> Report {
    let mut report = Report::new();
    let players = inst.players();
    let total: usize = players.iter().map(Vec::len).sum();
    let distinct: BTreeSet<&Edge> = players.iter().flatten().collect();
    report.push(
        "players-disjoint",
        distinct.len() == total,
        format!("{} edges held by more than one player", total - distinct.len()),
    );
    match inst.node() {
        Node::Base { bits } => {
            let p0 = bits.len();
            let expected: Vec<Edge> = (0..p0).filter(|&i| bits[i]).map(|i| (i, p0 + i)).collect();
            report.push(
                "base-edges",
                players.len() == 1 && players[0] == expected,
                format!("{} edges for {} present bits", total, expected.len()),
            );
        }
        Node::Recursive { dup, t, subs } => {
            let frame = inst.frame().expect("recursive instance");
            let r = inst.rounds();
            let edges: BTreeSet<Edge> = distinct.iter().map(|&&e| e).collect();

            for side in [Side::L, Side::R] {
                let specials = inst.special_subgraphs(side);
                let mut owner = std::collections::HashMap::new();
                let mut overlaps = 0usize;
                for (j, s) in specials.iter().enumerate() {
                    for &v in &s.vertices {
                        if owner.insert(v, j).is_some() {
                            overlaps += 1;
                        }
                    }
                }
                report.push(
                    format!("special-disjoint-{side:?}"),
                    overlaps == 0,
                    format!("{overlaps} vertices shared between special subgraphs"),
                );
                let induced: BTreeSet<Edge> = edges
                    .iter()
                    .copied()
                    .filter(|(a, b)| owner.contains_key(a) && owner.contains_key(b))
                    .collect();
                let union: BTreeSet<Edge> =
                    specials.iter().flat_map(|s| s.edges.iter().copied()).collect();
                let extra = induced.difference(&union).count();
                let missing = union.difference(&induced).count();
                report.push(
                    format!("induced-union-{side:?}"),
                    extra == 0 && missing == 0,
                    format!("{extra} extra and {missing} missing edges on the special vertices"),
                );
            }

            let half = frame.half;
            let left: BTreeSet<Edge> = edges
                .iter()
                .copied()
                .filter(|&(a, b)| a < half && b < half)
                .collect();
            let right: BTreeSet<Edge> = edges
                .iter()
                .copied()
                .filter(|&(a, b)| a >= half && b >= half)
                .map(|(a, b)| (a - half, b - half))
                .collect();
            let diff = left.symmetric_difference(&right).count();
            report.push(
                "copies-identical",
                diff == 0,
                format!("{diff} edges differ between the copies"),
            );

            let mut bad_players = Vec::new();
            for (a, held) in players.iter().enumerate().take(r) {
                if *held != frame.player_edges(dup, subs, a) {
                    bad_players.push(a);
                }
            }
            match frame.clique(dup, *t) {
                Ok(clique) if clique == players[r] => {}
                _ => bad_players.push(r),
            }
            report.push(
                "players-reconstruct",
                bad_players.is_empty() && players.len() == r + 1,
                if bad_players.is_empty() {
                    format!("{} players rebuilt from the sub-instances", r + 1)
                } else {
                    format!("players {bad_players:?} differ from their reconstruction")
                },
            );

            let non_left: BTreeSet<usize> = frame
                .non_special(dup, *t, Side::L)
                .unwrap_or_default()
                .into_iter()
                .collect();
            let non_right: BTreeSet<usize> = frame
                .non_special(dup, *t, Side::R)
                .unwrap_or_default()
                .into_iter()
                .collect();
            let clique = &players[r];
            let stray = clique
                .iter()
                .filter(|&&(a, b)| !(non_left.contains(&a) && non_right.contains(&b)))
                .count();
            report.push(
                "clique-avoids-special",
                stray == 0,
                format!("{stray} clique edges touch the special UPC or stay inside a copy"),
            );
            let unique = canonical_edges(clique.clone()).len();
            let expected = non_left.len() * non_right.len();
            report.push(
                "clique-count",
                unique == clique.len() && clique.len() == expected,
                format!("{} clique edges, expected {expected}", clique.len()),
            );

            let n_prev = subs[0][0].num_vertices();
            report.push(
                "vertex-count",
                inst.num_vertices() == 2 * dup.layer_size() * n_prev,
                format!(
                    "{} vertices = 2 x {} x {n_prev}",
                    inst.num_vertices(),
                    dup.layer_size()
                ),
            );

            let mut failing = Vec::new();
            let mut count = 0usize;
            for (i, row) in subs.iter().enumerate() {
                for (j, sub) in row.iter().enumerate() {
                    count += 1;
                    let sub_report = check_properties(sub);
                    let first = sub_report.failures().next().map(|c| c.name.clone());
                    if let Some(name) = first {
                        failing.push(format!("({i},{j}) {name}"));
                    }
                }
            }
            report.push(
                "subinstances",
                failing.is_empty(),
                match failing.first() {
                    Some(first) => format!("{} of {count} fail; first {first}", failing.len()),
                    None => format!("{count} sub-instances pass"),
                },
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::hardness::instance::{sample_instance, Hierarchy, ToyParams};
    use crate::rng::SeedStream;

    fn sample(levels: &[(u32, u32)], n_0: usize, seed: u64) -> Instance {
        let h = Hierarchy::toy(
            &ToyParams {
                n_0,
                levels: levels.to_vec(),
            },
            &Budget::default(),
        )
        .unwrap();
        sample_instance(&h, SeedStream::new(seed)).unwrap()
    }

    #[test]
    fn sampled_instances_pass() {
        for seed in 0..5 {
            let inst = sample(&[(2, 1)], 4, seed);
            let report = check_properties(&inst);
            assert!(report.passed(), "{report}");
        }
        let inst = sample(&[(1, 1), (1, 1)], 2, 3);
        let report = check_properties(&inst);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn clique_edge_onto_special_vertex_is_caught() {
        let inst = sample(&[(2, 1)], 4, 1);
        let special = inst.special_subgraphs(Side::L)[0].vertices[0];
        let mut players = inst.players().to_vec();
        let (_, b) = players[1].pop().unwrap();
        players[1].push((special, b));
        let bad = inst.with_players(players).unwrap();
        let report = check_properties(&bad);
        assert!(report.failed("clique-avoids-special"), "{report}");
    }
}
