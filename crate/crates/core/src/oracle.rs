//! Exact MIS machinery, search sequences and the search predicate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hardness::instance::{Instance, Node, Side};

/// True iff `set` is independent and dominates every other vertex.
pub fn is_mis(graph: &Graph, set: &BTreeSet<usize>) -> bool {
    let n = graph.num_vertices();
    if set.iter().any(|&v| v >= n) {
        return false;
    }
    for &v in set {
        if graph.neighbors(v).iter().any(|w| set.contains(w)) {
            return false;
        }
    }
    (0..n).all(|v| set.contains(&v) || graph.neighbors(v).iter().any(|w| set.contains(w)))
}

/// Largest graph the bitset enumerator can represent.
const MASK_BITS: usize = 64;

/// Every maximal independent set, each sorted, in lexicographic order.
pub fn enumerate_all_mis(graph: &Graph, budget: &Budget) -> Result<Vec<BTreeSet<usize>>> {
    let n = graph.num_vertices();
    Budget::check("MIS enumeration vertices", n as u128, budget.mis_vertices as u64)?;
    Budget::check("MIS enumeration vertices", n as u128, MASK_BITS as u64)?;
    // closed[v] = {v} ∪ N(v)
    let closed: Vec<u64> = (0..n)
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .fold(1u64 << v, |m, &w| m | (1u64 << w))
        })
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    expand(&closed, 0, all, 0, &mut out);
    let mut sets: Vec<BTreeSet<usize>> = out
        .into_iter()
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    sets.sort();
    Ok(sets)
}

/// Bron–Kerbosch over the complement: `chosen` is independent, `cand` are
/// vertices that may still join, `excl` are vertices already branched on.
fn expand(closed: &[u64], chosen: u64, cand: u64, excl: u64, out: &mut Vec<u64>) {
    if cand == 0 {
        if excl == 0 {
            out.push(chosen);
        }
        return;
    }
    // pivot maximizing candidates it dominates; branch on cand ∩ N[pivot]
    let pool = cand | excl;
    let pivot = (0..closed.len())
        .filter(|&u| pool >> u & 1 == 1)
        .max_by_key(|&u| (!closed[u] & cand).count_ones())
        .expect("pool is non-empty");
    let mut branch = cand & closed[pivot];
    let (mut cand, mut excl) = (cand, excl);
    while branch != 0 {
        let v = branch.trailing_zeros() as usize;
        let bit = 1u64 << v;
        branch &= !bit;
        expand(closed, chosen | bit, cand & !closed[v], excl & !closed[v], out);
        cand &= !bit;
        excl |= bit;
    }
}

/// Sequential greedy: scan `order`, keep every vertex with no kept neighbor.
pub fn greedy_mis(graph: &Graph, order: &[usize]) -> BTreeSet<usize> {
    let mut blocked = vec![false; graph.num_vertices()];
    let mut out = BTreeSet::new();
    for &v in order {
        if !blocked[v] {
            out.insert(v);
            blocked[v] = true;
            for &w in graph.neighbors(v) {
                blocked[w] = true;
            }
        }
    }
    out
}

/// Path through the hierarchy: `entries[0]` picks a special sub-instance at
/// the top level `r`, the last entry at level 1. Indices start at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SearchSequence(pub Vec<usize>);

/// `ℙ_r(G, K)`: edge-presence bits of the base instance `K` reaches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PredicateBits(pub Vec<bool>);

impl std::fmt::Display for PredicateBits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Number of choices at each level, top level first.
pub fn level_widths(inst: &Instance) -> Vec<usize> {
    let mut widths = Vec::new();
    let mut cursor = inst;
    while let Node::Recursive { dup, subs, .. } = cursor.node() {
        widths.push(dup.p());
        cursor = &subs[0][0];
    }
    widths
}

pub fn validate_sequence(inst: &Instance, k: &SearchSequence) -> Result<()> {
    let widths = level_widths(inst);
    if k.0.len() != widths.len() {
        return Err(Error::InvalidSequence(format!(
            "length {} for an instance with {} rounds",
            k.0.len(),
            widths.len()
        )));
    }
    for (pos, (&entry, &p)) in k.0.iter().zip(&widths).enumerate() {
        if entry >= p {
            return Err(Error::InvalidSequence(format!(
                "entry {pos} is {entry} but level {} has p={p}",
                widths.len() - pos
            )));
        }
    }
    Ok(())
}

/// All valid search sequences in lexicographic order.
pub fn all_search_sequences(inst: &Instance) -> Vec<SearchSequence> {
    let widths = level_widths(inst);
    let mut out = vec![Vec::new()];
    for &p in &widths {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..p).map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(SearchSequence).collect()
}

pub fn eval_predicate(inst: &Instance, k: &SearchSequence) -> Result<PredicateBits> {
    validate_sequence(inst, k)?;
    let mut cursor = inst;
    for &entry in &k.0 {
        let Node::Recursive { t, subs, .. } = cursor.node() else {
            unreachable!("sequence length checked");
        };
        cursor = &subs[*t][entry];
    }
    Ok(PredicateBits(cursor.bits().expect("reached the base").to_vec()))
}

/// `set` restricted to special subgraph `j` of `side`, as sub-instance vertex ids.
fn restrict(inst: &Instance, side: Side, j: usize, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let specials = inst.special_subgraphs(side);
    specials[j]
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, g)| set.contains(g))
        .map(|(local, _)| local)
        .collect()
}

/// Recovers `ℙ_r(G, K)` from any MIS of the instance graph.
///
/// At every level the descent moves to the copy whose restriction to the
/// `K`-selected special subgraph is an MIS of that sub-instance, trying the
/// left copy first. At the base, bit `i` is 1 iff not both `u_i` and `v_i`
/// are in the restricted set.
pub fn extract_predicate_from_mis(
    inst: &Instance,
    set: &BTreeSet<usize>,
    k: &SearchSequence,
) -> Result<PredicateBits> {
    validate_sequence(inst, k)?;
    if !is_mis(&inst.graph(), set) {
        return Err(Error::NotAnMis);
    }
    let mut cursor = inst;
    let mut current = set.clone();
    for &entry in &k.0 {
        let Node::Recursive { t, subs, .. } = cursor.node() else {
            unreachable!("sequence length checked");
        };
        let sub = &subs[*t][entry];
        let sub_graph = sub.graph();
        let chosen = [Side::L, Side::R]
            .into_iter()
            .map(|side| restrict(cursor, side, entry, &current))
            .find(|restricted| is_mis(&sub_graph, restricted))
            .ok_or(Error::InconsistentMis {
                level: cursor.rounds(),
                index: entry,
            })?;
        cursor = sub;
        current = chosen;
    }
    let p0 = cursor.layer_size();
    Ok(PredicateBits(
        (0..p0)
            .map(|i| !(current.contains(&i) && current.contains(&(p0 + i))))
            .collect(),
    ))
}

/// For an MIS `set`: its restriction to every left special subgraph is an
/// MIS of the matching sub-instance, or the same holds on the right; and the
/// property holds again inside each such restriction.
pub fn recursive_mis_holds(inst: &Instance, set: &BTreeSet<usize>) -> bool {
    let Node::Recursive { dup, t, subs } = inst.node() else {
        return true;
    };
    [Side::L, Side::R].into_iter().any(|side| {
        (0..dup.p()).all(|j| {
            let sub = &subs[*t][j];
            let restricted = restrict(inst, side, j, set);
            is_mis(&sub.graph(), &restricted) && recursive_mis_holds(sub, &restricted)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardness::instance::base_instance_from_bits;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn is_mis_examples() {
        let triangle = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(is_mis(&triangle, &set(&[1])));
        assert!(!is_mis(&triangle, &set(&[])));
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(is_mis(&path, &set(&[0, 2])));
        assert!(!is_mis(&path, &set(&[0])));
        assert!(!is_mis(&path, &set(&[0, 1])));
    }

    #[test]
    fn enumeration_examples() {
        let b = Budget::default();
        let e = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(enumerate_all_mis(&e, &b).unwrap(), vec![set(&[0]), set(&[1])]);
        assert_eq!(enumerate_all_mis(&Graph::empty(2), &b).unwrap(), vec![set(&[0, 1])]);
        let c4 = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(enumerate_all_mis(&c4, &b).unwrap(), vec![set(&[0, 2]), set(&[1, 3])]);
        assert_eq!(enumerate_all_mis(&Graph::empty(0), &b).unwrap(), vec![set(&[])]);
        assert!(enumerate_all_mis(&Graph::empty(25), &b).unwrap_err().is_budget());
    }

    #[test]
    fn greedy_examples() {
        let triangle = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(greedy_mis(&triangle, &[2, 0, 1]).len(), 1);
        assert_eq!(greedy_mis(&Graph::empty(4), &[3, 1, 0, 2]), set(&[0, 1, 2, 3]));
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(greedy_mis(&path, &[1, 0, 2]), set(&[1]));
    }

    #[test]
    fn base_predicate() {
        let inst = base_instance_from_bits(vec![true, false]).unwrap();
        let empty = SearchSequence(vec![]);
        assert_eq!(eval_predicate(&inst, &empty).unwrap().to_string(), "10");
        // u_1 = 0, u_2 = 1, v_1 = 2, v_2 = 3
        let s = set(&[0, 1, 3]);
        assert_eq!(extract_predicate_from_mis(&inst, &s, &empty).unwrap().to_string(), "10");
        let none = base_instance_from_bits(vec![false, false]).unwrap();
        let all = set(&[0, 1, 2, 3]);
        assert_eq!(extract_predicate_from_mis(&none, &all, &empty).unwrap().to_string(), "00");
        assert_eq!(
            extract_predicate_from_mis(&inst, &set(&[0, 1]), &empty),
            Err(Error::NotAnMis)
        );
        assert!(matches!(
            eval_predicate(&inst, &SearchSequence(vec![0])),
            Err(Error::InvalidSequence(_))
        ));
        assert_eq!(all_search_sequences(&inst), vec![SearchSequence(vec![])]);
    }
}
