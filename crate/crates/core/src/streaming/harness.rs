//! Multi-pass edge-stream harness with pass and space accounting.
//!
//! Space is counted in words: one vertex id or one per-vertex flag is a
//! word, a stored edge is two, and O(1) loop counters and thresholds are
//! free. The output set is not working memory. An algorithm's memory must be
//! exactly its [`StreamAlgorithm::snapshot`]: together with the public
//! configuration and the pass index (both known to every party) it restarts
//! the algorithm, which is what the protocol simulation relies on.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{canonical_edges, Edge};
use crate::rng::{mix, SeedStream};

/// Hard stop against algorithms that never finish.
pub const MAX_PASSES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PassOutcome {
    Continue,
    Done,
}

/// Memory is restorable from `(config, n, pass_index, snapshot)`.
pub trait StreamAlgorithm: Sized {
    type Config: Clone + Sync;

    fn name(config: &Self::Config) -> String;

    /// State before the first pass on vertex set `0..n`.
    fn init(config: &Self::Config, n: usize) -> Result<Self>;

    fn process(&mut self, e: Edge);

    fn end_pass(&mut self) -> PassOutcome;

    /// Words of working memory; always `snapshot().len()`.
    fn words(&self) -> usize;

    fn snapshot(&self) -> Vec<u32>;

    /// State of the algorithm at the start of pass `pass_index` (or mid-pass),
    /// given the words it had written.
    fn restore(config: &Self::Config, n: usize, pass_index: usize, words: &[u32]) -> Result<Self>;

    /// MIS reported once the last pass returned [`PassOutcome::Done`].
    fn output(&self) -> BTreeSet<usize>;
}

/// How the edges of a stream are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderPolicy {
    /// As given by the source.
    File,
    /// Uniform shuffle from the seed.
    Random(u64),
    /// Player inputs concatenated in player order.
    PerPlayer,
}

/// Fixed edge sequence replayed on every pass, optionally split into player segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStream {
    n: usize,
    edges: Vec<Edge>,
    /// `segments[a]` is the end offset of player `a`'s part.
    segments: Vec<usize>,
}

fn check_edges(n: usize, edges: &[Edge]) -> Result<()> {
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameter(format!("{n} vertices exceed 32-bit ids")));
    }
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a == b || a.max(b) >= n) {
        return Err(Error::InvalidGraph(format!("edge ({a},{b}) is not valid on {n} vertices")));
    }
    Ok(())
}

impl EdgeStream {
    /// One-player stream in the given order.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        check_edges(n, &edges)?;
        let m = edges.len();
        Ok(EdgeStream {
            n,
            edges,
            segments: vec![m],
        })
    }

    /// Player inputs concatenated; segment boundaries are the player boundaries.
    pub fn from_players(n: usize, players: &[Vec<Edge>]) -> Result<Self> {
        let mut edges = Vec::new();
        let mut segments = Vec::with_capacity(players.len());
        for list in players {
            edges.extend_from_slice(list);
            segments.push(edges.len());
        }
        check_edges(n, &edges)?;
        Ok(EdgeStream { n, edges, segments })
    }

    /// Builds a stream over `players` under `policy`. `File` and `Random`
    /// flatten to one player.
    pub fn with_policy(n: usize, players: &[Vec<Edge>], policy: OrderPolicy) -> Result<Self> {
        match policy {
            OrderPolicy::PerPlayer => EdgeStream::from_players(n, players),
            OrderPolicy::File => EdgeStream::new(n, players.concat()),
            OrderPolicy::Random(seed) => {
                let mut edges = players.concat();
                edges.shuffle(&mut SeedStream::new(seed).child(ORDER_SHUFFLE, 0, 0).rng());
                EdgeStream::new(n, edges)
            }
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_players(&self) -> usize {
        self.segments.len()
    }

    /// Edges of player `a`.
    pub fn segment(&self, a: usize) -> &[Edge] {
        let start = if a == 0 { 0 } else { self.segments[a - 1] };
        &self.edges[start..self.segments[a]]
    }

    /// Sorted, deduplicated edge set.
    pub fn edge_set(&self) -> Vec<Edge> {
        canonical_edges(self.edges.clone())
    }
}

const ORDER_SHUFFLE: u64 = 0x7368_7566_666c_6521;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StreamReport {
    pub algorithm: String,
    pub n: usize,
    pub passes: usize,
    /// High-water mark of working words over the whole run.
    pub peak_words: usize,
    /// High-water mark within each pass.
    pub pass_peaks: Vec<usize>,
    pub output: BTreeSet<usize>,
}

/// Runs `A` to completion, counting passes and peak memory.
pub fn run_stream<A: StreamAlgorithm>(config: &A::Config, stream: &EdgeStream) -> Result<StreamReport> {
    let (report, _) = run_with_state::<A>(config, stream)?;
    Ok(report)
}

pub(crate) fn run_with_state<A: StreamAlgorithm>(
    config: &A::Config,
    stream: &EdgeStream,
) -> Result<(StreamReport, A)> {
    let mut alg = A::init(config, stream.num_vertices())?;
    let mut peak = alg.words();
    let mut pass_peaks = Vec::new();
    loop {
        if pass_peaks.len() == MAX_PASSES {
            return Err(Error::BudgetExceeded {
                what: "stream passes",
                needed: MAX_PASSES as u128 + 1,
                cap: MAX_PASSES as u128,
            });
        }
        let mut pass_peak = alg.words();
        for &e in stream.edges() {
            alg.process(e);
            pass_peak = pass_peak.max(alg.words());
        }
        let outcome = alg.end_pass();
        pass_peak = pass_peak.max(alg.words());
        peak = peak.max(pass_peak);
        pass_peaks.push(pass_peak);
        if outcome == PassOutcome::Done {
            break;
        }
    }
    Ok((
        StreamReport {
            algorithm: A::name(config),
            n: stream.num_vertices(),
            passes: pass_peaks.len(),
            peak_words: peak,
            pass_peaks,
            output: alg.output(),
        },
        alg,
    ))
}

/// Public pseudo-random word for `(seed, label, round, vertex)`.
#[inline]
pub fn public_hash(seed: u64, label: u64, round: u64, v: usize) -> u64 {
    mix(&[seed, label, round, v as u64])
}

/// `vertices` sorted by their public hash for `(seed, label, round)`, ties by id.
pub fn random_order(vertices: impl IntoIterator<Item = usize>, seed: u64, label: u64, round: u64) -> Vec<usize> {
    let mut keyed: Vec<(u64, usize)> = vertices
        .into_iter()
        .map(|v| (public_hash(seed, label, round, v), v))
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, v)| v).collect()
}

/// Adjacency built from stored edges; only neighbors inside `stored` count.
pub(crate) fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

pub(crate) fn flatten_edges(edges: &[Edge]) -> impl Iterator<Item = u32> + '_ {
    edges.iter().flat_map(|&(a, b)| [a as u32, b as u32])
}

pub(crate) fn unflatten_edges(words: &[u32]) -> Result<Vec<Edge>> {
    if !words.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter("edge block has odd length".into()));
    }
    Ok(words
        .chunks_exact(2)
        .map(|c| (c[0] as usize, c[1] as usize))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segments_follow_players() {
        let s = EdgeStream::from_players(4, &[vec![(0, 1)], vec![], vec![(2, 3), (1, 2)]]).unwrap();
        assert_eq!(s.num_players(), 3);
        assert_eq!(s.segment(0), &[(0, 1)]);
        assert!(s.segment(1).is_empty());
        assert_eq!(s.segment(2), &[(2, 3), (1, 2)]);
        assert!(EdgeStream::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn random_policy_permutes() {
        let edges: Vec<Edge> = (0..20).map(|i| (i, i + 1)).collect();
        let s = EdgeStream::with_policy(21, std::slice::from_ref(&edges), OrderPolicy::Random(3)).unwrap();
        assert_ne!(s.edges(), edges.as_slice());
        assert_eq!(s.edge_set(), edges);
    }

    #[test]
    fn order_is_a_permutation() {
        let order = random_order(0..50, 1, 2, 3);
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
        assert_eq!(order, random_order(0..50, 1, 2, 3));
    }
}
