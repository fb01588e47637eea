//! One-pass baseline: store every edge, then run random-order greedy.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::Edge;
use crate::streaming::harness::{
    adjacency, flatten_edges, random_order, unflatten_edges, PassOutcome, StreamAlgorithm,
};
use crate::streaming::residual::GREEDY_ORDER;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyConfig {
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct BufferedGreedy {
    seed: u64,
    n: usize,
    stored: Vec<Edge>,
    /// Set on the first `end_pass`; the answer, not working memory.
    output: BTreeSet<usize>,
}

impl BufferedGreedy {
    /// Selection order, fixed by the seed and independent of the stream order.
    pub fn order(seed: u64, n: usize) -> Vec<usize> {
        random_order(0..n, seed, GREEDY_ORDER, 0)
    }
}

impl StreamAlgorithm for BufferedGreedy {
    type Config = GreedyConfig;

    fn name(_: &GreedyConfig) -> String {
        "greedy".into()
    }

    fn init(config: &GreedyConfig, n: usize) -> Result<Self> {
        Ok(BufferedGreedy {
            seed: config.seed,
            n,
            stored: Vec::new(),
            output: BTreeSet::new(),
        })
    }

    fn process(&mut self, e: Edge) {
        self.stored.push(e);
    }

    fn end_pass(&mut self) -> PassOutcome {
        let adj = adjacency(self.n, &self.stored);
        let mut blocked = vec![false; self.n];
        for v in BufferedGreedy::order(self.seed, self.n) {
            if !blocked[v] {
                self.output.insert(v);
                for &w in &adj[v] {
                    blocked[w] = true;
                }
            }
        }
        PassOutcome::Done
    }

    fn words(&self) -> usize {
        2 * self.stored.len()
    }

    fn snapshot(&self) -> Vec<u32> {
        flatten_edges(&self.stored).collect()
    }

    fn restore(config: &GreedyConfig, n: usize, _pass_index: usize, words: &[u32]) -> Result<Self> {
        Ok(BufferedGreedy {
            seed: config.seed,
            n,
            stored: unflatten_edges(words)?,
            output: BTreeSet::new(),
        })
    }

    fn output(&self) -> BTreeSet<usize> {
        self.output.clone()
    }
}
