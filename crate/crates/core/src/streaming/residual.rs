//! Sample-and-prune MIS driven by a schedule of sample sizes.
//!
//! Phase `p` uses passes `2p` and `2p + 1`. Before pass `2p` the `s_p` alive
//! vertices with the smallest public hash are marked as the sample; pass
//! `2p` stores every edge with both endpoints sampled, and a random-order
//! greedy MIS of the sample joins the output. Pass `2p + 1` removes the
//! alive neighbors of the new MIS vertices. A phase whose sample is every
//! alive vertex settles all of them, so it is the last and needs no
//! removal pass.
//!
//! Sampled vertices are alive and alive vertices never neighbor the MIS, so
//! the stored sample edges already respect earlier selections.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::streaming::harness::{
    adjacency, flatten_edges, public_hash, random_order, run_with_state, unflatten_edges,
    EdgeStream, PassOutcome, StreamAlgorithm, StreamReport,
};

const SAMPLE: u64 = 0x7361_6d70_6c65_2121;
/// Shared with buffered greedy so a one-phase `[All]` schedule matches it.
pub(crate) const GREEDY_ORDER: u64 = 0x6772_6565_6479_2121;

const ALIVE: u32 = 0;
const IN: u32 = 1;
const OUT: u32 = 2;
const NEW_IN: u32 = 3;
const SAMPLED: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleSize {
    Count(usize),
    All,
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Count(s) => write!(f, "{s}"),
            SampleSize::All => f.write_str("all"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualConfig {
    pub schedule: Vec<SampleSize>,
    pub seed: u64,
}

impl ResidualConfig {
    /// `[⌈n/b_1⌉, ..., ⌈n/b_k⌉, All]`.
    pub fn from_factors(n: usize, factors: &[usize], seed: u64) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::ScheduleInvalid("sampling factor 0".into()));
        }
        let mut schedule: Vec<SampleSize> =
            factors.iter().map(|&b| SampleSize::Count(n.div_ceil(b))).collect();
        schedule.push(SampleSize::All);
        Ok(ResidualConfig { schedule, seed })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let Some(last) = self.schedule.last() else {
            return Err(Error::ScheduleInvalid("empty schedule".into()));
        };
        if self.schedule.contains(&SampleSize::Count(0)) {
            return Err(Error::ScheduleInvalid("sample size 0 makes no progress".into()));
        }
        match *last {
            SampleSize::All => Ok(()),
            SampleSize::Count(s) if s >= n => Ok(()),
            SampleSize::Count(s) => Err(Error::ScheduleInvalid(format!(
                "last sample size {s} does not cover all {n} vertices"
            ))),
        }
    }
}

/// Per-phase instrumentation; not part of the algorithm's memory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseStats {
    pub phase: usize,
    pub sample_size: usize,
    pub stored_edges: usize,
    /// Words held at the end of the storage pass.
    pub peak_words: usize,
    /// Alive vertices once the phase finished.
    pub alive_after: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Residual {
    config: ResidualConfig,
    pass: usize,
    status: Vec<u32>,
    stored: Vec<Edge>,
    log: Vec<PhaseStats>,
}

impl Residual {
    fn phase(&self) -> usize {
        self.pass / 2
    }

    fn alive(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.status.len()).filter(|&v| self.status[v] == ALIVE)
    }

    /// Marks the sample of the current phase among the alive vertices.
    fn mark_sample(&mut self) {
        let phase = self.phase();
        let entry = self.config.schedule[phase.min(self.config.schedule.len() - 1)];
        let mut alive: Vec<(u64, usize)> = self
            .alive()
            .map(|v| (public_hash(self.config.seed, SAMPLE, phase as u64, v), v))
            .collect();
        if let SampleSize::Count(s) = entry {
            if s < alive.len() {
                alive.select_nth_unstable(s);
                alive.truncate(s);
            }
        }
        for (_, v) in alive {
            self.status[v] = SAMPLED;
        }
    }

    fn storage_end(&mut self) -> PassOutcome {
        let n = self.status.len();
        let phase = self.phase() as u64;
        let sample: Vec<usize> = (0..n).filter(|&v| self.status[v] == SAMPLED).collect();
        let adj = adjacency(n, &self.stored);
        let last = self.alive().next().is_none();
        self.log.push(PhaseStats {
            phase: self.phase(),
            sample_size: sample.len(),
            stored_edges: self.stored.len(),
            peak_words: self.words(),
            alive_after: Vec::new(),
        });
        let mut blocked = vec![false; n];
        for v in random_order(sample.iter().copied(), self.config.seed, GREEDY_ORDER, phase) {
            if blocked[v] {
                self.status[v] = if last { OUT } else { ALIVE };
                continue;
            }
            self.status[v] = if last { IN } else { NEW_IN };
            for &w in &adj[v] {
                blocked[w] = true;
            }
        }
        self.stored.clear();
        self.pass += 1;
        if last {
            PassOutcome::Done
        } else {
            PassOutcome::Continue
        }
    }

    fn removal_end(&mut self) -> PassOutcome {
        for s in &mut self.status {
            if *s == NEW_IN {
                *s = IN;
            }
        }
        let alive: Vec<usize> = self.alive().collect();
        if let Some(stats) = self.log.last_mut() {
            stats.alive_after = alive.clone();
        }
        self.pass += 1;
        if alive.is_empty() {
            return PassOutcome::Done;
        }
        self.mark_sample();
        PassOutcome::Continue
    }

    pub fn phase_log(&self) -> &[PhaseStats] {
        &self.log
    }
}

impl StreamAlgorithm for Residual {
    type Config = ResidualConfig;

    fn name(config: &ResidualConfig) -> String {
        let entries: Vec<String> = config.schedule.iter().map(ToString::to_string).collect();
        format!("residual[{}]", entries.join(","))
    }

    fn init(config: &ResidualConfig, n: usize) -> Result<Self> {
        config.validate(n)?;
        let mut alg = Residual {
            config: config.clone(),
            pass: 0,
            status: vec![ALIVE; n],
            stored: Vec::new(),
            log: Vec::new(),
        };
        alg.mark_sample();
        Ok(alg)
    }

    fn process(&mut self, (a, b): Edge) {
        if self.pass.is_multiple_of(2) {
            if self.status[a] == SAMPLED && self.status[b] == SAMPLED {
                self.stored.push((a, b));
            }
        } else {
            for (x, y) in [(a, b), (b, a)] {
                if self.status[x] == NEW_IN && self.status[y] == ALIVE {
                    self.status[y] = OUT;
                }
            }
        }
    }

    fn end_pass(&mut self) -> PassOutcome {
        if self.pass.is_multiple_of(2) {
            self.storage_end()
        } else {
            self.removal_end()
        }
    }

    fn words(&self) -> usize {
        self.status.len() + 2 * self.stored.len()
    }

    fn snapshot(&self) -> Vec<u32> {
        let mut out = self.status.clone();
        out.extend(flatten_edges(&self.stored));
        out
    }

    fn restore(config: &ResidualConfig, n: usize, pass_index: usize, words: &[u32]) -> Result<Self> {
        config.validate(n)?;
        if words.len() < n {
            return Err(Error::InvalidParameter(format!(
                "residual memory has {} words, expected at least {n}",
                words.len()
            )));
        }
        Ok(Residual {
            config: config.clone(),
            pass: pass_index,
            status: words[..n].to_vec(),
            stored: unflatten_edges(&words[n..])?,
            log: Vec::new(),
        })
    }

    fn output(&self) -> BTreeSet<usize> {
        (0..self.status.len()).filter(|&v| self.status[v] == IN).collect()
    }
}

/// Runs the schedule and returns the per-phase log alongside the report.
pub fn run_residual(config: &ResidualConfig, stream: &EdgeStream) -> Result<(StreamReport, Vec<PhaseStats>)> {
    let (report, alg) = run_with_state::<Residual>(config, stream)?;
    Ok((report, alg.log))
}

/// Largest number of alive neighbors of an alive vertex.
pub fn max_alive_degree(stream: &EdgeStream, alive: &[usize]) -> usize {
    let mut is_alive = vec![false; stream.num_vertices()];
    for &v in alive {
        is_alive[v] = true;
    }
    let mut degree = vec![0usize; stream.num_vertices()];
    for (a, b) in stream.edge_set() {
        if is_alive[a] && is_alive[b] {
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    degree.into_iter().max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::oracle::is_mis;
    use crate::streaming::harness::run_stream;

    fn cycle(n: usize) -> EdgeStream {
        EdgeStream::new(n, (0..n).map(|i| (i, (i + 1) % n)).map(|(a, b)| (a.min(b), a.max(b))).collect())
            .unwrap()
    }

    #[test]
    fn schedules_are_validated() {
        let bad = |schedule: Vec<SampleSize>| {
            matches!(
                Residual::init(&ResidualConfig { schedule, seed: 0 }, 10),
                Err(Error::ScheduleInvalid(_))
            )
        };
        assert!(bad(vec![]));
        assert!(bad(vec![SampleSize::Count(3)]));
        assert!(bad(vec![SampleSize::Count(0), SampleSize::All]));
        assert!(!bad(vec![SampleSize::Count(10)]));
        assert!(!bad(vec![SampleSize::Count(3), SampleSize::All]));
    }

    #[test]
    fn single_phase_stores_everything() {
        let s = cycle(9);
        let config = ResidualConfig { schedule: vec![SampleSize::All], seed: 4 };
        let (report, log) = run_residual(&config, &s).unwrap();
        assert_eq!(report.passes, 1);
        assert_eq!(log[0].stored_edges, 9);
        assert_eq!(report.peak_words, 9 + 18);
        let g = Graph::new(9, s.edge_set()).unwrap();
        assert!(is_mis(&g, &report.output));
    }

    #[test]
    fn multi_phase_output_is_mis() {
        let s = cycle(40);
        let g = Graph::new(40, s.edge_set()).unwrap();
        for seed in 0..20 {
            let config = ResidualConfig::from_factors(40, &[8, 2], seed).unwrap();
            let r = run_stream::<Residual>(&config, &s).unwrap();
            assert!(is_mis(&g, &r.output), "seed {seed}");
            assert!(r.passes <= 5);
        }
    }
}
