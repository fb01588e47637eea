//! Pass/space/communication measurements over instance families.
//!
//! A spec is JSON:
//!
//! ```json
//! {"instances": [{"type": "toy", "n0": 2, "levels": [[1, 1]], "seed": 3},
//!                {"type": "gnp", "n": 128, "p": 0.1}],
//!  "algorithms": ["luby", "greedy", "residual:8"],
//!  "seeds": [0, 1, 2],
//!  "order": "per-player"}
//! ```
//!
//! `residual:b1/b2/...` samples `⌈n/b1⌉`, then `⌈n/b2⌉`, ..., then all
//! remaining vertices. Hard instances give one player per edge part; random
//! graphs and flattened orders give a single player.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::hardness::GenConfig;
use crate::oracle::is_mis;
use crate::rng::SeedStream;
use crate::streaming::buffered::{BufferedGreedy, GreedyConfig};
use crate::streaming::harness::{EdgeStream, OrderPolicy};
use crate::streaming::luby::{Luby, LubyConfig};
use crate::streaming::protocol::{simulate_protocol, ProtocolRun};
use crate::streaming::residual::{Residual, ResidualConfig};

const GNP: u64 = 0x676e_7021;

/// `G(n, p)` from the seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0,1]")));
    }
    let mut rng = SeedStream::new(seed).child(GNP, n as u64, 0).rng();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgorithmSpec {
    Luby,
    Greedy,
    /// Sampling factors `b_1, b_2, ...` before the final all-vertices phase.
    Residual(Vec<usize>),
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmSpec::Luby => f.write_str("luby"),
            AlgorithmSpec::Greedy => f.write_str("greedy"),
            AlgorithmSpec::Residual(bs) => {
                let parts: Vec<String> = bs.iter().map(ToString::to_string).collect();
                write!(f, "residual:{}", parts.join("/"))
            }
        }
    }
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "luby" => Ok(AlgorithmSpec::Luby),
            "greedy" => Ok(AlgorithmSpec::Greedy),
            _ => {
                let rest = s
                    .strip_prefix("residual:")
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm `{s}`")))?;
                let factors = rest
                    .split('/')
                    .map(|b| {
                        b.parse::<usize>()
                            .ok()
                            .filter(|&b| b > 0)
                            .ok_or_else(|| Error::ScheduleInvalid(format!("bad sampling factor `{b}` in `{s}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AlgorithmSpec::Residual(factors))
            }
        }
    }
}

impl AlgorithmSpec {
    /// Runs the protocol simulation, which includes the direct run.
    pub fn simulate(&self, seed: u64, stream: &EdgeStream) -> Result<ProtocolRun> {
        match self {
            AlgorithmSpec::Luby => simulate_protocol::<Luby>(&LubyConfig { seed }, stream),
            AlgorithmSpec::Greedy => simulate_protocol::<BufferedGreedy>(&GreedyConfig { seed }, stream),
            AlgorithmSpec::Residual(factors) => {
                let config = ResidualConfig::from_factors(stream.num_vertices(), factors, seed)?;
                simulate_protocol::<Residual>(&config, stream)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum InstanceSpec {
    Toy {
        n0: usize,
        levels: Vec<(u32, u32)>,
        #[serde(default)]
        seed: u64,
    },
    Gnp {
        n: usize,
        p: f64,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchOrder {
    #[default]
    PerPlayer,
    File,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    #[serde(default)]
    pub instances: Vec<InstanceSpec>,
    #[serde(default)]
    pub algorithms: Vec<String>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub order: BenchOrder,
}

impl BenchSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("bench spec: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    /// Rounds of the hard instance; empty for random graphs.
    pub r: Option<usize>,
    pub algorithm: String,
    pub passes: usize,
    pub peak_words: usize,
    pub cc_bits: usize,
    pub mis_valid: bool,
    pub seed: u64,
}

struct Prepared {
    graph: Graph,
    r: Option<usize>,
    players: Vec<Vec<Edge>>,
}

fn prepare(spec: &InstanceSpec, budget: &Budget) -> Result<Prepared> {
    match spec {
        InstanceSpec::Toy { n0, levels, seed } => {
            let inst = GenConfig::toy(*n0, levels.clone(), *seed).generate(budget)?;
            Ok(Prepared {
                graph: inst.graph(),
                r: Some(inst.rounds()),
                players: inst.players().to_vec(),
            })
        }
        InstanceSpec::Gnp { n, p, seed } => {
            let graph = random_graph(*n, *p, *seed)?;
            let players = vec![graph.edges().to_vec()];
            Ok(Prepared { graph, r: None, players })
        }
    }
}

/// One row per (instance, algorithm, seed), in that nesting order.
pub fn tradeoff_bench(spec: &BenchSpec, budget: &Budget) -> Result<Vec<BenchRow>> {
    let algorithms = spec
        .algorithms
        .iter()
        .map(|a| a.parse::<AlgorithmSpec>())
        .collect::<Result<Vec<_>>>()?;
    let prepared = spec
        .instances
        .iter()
        .map(|i| prepare(i, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for (i, _) in prepared.iter().enumerate() {
        for (a, _) in algorithms.iter().enumerate() {
            for &seed in &spec.seeds {
                jobs.push((i, a, seed));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(i, a, seed)| {
            let inst = &prepared[i];
            let n = inst.graph.num_vertices();
            let policy = match spec.order {
                BenchOrder::PerPlayer => OrderPolicy::PerPlayer,
                BenchOrder::File => OrderPolicy::File,
                BenchOrder::Random => OrderPolicy::Random(seed),
            };
            let stream = EdgeStream::with_policy(n, &inst.players, policy)?;
            let run = algorithms[a].simulate(seed, &stream)?;
            Ok(BenchRow {
                n,
                r: inst.r,
                algorithm: algorithms[a].to_string(),
                passes: run.direct.passes,
                peak_words: run.direct.peak_words,
                cc_bits: run.cc_bits(),
                mis_valid: run.matches_direct() && is_mis(&inst.graph, &run.direct.output),
                seed,
            })
        })
        .collect()
}

/// CSV with a header row, even when there are no rows.
pub fn rows_to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    writer
        .write_record(["n", "r", "algorithm", "passes", "peak_words", "cc_bits", "mis_valid", "seed"])
        .map_err(csv_err)?;
    for row in rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
