//! The `misr 1` instance file.
//!
//! ```text
//! misr 1
//! {"format":"misr","version":1,...}
//! player 0 <count>
//! <u> <v>
//! ...
//! player 1 <count>
//! ...
//! ```
//!
//! The JSON line records everything needed to resample the instance. Edge
//! lines are sorted and use global vertex ids.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::hardness::instance::{sample_instance, Hierarchy, Instance, Node, ToyParams};
use crate::hardness::params::compute_parameters;
use crate::rng::SeedStream;

/// How the per-level DUP graphs are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum ParamMode {
    /// Explicit `(ell, d)` per level.
    Toy { levels: Vec<(u32, u32)> },
    /// Sizes from the parameter equations for `n` vertices.
    Formula { n: u64 },
}

/// Everything that determines a sampled instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub r: usize,
    pub n0: usize,
    #[serde(flatten)]
    pub mode: ParamMode,
    pub eta_p: f64,
    pub eta_q: f64,
    pub seed: u64,
}

impl GenConfig {
    pub fn toy(n0: usize, levels: Vec<(u32, u32)>, seed: u64) -> Self {
        GenConfig {
            r: levels.len(),
            n0,
            mode: ParamMode::Toy { levels },
            eta_p: 1.0,
            eta_q: 1.0,
            seed,
        }
    }

    pub fn hierarchy(&self, budget: &Budget) -> Result<Hierarchy> {
        match &self.mode {
            ParamMode::Toy { levels } => {
                if levels.len() != self.r {
                    return Err(Error::InvalidParameter(format!(
                        "{} toy levels given for r={}",
                        levels.len(),
                        self.r
                    )));
                }
                Hierarchy::toy(
                    &ToyParams {
                        n_0: self.n0,
                        levels: levels.clone(),
                    },
                    budget,
                )
            }
            ParamMode::Formula { n } => {
                let table =
                    compute_parameters(self.r, *n as u128, self.n0 as u128, self.eta_p, self.eta_q)?;
                Hierarchy::formula(&table, budget)
            }
        }
    }

    pub fn generate(&self, budget: &Budget) -> Result<Instance> {
        let h = self.hierarchy(budget)?;
        sample_instance(&h, SeedStream::new(self.seed))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct LevelMeta {
    level: usize,
    k: usize,
    ell: u32,
    d: u32,
    p: usize,
    q: usize,
    dup_layer_size: usize,
    padded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Meta {
    format: String,
    version: u32,
    #[serde(flatten)]
    config: GenConfig,
    vertices: usize,
    layer_size: usize,
    dup_levels: Vec<LevelMeta>,
    /// Entry `r - j` lists the special index of every level-`j` instance in
    /// depth-first `(i, j)` order.
    t_by_level: Vec<Vec<usize>>,
}

fn collect_t(inst: &Instance, out: &mut Vec<Vec<usize>>) {
    if let Node::Recursive { t, subs, .. } = inst.node() {
        let depth = out.len() - inst.rounds();
        out[depth].push(*t);
        for sub in subs.iter().flatten() {
            collect_t(sub, out);
        }
    }
}

pub fn write_misr(config: &GenConfig, inst: &Instance) -> String {
    let mut levels = Vec::new();
    let mut cursor = Some(inst);
    while let Some(node) = cursor {
        if let Some(dup) = node.dup() {
            let p = dup.params();
            levels.push(LevelMeta {
                level: node.rounds(),
                k: p.k,
                ell: p.ell,
                d: p.d,
                p: p.p,
                q: p.q,
                dup_layer_size: dup.layer_size(),
                padded: p.padded,
            });
        }
        cursor = node.sub(0, 0);
    }
    let mut t_by_level = vec![Vec::new(); inst.rounds()];
    collect_t(inst, &mut t_by_level);
    let meta = Meta {
        format: "misr".into(),
        version: 1,
        config: config.clone(),
        vertices: inst.num_vertices(),
        layer_size: inst.layer_size(),
        dup_levels: levels,
        t_by_level,
    };
    let mut out = String::from("misr 1\n");
    out.push_str(&serde_json::to_string(&meta).expect("metadata serializes"));
    out.push('\n');
    for (a, edges) in inst.players().iter().enumerate() {
        let _ = writeln!(out, "player {a} {}", edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "{u} {v}");
        }
    }
    out
}

/// A parsed instance file.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub config: GenConfig,
    /// Structure resampled from the metadata, carrying the file's edges.
    pub instance: Instance,
    /// Whether the file's edges equal those the seed produces.
    pub matches_seed: bool,
}

pub fn parse_misr(text: &str, budget: &Budget) -> Result<LoadedInstance> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "misr 1")) => {}
        _ => return Err(Error::parse(1, "expected header `misr 1`")),
    }
    let (line_no, json) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing metadata line"))?;
    let meta: Meta =
        serde_json::from_str(json).map_err(|e| Error::parse(line_no, format!("metadata: {e}")))?;
    if meta.format != "misr" || meta.version != 1 {
        return Err(Error::parse(line_no, "unsupported format or version"));
    }
    let mut players: Vec<Vec<Edge>> = Vec::new();
    let mut expected_count = 0usize;
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("`{s}` is not a non-negative integer")))
        };
        if fields[0] == "player" {
            if fields.len() != 3 {
                return Err(Error::parse(line_no, "expected `player <a> <count>`"));
            }
            if let Some(last) = players.last() {
                if last.len() != expected_count {
                    return Err(Error::parse(line_no, "previous player section has the wrong count"));
                }
            }
            if parse(fields[1])? != players.len() {
                return Err(Error::parse(line_no, "player sections out of order"));
            }
            expected_count = parse(fields[2])?;
            players.push(Vec::with_capacity(expected_count));
        } else {
            let list = players
                .last_mut()
                .ok_or_else(|| Error::parse(line_no, "edge before any player section"))?;
            if fields.len() != 2 {
                return Err(Error::parse(line_no, "expected `<u> <v>`"));
            }
            list.push((parse(fields[0])?, parse(fields[1])?));
        }
    }
    if players.last().is_some_and(|l| l.len() != expected_count) {
        return Err(Error::parse(0, "last player section has the wrong count"));
    }
    let sampled = meta.config.generate(budget)?;
    if sampled.num_vertices() != meta.vertices {
        return Err(Error::parse(2, "vertex count disagrees with the parameters"));
    }
    let instance = sampled.with_players(players)?;
    let matches_seed = instance == sampled;
    Ok(LoadedInstance {
        config: meta.config,
        instance,
        matches_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_exact() {
        let config = GenConfig::toy(4, vec![(2, 1)], 7);
        let inst = config.generate(&Budget::default()).unwrap();
        let text = write_misr(&config, &inst);
        assert!(text.starts_with("misr 1\n{\"format\":\"misr\",\"version\":1,\"r\":1,\"n0\":4,\"mode\":\"toy\""));
        let loaded = parse_misr(&text, &Budget::default()).unwrap();
        assert!(loaded.matches_seed);
        assert_eq!(loaded.instance, inst);
        assert_eq!(write_misr(&loaded.config, &loaded.instance), text);
    }

    #[test]
    fn edited_edges_are_detected() {
        let config = GenConfig::toy(2, vec![], 3);
        let inst = config.generate(&Budget::default()).unwrap();
        let text = write_misr(&config, &inst);
        let flipped = if inst.players()[0].is_empty() {
            text.replace("player 0 0", "player 0 1\n0 1")
        } else {
            text.replace("player 0 1\n0 1", "player 0 0")
        };
        let loaded = parse_misr(&flipped, &Budget::default()).unwrap();
        assert!(!loaded.matches_seed);
    }

    #[test]
    fn formula_mode_round_trip() {
        let config = GenConfig {
            r: 1,
            n0: 4,
            mode: ParamMode::Formula { n: 64 },
            eta_p: 1.0,
            eta_q: 1.0,
            seed: 5,
        };
        let inst = config.generate(&Budget::default()).unwrap();
        assert_eq!(inst.num_vertices(), 64);
        let text = write_misr(&config, &inst);
        assert!(parse_misr(&text, &Budget::default()).unwrap().matches_seed);
    }
}
