//! Luby's algorithm with two passes per round.
//!
//! Pass A draws fresh public priorities and flags every undecided vertex
//! that has an undecided neighbor with a smaller `(priority, id)`; unflagged
//! undecided vertices join the MIS. Pass B removes the undecided neighbors
//! of MIS vertices. Memory is one status word and one flag word per vertex.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::streaming::harness::{public_hash, PassOutcome, StreamAlgorithm};

const PRIORITY: u64 = 0x6c75_6279_7072_696f;

const UNDECIDED: u32 = 0;
const IN: u32 = 1;
const OUT: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LubyConfig {
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Luby {
    seed: u64,
    pass: usize,
    status: Vec<u32>,
    flag: Vec<u32>,
}

impl Luby {
    fn priority(&self, v: usize) -> (u64, usize) {
        (public_hash(self.seed, PRIORITY, (self.pass / 2) as u64, v), v)
    }

    /// Completed rounds; a round is two passes.
    pub fn rounds(passes: usize) -> usize {
        passes.div_ceil(2)
    }
}

impl StreamAlgorithm for Luby {
    type Config = LubyConfig;

    fn name(_: &LubyConfig) -> String {
        "luby".into()
    }

    fn init(config: &LubyConfig, n: usize) -> Result<Self> {
        Ok(Luby {
            seed: config.seed,
            pass: 0,
            status: vec![UNDECIDED; n],
            flag: vec![0; n],
        })
    }

    fn process(&mut self, (a, b): Edge) {
        if self.pass.is_multiple_of(2) {
            if self.status[a] != UNDECIDED || self.status[b] != UNDECIDED {
                return;
            }
            let larger = if self.priority(a) < self.priority(b) { b } else { a };
            self.flag[larger] = 1;
        } else {
            for (x, y) in [(a, b), (b, a)] {
                if self.status[x] == IN && self.status[y] == UNDECIDED {
                    self.status[y] = OUT;
                }
            }
        }
    }

    fn end_pass(&mut self) -> PassOutcome {
        let outcome = if self.pass.is_multiple_of(2) {
            for v in 0..self.status.len() {
                if self.status[v] == UNDECIDED && self.flag[v] == 0 {
                    self.status[v] = IN;
                }
                self.flag[v] = 0;
            }
            PassOutcome::Continue
        } else if self.status.contains(&UNDECIDED) {
            PassOutcome::Continue
        } else {
            PassOutcome::Done
        };
        self.pass += 1;
        outcome
    }

    fn words(&self) -> usize {
        self.status.len() + self.flag.len()
    }

    fn snapshot(&self) -> Vec<u32> {
        let mut out = self.status.clone();
        out.extend_from_slice(&self.flag);
        out
    }

    fn restore(config: &LubyConfig, n: usize, pass_index: usize, words: &[u32]) -> Result<Self> {
        if words.len() != 2 * n {
            return Err(Error::InvalidParameter(format!(
                "Luby memory has {} words, expected {}",
                words.len(),
                2 * n
            )));
        }
        Ok(Luby {
            seed: config.seed,
            pass: pass_index,
            status: words[..n].to_vec(),
            flag: words[n..].to_vec(),
        })
    }

    fn output(&self) -> BTreeSet<usize> {
        (0..self.status.len()).filter(|&v| self.status[v] == IN).collect()
    }
}
