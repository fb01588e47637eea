//! Multi-party protocol obtained from a streaming algorithm.
//!
//! Players hold consecutive segments of the stream. In every pass each
//! player resumes the algorithm from the previous message, feeds its own
//! edges, and writes the algorithm's memory to the board; the last player
//! also closes the pass. One pass is one protocol round with `k` messages.
//!
//! Messages are padded to the longest message of their round, so every
//! round costs `k · width · 32` bits. Message boundaries and the final answer
//! are carried by the transcript framing and are not counted.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardness::Instance;
use crate::streaming::harness::{run_stream, EdgeStream, PassOutcome, StreamAlgorithm, StreamReport, MAX_PASSES};

pub const WORD_BITS: usize = 32;

/// Board contents: `rounds[pass][player]` is one message in words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    players: usize,
    rounds: Vec<Vec<Vec<u32>>>,
}

impl Transcript {
    pub fn num_players(&self) -> usize {
        self.players
    }

    pub fn num_rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn message(&self, round: usize, player: usize) -> &[u32] {
        &self.rounds[round][player]
    }

    /// Words every message of `round` is padded to.
    pub fn round_width(&self, round: usize) -> usize {
        self.rounds[round].iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Little-endian bytes of a message, zero-padded to the round width.
    pub fn message_bytes(&self, round: usize, player: usize) -> Vec<u8> {
        let mut bytes: Vec<u8> = self.rounds[round][player]
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .collect();
        bytes.resize(self.round_width(round) * 4, 0);
        bytes
    }

    /// Padded communication cost in bits.
    pub fn cc_bits(&self) -> usize {
        (0..self.rounds.len())
            .map(|r| self.round_width(r) * self.players * WORD_BITS)
            .sum()
    }

    /// Bits of the longest single message.
    pub fn max_message_bits(&self) -> usize {
        (0..self.rounds.len())
            .map(|r| self.round_width(r))
            .max()
            .unwrap_or(0)
            * WORD_BITS
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolRun {
    pub transcript: Transcript,
    pub answer: BTreeSet<usize>,
    /// The same algorithm run directly over the concatenated stream.
    pub direct: StreamReport,
}

impl ProtocolRun {
    pub fn passes(&self) -> usize {
        self.transcript.num_rounds()
    }

    pub fn cc_bits(&self) -> usize {
        self.transcript.cc_bits()
    }

    pub fn max_snapshot_bits(&self) -> usize {
        self.transcript.max_message_bits()
    }

    /// `cc_bits ≤ passes · k · max_snapshot_bits`.
    pub fn within_bound(&self) -> bool {
        self.cc_bits() <= self.passes() * self.transcript.num_players() * self.max_snapshot_bits()
    }

    pub fn matches_direct(&self) -> bool {
        self.answer == self.direct.output && self.passes() == self.direct.passes
    }
}

/// Simulates the protocol over the player segments of `stream`.
pub fn simulate_protocol<A: StreamAlgorithm>(config: &A::Config, stream: &EdgeStream) -> Result<ProtocolRun> {
    let n = stream.num_vertices();
    let k = stream.num_players();
    if k == 0 {
        return Err(Error::InvalidParameter("a protocol needs at least one player".into()));
    }
    let mut rounds: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut board: Option<Vec<u32>> = None;
    let answer = loop {
        let pass = rounds.len();
        if pass == MAX_PASSES {
            return Err(Error::BudgetExceeded {
                what: "protocol rounds",
                needed: MAX_PASSES as u128 + 1,
                cap: MAX_PASSES as u128,
            });
        }
        let mut messages = Vec::with_capacity(k);
        let mut done = None;
        for a in 0..k {
            let mut alg = match &board {
                None => A::init(config, n)?,
                Some(words) => A::restore(config, n, pass, words)?,
            };
            for &e in stream.segment(a) {
                alg.process(e);
            }
            if a + 1 == k && alg.end_pass() == PassOutcome::Done {
                done = Some(alg.output());
            }
            let words = alg.snapshot();
            messages.push(words.clone());
            board = Some(words);
        }
        rounds.push(messages);
        if let Some(answer) = done {
            break answer;
        }
    };
    Ok(ProtocolRun {
        transcript: Transcript { players: k, rounds },
        answer,
        direct: run_stream::<A>(config, stream)?,
    })
}

/// Protocol for a hard instance with one player per edge part.
pub fn simulate_protocol_from_stream<A: StreamAlgorithm>(config: &A::Config, inst: &Instance) -> Result<ProtocolRun> {
    let stream = EdgeStream::from_players(inst.num_vertices(), inst.players())?;
    simulate_protocol::<A>(config, &stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streaming::buffered::{BufferedGreedy, GreedyConfig};
    use crate::streaming::luby::{Luby, LubyConfig};

    #[test]
    fn buffered_greedy_is_one_round() {
        let s = EdgeStream::from_players(4, &[vec![(0, 1)], vec![(2, 3), (1, 2)]]).unwrap();
        let run = simulate_protocol::<BufferedGreedy>(&GreedyConfig { seed: 1 }, &s).unwrap();
        assert_eq!(run.transcript.num_rounds(), 1);
        assert_eq!(run.transcript.message(0, 0).len(), 2);
        assert_eq!(run.transcript.message(0, 1).len(), 6);
        assert_eq!(run.cc_bits(), 2 * 6 * 32);
        assert_eq!(run.transcript.message_bytes(0, 0).len(), 24);
        assert!(run.matches_direct());
        assert!(run.within_bound());
    }

    #[test]
    fn luby_rounds_are_passes() {
        let edges: Vec<_> = (0..11).map(|i| (i, i + 1)).collect();
        let (a, b) = edges.split_at(5);
        let s = EdgeStream::from_players(12, &[a.to_vec(), b.to_vec()]).unwrap();
        let run = simulate_protocol::<Luby>(&LubyConfig { seed: 9 }, &s).unwrap();
        assert!(run.matches_direct());
        assert_eq!(run.passes() % 2, 0);
        assert_eq!(run.cc_bits(), run.passes() * 2 * 24 * 32);
    }
}
