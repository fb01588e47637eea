//! Streaming MIS algorithms, the pass/space harness, and the protocol simulation.

pub mod bench;
pub mod buffered;
pub mod harness;
pub mod luby;
pub mod protocol;
pub mod residual;

pub use bench::{random_graph, rows_to_csv, tradeoff_bench, AlgorithmSpec, BenchRow, BenchSpec, InstanceSpec};
pub use buffered::{BufferedGreedy, GreedyConfig};
pub use harness::{public_hash, random_order, run_stream, EdgeStream, OrderPolicy, PassOutcome, StreamAlgorithm, StreamReport};
pub use luby::{Luby, LubyConfig};
pub use protocol::{simulate_protocol, simulate_protocol_from_stream, ProtocolRun, Transcript};
pub use residual::{max_alive_degree, run_residual, PhaseStats, Residual, ResidualConfig, SampleSize};
