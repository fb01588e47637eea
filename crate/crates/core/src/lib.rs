pub mod avgfree;
pub mod budget;
pub mod dupgraph;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod hardness;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod streaming;

pub use budget::Budget;
pub use error::{Error, Result};
