//! Command-line front end for `kspectra-core`: graph file formats,
//! serializable reports and a parallel driver for grid verification.

pub mod cli;
pub mod driver;
pub mod format;
pub mod report;

pub use cli::{execute, run, Cli};
pub use format::{from_graph6, parse_graph, to_graph6, GraphJson};
pub use report::Status;
