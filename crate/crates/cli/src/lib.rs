//! Library side of the `shallowq` command: the circuit file format, reports
//! and command implementations.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{run, Cli, CliError, Output};
pub use format::{circuit_to_json, parse_circuit, CircuitFile};
