//! Library side of the `grpiso` command: file formats, reports and the
//! command implementations. `main.rs` only parses arguments.

pub mod cayley;
pub mod commands;
pub mod report;

pub use cayley::{format_cayley, parse_cayley, parse_cayley_str, write_cayley, CayleyFileError};
pub use commands::*;
pub use report::{RunReport, Timings, Verdict};
