//! File formats, report writers and subcommands behind the `spa-witness`
//! binary.

pub mod commands;
pub mod io;
pub mod report;
pub mod scan;

pub use io::{load_operator, save_operator, IoError, Metadata, OperatorFile};
