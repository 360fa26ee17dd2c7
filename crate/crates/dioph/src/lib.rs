//! File formats, a rayon executor and the `dioph` command line over
//! [`dioph_core`].

pub mod cli;
pub mod exec;
pub mod format;

pub use cli::{run, CliError, RunConfig};
pub use exec::Pool;
