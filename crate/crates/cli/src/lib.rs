//! Command-line front end: algebra files, deterministic text output and a
//! result cache.

pub mod cache;
pub mod commands;
pub mod format;

pub use cache::{ResultCache, CACHE_DIR_VAR};
pub use commands::{execute, run, Cli, CliError, Command, Outcome};
pub use format::{parse_algebra, write_algebra, write_hopf, AlgebraFile, ParseError};
