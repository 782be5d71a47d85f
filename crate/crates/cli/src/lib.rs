//! Command-line front end for `cstar-core`: matrix and tuple I/O, one
//! subcommand per library operation, and the verification suite.
//!
//! JSON records go to stdout (or `--out`), a short human summary to stderr.
//! Exit codes: 0 success, 1 suite failure, 2 usage or input error,
//! 3 violation found, 4 numerical failure.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod suite;

pub use app::run;
pub use config::RunConfig;
pub use error::{CliError, EXIT_NUMERICAL, EXIT_OK, EXIT_SUITE_FAILED, EXIT_USAGE, EXIT_VIOLATION};
pub use suite::{run_suite, SuiteReport};
