//! Instance format, report serialization and command orchestration for the
//! certificate engine. The binary front end in `main.rs` is a thin exit-code
//! wrapper around [`run`].

pub mod dsl;
pub mod report;
pub mod run;

pub use run::{run, CliError, Command, Options};
