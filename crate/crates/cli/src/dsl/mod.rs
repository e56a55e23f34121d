//! Instance text format: expressions, section parser, loader.

pub mod expr;
pub mod instance;
pub mod parse;

pub use expr::{eval, parse_expr, print, Diag, Expr};
pub use instance::{load, Instance, LoadError, Overrides, ResolvedOptions};
pub use parse::{parse_instance, print_instance, ComponentSpec, InstanceFile, OptionsSpec, SeqSpec};
