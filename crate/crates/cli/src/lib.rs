//! Command-line front end: expression parsing, problem specs, the four
//! subcommands and their JSON reports.

pub mod commands;
pub mod error;
pub mod parse;
pub mod problem;
pub mod report;

pub use commands::{run, Command, CommandOutput};
pub use error::{CliError, ExitClass};
pub use parse::{parse_expression, parse_polynomial, ParseError, ParseErrorKind};
pub use problem::{Overrides, ProblemSpec, RhoSetting};
