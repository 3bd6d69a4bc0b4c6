//! Command-line front end for `parclass-core`: argument parsing, JSON and
//! CSV output.

pub mod app;
pub mod error;
pub mod schema;

pub use app::{run, Cli};
pub use error::CliError;
