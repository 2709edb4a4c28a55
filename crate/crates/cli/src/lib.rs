//! Library side of the `holevo` command: scenario parsing, report emission
//! and the command drivers.

pub mod commands;
pub mod error;
pub mod report;
pub mod scenario;

pub use error::CliError;
pub use report::Report;
pub use scenario::Scenario;
