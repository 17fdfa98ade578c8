//! Command-line front end and live session service for the momentum engine.

pub mod analyze;
pub mod error;
pub mod options;
pub mod output;
pub mod profile;
pub mod protocol;
pub mod series;
pub mod server;
pub mod session;
pub mod simulate;
pub mod svg;

pub use error::CliError;
