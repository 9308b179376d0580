//! Batch pipeline behind the `egocircles` command: configuration, stage
//! runners and their flat-file artifacts.

pub mod config;
pub mod error;
pub mod pipeline;

pub use config::RunConfig;
pub use error::CliError;
