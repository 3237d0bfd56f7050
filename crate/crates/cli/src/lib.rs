//! Command-line drivers for `rieszcap`: shape files, run configuration,
//! manifests and the experiment commands.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod manifest;
pub mod shape_file;

pub use error::{CliError, CliResult};
