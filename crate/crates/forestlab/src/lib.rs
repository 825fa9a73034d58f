//! Std companion to `forestlab-core`: file formats, parallel sampling
//! campaigns and the `forestlab` command-line tool.

pub mod campaign;
pub mod cli;
pub mod error;
pub mod formats;
pub mod schemas;

pub use error::{CliError, Result};
pub use forestlab_core as core;
