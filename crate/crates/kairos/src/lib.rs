//! File formats, report rendering and the `kairos` command line on top of
//! `kairos-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod jobs;
pub mod model_file;
pub mod report;

pub use error::{Error, Result};
