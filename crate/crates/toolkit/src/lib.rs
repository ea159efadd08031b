//! File formats, sweeps and verification tooling on top of `qse-core`.

pub mod demo;
pub mod error;
pub mod formats;
pub mod scan;
pub mod verify;

pub use error::{Result, ToolkitError};
