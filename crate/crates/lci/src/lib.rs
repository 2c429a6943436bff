//! Files, pipeline and experiment harness around `lci-core`.

pub mod error;
pub mod experiment;
pub mod format;
pub mod ingest;
pub mod pipeline;

pub use lci_core as core;

pub use crate::error::{LciError, Result};
