//! Multiplex network data model.

mod csr;
mod layer;
mod multiplex;
mod validate;

use alloc::string::{String, ToString};
use core::borrow::Borrow;
use core::fmt;

use crate::error::{Error, Result};

pub(crate) use self::csr::Csr;
pub use self::layer::{normalize_incoming_weights, Edge, LayerGraph};
pub use self::multiplex::{
    assign_random_thresholds, fill_missing_thresholds, overlap_users, MultiplexNetwork,
};
pub use self::validate::{validate, ValidationReport, Violation};

/// Opaque, non-empty user identifier shared across layers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(String);

impl UserId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::EmptyUserId);
        }
        Ok(UserId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for UserId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl TryFrom<&str> for UserId {
    type Error = Error;

    fn try_from(s: &str) -> Result<Self> {
        UserId::new(s.to_string())
    }
}
