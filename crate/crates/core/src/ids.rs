use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a frequency carrier within a sector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CarrierId(pub String);

impl CarrierId {
    pub fn new(id: impl Into<String>) -> Self {
        CarrierId(id.into())
    }
}

impl fmt::Display for CarrierId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<&str> for CarrierId {
    fn from(s: &str) -> Self {
        CarrierId(s.to_owned())
    }
}

/// Identifier of a power amplifier. One PA may serve several carriers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PaId(pub String);

impl PaId {
    pub fn new(id: impl Into<String>) -> Self {
        PaId(id.into())
    }
}

impl fmt::Display for PaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<&str> for PaId {
    fn from(s: &str) -> Self {
        PaId(s.to_owned())
    }
}
