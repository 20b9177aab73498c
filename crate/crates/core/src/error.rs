use std::fmt;

use thiserror::Error;

use crate::controllers::ControlError;
use crate::energy::EnergyError;
use crate::geometry::GeometryError;

/// A rejected scenario, located by key and (when parsed from text) line.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            key: None,
            line: None,
            message: message.into(),
        }
    }

    pub fn at_key(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: Some(key.into()),
            line: None,
            message: message.into(),
        }
    }

    pub fn with_line(mut self, line: Option<usize>) -> Self {
        self.line = self.line.or(line);
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "`{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

/// Failure while a validated scenario is running.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("step {step}: {source}")]
    Control { step: u32, source: ControlError },
    #[error("step {step}, robot {robot}: {source}")]
    Energy {
        step: u32,
        robot: usize,
        source: EnergyError,
    },
    #[error("step {step}: {source}")]
    Geometry { step: u32, source: GeometryError },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    Config(#[from] ConfigError),
    #[error("simulation failed: {0}")]
    Sim(#[from] SimError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit status: 1 for bad input, 2 for anything that failed at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Sim(_) | Error::Io { .. } => 2,
        }
    }
}
