use std::fmt;

use wavequbit::relation::RelationError;
use wavequbit::{EngineError, QubitError, SignalError};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// An error with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn context(self, what: impl fmt::Display) -> Self {
        Self {
            message: format!("{what}: {}", self.message),
            ..self
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<SignalError> for CliError {
    fn from(e: SignalError) -> Self {
        let code = match e {
            SignalError::Io { .. } | SignalError::Parse { .. } => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        let code = match &e {
            EngineError::Io { .. }
            | EngineError::Parse { .. }
            | EngineError::Signal(SignalError::Io { .. } | SignalError::Parse { .. }) => EXIT_USAGE,
            EngineError::Convergence(_) | EngineError::Extent { .. } => EXIT_NUMERIC,
            _ => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<QubitError> for CliError {
    fn from(e: QubitError) -> Self {
        match e {
            QubitError::Engine(inner) => inner.into(),
            QubitError::Io { .. } | QubitError::Json(_) => Self::usage(e.to_string()),
            _ => Self {
                code: EXIT_DOMAIN,
                message: e.to_string(),
            },
        }
    }
}

impl From<RelationError> for CliError {
    fn from(e: RelationError) -> Self {
        let code = match e {
            RelationError::Io { .. } => EXIT_USAGE,
            RelationError::NonFinite { .. } => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}
