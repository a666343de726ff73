//! Error classification for process exit codes: 1 = validation (bad
//! config, arguments, or input files), 2 = runtime failure, 3 = an
//! acceptance/oracle suite failed.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
    Acceptance(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Self::Runtime(msg.into())
    }

    pub fn acceptance(msg: impl Into<String>) -> Self {
        Self::Acceptance(msg.into())
    }

    pub fn code(&self) -> u8 {
        match self {
            Self::Validation(_) => 1,
            Self::Runtime(_) => 2,
            Self::Acceptance(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Validation(m) => write!(f, "{m}"),
            Self::Runtime(m) => write!(f, "{m}"),
            Self::Acceptance(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<contagion::GraphError> for CliError {
    fn from(e: contagion::GraphError) -> Self {
        match e {
            contagion::GraphError::Io { .. } => Self::Runtime(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

impl From<contagion::SimulateError> for CliError {
    fn from(e: contagion::SimulateError) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<contagion::bounds::BoundsError> for CliError {
    fn from(e: contagion::bounds::BoundsError) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<contagion::MaximizeError> for CliError {
    fn from(e: contagion::MaximizeError) -> Self {
        Self::Validation(e.to_string())
    }
}

impl From<contagion::bandit::BanditError> for CliError {
    fn from(e: contagion::bandit::BanditError) -> Self {
        match e {
            contagion::bandit::BanditError::NormalizationFailed { .. } => {
                Self::Runtime(e.to_string())
            }
            _ => Self::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}
