use std::fmt;

use ringwalk::Error;

/// Process exit codes.
pub mod exit {
    pub const USAGE: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const DEGENERATE: i32 = 3;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: exit::USAGE, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: exit::INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Parse { .. } | Error::EmptyInput | Error::Io(_) => exit::INPUT,
            Error::InvalidParameter(_) | Error::NodeOutOfRange { .. } => exit::USAGE,
            Error::IsolatedStart(_) | Error::NoEdges | Error::AllIsolated | Error::EmptySet | Error::NoConvergence(_) => {
                exit::DEGENERATE
            }
        };
        CliError { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::input(err.to_string())
    }
}
