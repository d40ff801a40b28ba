use std::fmt;
use std::io;
use std::path::Path;

use serde::Serialize;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_DIAGNOSTIC: u8 = 3;

/// Error reported on stderr as `{"error": {"code", "message", "t"}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub t: Option<f64>,
    pub exit: u8,
}

impl CliError {
    pub fn config(code: &str, message: impl Into<String>) -> Self {
        CliError { code: code.to_string(), message: message.into(), t: None, exit: EXIT_CONFIG }
    }

    pub fn at(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        let code = if err.kind() == io::ErrorKind::NotFound { "IO_NOT_FOUND" } else { "IO_ERROR" };
        CliError::config(code, format!("{}: {err}", path.display()))
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            code: &'a str,
            message: &'a str,
            t: Option<f64>,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        serde_json::to_string(&Wrapper { error: Body { code: &self.code, message: &self.message, t: self.t } })
            .expect("error object serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<psi_core::Error> for CliError {
    fn from(e: psi_core::Error) -> Self {
        use psi_core::Error::*;
        let exit = match e {
            InvalidConfig(_) | InvalidWeights(_) | InvalidGrid(_) | InvalidInterval { .. } | TauOutsideGrid { .. } => {
                EXIT_CONFIG
            }
            _ => EXIT_SOLVER,
        };
        CliError { code: e.code().to_string(), message: e.to_string(), t: e.location(), exit }
    }
}

pub type CliResult<T> = Result<T, CliError>;
