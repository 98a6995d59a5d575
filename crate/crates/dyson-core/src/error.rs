use thiserror::Error;

/// Errors reported by the library.
///
/// `Domain` marks inputs outside an operation's stated hypotheses (these map
/// to CLI exit code 2). `Refused` marks requests rejected by a combinatorial
/// guard before any work is done. `Unconverged` marks numeric procedures
/// that hit their iteration or term budget.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("did not converge: {0}")]
    Unconverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
