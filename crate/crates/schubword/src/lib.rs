//! Std companion to `schubword-core`: JSON and plain-text formats, batch
//! verification jobs and the `schubword` command-line front end.

pub mod ascii;
pub mod cli;
pub mod format;
pub mod verify;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] schubword_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
}
