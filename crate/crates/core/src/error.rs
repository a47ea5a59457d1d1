use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("plan schedule covers {covered} ticks but the horizon is {horizon} ticks")]
    ScheduleTooShort { covered: u64, horizon: u64 },

    #[error("history length mismatch on street {street}: {fir} entry counts vs {for_} exit counts")]
    HistoryMismatch { street: usize, fir: usize, for_: usize },

    #[error("rule base required; generate one with `build-rulebase`")]
    MissingRuleBase,

    #[error("rule base: {0}")]
    RuleBase(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
