use std::path::PathBuf;

use crate::prefcore::{Alternative, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("alternative count {0} is outside the supported range 2..={max}", max = crate::prefcore::MAX_ALTERNATIVES)]
    AlternativeCount(usize),

    #[error("alternative index {index} out of range for m = {m}")]
    AlternativeOutOfRange { index: usize, m: usize },

    #[error("a pair must name two distinct alternatives, got {0:?} twice")]
    SameAlternative(Alternative),

    #[error("closure forces both {0:?} > {1:?} and {1:?} > {0:?}")]
    ClosureCreatesCycle(Alternative, Alternative),

    #[error("invalid preference: {0}")]
    InvalidPreference(Violation),

    #[error("agent {agent}: {source}")]
    Agent {
        agent: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("preference over {found} alternatives in a profile over {expected}")]
    MismatchedAlternatives { expected: usize, found: usize },

    #[error("invalid update order: {0}")]
    InvalidOrder(String),

    #[error("order space for m = {0} is too large to enumerate")]
    OrderSpaceTooLarge(usize),

    #[error("unknown consensus notion {0:?}")]
    UnknownNotion(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("bad profile document: {0}")]
    ProfileFormat(String),

    #[error("no transitive assignment found after {0} attempts")]
    RejectionCapExceeded(u64),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
