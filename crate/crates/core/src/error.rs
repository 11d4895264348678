use thiserror::Error;

use crate::model::Tid;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no unit utility for item `{item}`")]
    MissingUtility { item: String },

    #[error("invalid unit utility {value} for item `{item}` (must be positive)")]
    InvalidUtility { item: String, value: f64 },

    #[error("pattern is not contained in transaction {tid}")]
    NotSupporting { tid: Tid },

    #[error("pattern has zero support")]
    ZeroSupport,

    #[error("prefix UO-nlist has no tuple for transaction {tid}")]
    PrefixTupleMissing { tid: Tid },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: transaction utility {declared} does not match item utility sum {computed}")]
    Consistency {
        line: usize,
        declared: f64,
        computed: f64,
    },

    #[error("invalid mining parameters: {0}")]
    InvalidParams(String),

    #[error("item vocabulary of {items} exceeds the enumeration cap of {cap}")]
    EnumerationGuard { items: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures caused by user input (bad files, flags, guard refusals)
    /// rather than by the miner itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MissingUtility { .. }
                | Error::InvalidUtility { .. }
                | Error::Parse { .. }
                | Error::Consistency { .. }
                | Error::InvalidParams(_)
                | Error::EnumerationGuard { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
