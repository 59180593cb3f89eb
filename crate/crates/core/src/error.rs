use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("malformed url: {0:?}")]
    MalformedUrl(String),

    #[error("domain {0:?} is missing from the trust or popularity table")]
    UnknownDomain(String),

    #[error("analysis window spans {days} day(s); at least 2 are required")]
    EmptyWindow { days: i64 },

    #[error("series lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("series must contain at least 2 observations, got {0}")]
    SeriesTooShort(usize),

    #[error("participation is undefined for an actor with zero total strength")]
    ZeroStrength,

    #[error("coupling strength {0} is outside [0, 1]")]
    CouplingDomain(f64),

    #[error("target series {0} has more than one driver")]
    MultiDriverUnsupported(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
