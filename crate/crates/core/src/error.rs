use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised while decoding a single two-line element set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TleError {
    #[error("TLE format error: {0}")]
    Format(String),
    #[error("TLE line {line} checksum mismatch: expected {expected}, found {found}")]
    Checksum { line: u8, expected: u8, found: u8 },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} out of range: {value}")]
    Range { what: String, value: f64 },

    #[error(transparent)]
    Tle(#[from] TleError),

    #[error("line {line}: {source}")]
    TleAt { line: usize, source: TleError },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("unsupported orbit: eccentricity {0} is not elliptical")]
    UnsupportedOrbit(f64),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("degenerate attitude: boresight declination {0} rad is at a pole")]
    DegenerateAttitude(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn range(what: impl Into<String>, value: f64) -> Self {
        Error::Range {
            what: what.into(),
            value,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
