use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: file is empty")]
    EmptyFile { path: PathBuf },

    #[error("{path}: missing column `{column}` in header")]
    MissingColumn { path: PathBuf, column: String },

    #[error("{path}:{line}: cannot parse {field} from `{value}`")]
    ParseNumber {
        path: PathBuf,
        line: u64,
        field: &'static str,
        value: String,
    },

    #[error("{path}:{line}: {message}")]
    Record {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}:{line}: edge references unknown bus `{bus}`")]
    UnknownBus {
        path: PathBuf,
        line: u64,
        bus: String,
    },

    #[error("no buses left after filtering zero-voltage records")]
    EmptyDataset,

    #[error("all buses are coincident; extent is degenerate")]
    DegenerateExtent,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown method `{0}` (expected contour, glyph, voronoi, hex, quad or netcontour)")]
    UnknownMethod(String),

    #[error("field has no defined cells")]
    EmptyField,

    #[error("samples have zero variance")]
    ZeroVariance,

    #[error("config error: {0}")]
    Config(String),

    #[error("image encoding failed: {0}")]
    Encode(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
