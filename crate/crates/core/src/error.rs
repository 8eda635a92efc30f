use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Validation(String),

    /// A structured input file failed to parse; `line` is 1-based and counts
    /// the header line for CSV inputs.
    #[error("{}:{line}: {message}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate ids: {}", summarize_ids(.0))]
    DuplicateIds(Vec<String>),

    #[error("unknown ids: {}", summarize_ids(.0))]
    UnknownIds(Vec<String>),

    #[error("class {0} is empty")]
    EmptyClass(String),

    #[error("class {class} has {count} members, fewer than k = {k}")]
    ClassSmallerThanK {
        class: String,
        count: usize,
        k: usize,
    },

    #[error("training diverged at epoch {epoch}: loss is not finite")]
    Diverged { epoch: usize },

    #[error("io error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(
        path: impl Into<PathBuf>,
        line: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::Malformed {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

/// Renders an id list for error messages, truncated so a pathological input
/// cannot produce a megabyte-long message.
fn summarize_ids(ids: &[String]) -> String {
    const SHOWN: usize = 10;
    if ids.len() <= SHOWN {
        ids.join(", ")
    } else {
        format!(
            "{}, … and {} more",
            ids[..SHOWN].join(", "),
            ids.len() - SHOWN
        )
    }
}
