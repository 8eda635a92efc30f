use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarvestError {
    #[error("invalid doi {0:?}: expected prefix \"10.\"")]
    InvalidDoi(String),

    #[error("paper not found: {0}")]
    NotFound(String),

    #[error("rate limited after {retries} retries: {url}")]
    RateLimited { url: String, retries: u32 },

    #[error("transport failure for {url}: {message}")]
    Transport { url: String, message: String },

    #[error("unexpected http status {status} for {url}")]
    Status { status: u16, url: String },

    #[error("malformed response for {url}: {message}")]
    Parse { url: String, message: String },

    #[error("cache io at {}: {source}", path.display())]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] repcite_core::Error),
}

pub type Result<T> = std::result::Result<T, HarvestError>;

impl HarvestError {
    /// True for failures worth recording per-DOI rather than aborting the
    /// whole harvest.
    pub fn is_per_paper(&self) -> bool {
        !matches!(self, HarvestError::Cache { .. })
    }
}
