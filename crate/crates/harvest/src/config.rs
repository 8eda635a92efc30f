use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{HarvestError, Result};

pub const DEFAULT_BASE_URL: &str = "https://api.semanticscholar.org";
pub const API_KEY_ENV: &str = "S2_API_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarvestConfig {
    pub base_url: String,
    /// Falls back to the `S2_API_KEY` environment variable when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub api_key: Option<String>,
    /// Citations page size, 1..=1000.
    pub page_limit: usize,
    pub max_retries: u32,
    pub min_request_interval_ms: u64,
    pub cache_dir: PathBuf,
}

impl HarvestConfig {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        HarvestConfig {
            base_url: DEFAULT_BASE_URL.to_string(),
            api_key: None,
            page_limit: 100,
            max_retries: 3,
            min_request_interval_ms: 1000,
            cache_dir: cache_dir.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=1000).contains(&self.page_limit) {
            return Err(HarvestError::Core(repcite_core::Error::Validation(
                format!("page_limit must be in 1..=1000, got {}", self.page_limit),
            )));
        }
        if self.base_url.is_empty() {
            return Err(HarvestError::Core(repcite_core::Error::Validation(
                "base_url must be non-empty".into(),
            )));
        }
        Ok(())
    }

    /// Explicit key if set, otherwise the environment.
    pub fn resolved_api_key(&self) -> Option<String> {
        self.api_key
            .clone()
            .or_else(|| std::env::var(API_KEY_ENV).ok())
    }
}
