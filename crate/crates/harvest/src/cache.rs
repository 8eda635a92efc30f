//! Disk cache of raw response bodies, keyed by the SHA-256 of the request
//! URL: `{cache_dir}/{sha256(url)}.json`. Replays make harvests offline-
//! reproducible.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{HarvestError, Result};

#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

impl ResponseCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ResponseCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(url: &str) -> String {
        let digest = Sha256::digest(url.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn path_for(&self, url: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(url)))
    }

    pub fn get(&self, url: &str) -> Result<Option<Vec<u8>>> {
        let path = self.path_for(url);
        match fs::read(&path) {
            Ok(body) => Ok(Some(body)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(HarvestError::Cache { path, source: e }),
        }
    }

    pub fn put(&self, url: &str, body: &[u8]) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| HarvestError::Cache {
            path: self.dir.clone(),
            source: e,
        })?;
        let path = self.path_for(url);
        fs::write(&path, body).map_err(|e| HarvestError::Cache { path, source: e })
    }
}
