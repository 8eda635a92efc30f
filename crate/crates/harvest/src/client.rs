//! Graph-API client: paper lookup by DOI and paginated citation-context
//! collection, with rate limiting, 429 backoff, and cache replay.

use std::collections::HashSet;
use std::sync::{Arc, Mutex};

use serde::Deserialize;

use repcite_core::corpus::{CitationContext, PaperRecord};

use crate::cache::ResponseCache;
use crate::clock::Clock;
use crate::config::HarvestConfig;
use crate::error::{HarvestError, Result};
use crate::transport::Transport;

pub fn paper_url(base: &str, doi: &str) -> String {
    format!("{base}/graph/v1/paper/DOI:{doi}?fields=title,venue,year,externalIds")
}

pub fn citations_url(base: &str, paper_id: &str, offset: usize, limit: usize) -> String {
    format!(
        "{base}/graph/v1/paper/{paper_id}/citations?fields=contexts,citingPaper.paperId,citingPaper.year&offset={offset}&limit={limit}"
    )
}

#[derive(Debug, Deserialize)]
struct PaperResponse {
    #[serde(rename = "paperId")]
    paper_id: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    venue: Option<String>,
    #[serde(default)]
    year: Option<i32>,
}

#[derive(Debug, Deserialize)]
struct CitationsPage {
    #[serde(default)]
    next: Option<usize>,
    #[serde(default)]
    data: Vec<CitationEntry>,
}

#[derive(Debug, Deserialize)]
struct CitationEntry {
    #[serde(default)]
    contexts: Option<Vec<String>>,
    #[serde(rename = "citingPaper", default)]
    citing_paper: Option<CitingPaper>,
}

#[derive(Debug, Deserialize)]
struct CitingPaper {
    #[serde(rename = "paperId", default)]
    paper_id: Option<String>,
}

/// Result of collecting one paper's citation contexts.
#[derive(Debug, Clone)]
pub struct PaperHarvest {
    pub contexts: Vec<CitationContext>,
    pub citations_seen: usize,
    pub empty_contexts_dropped: usize,
    pub duplicate_contexts_dropped: usize,
}

pub struct S2Client {
    config: HarvestConfig,
    api_key: Option<String>,
    transport: Arc<dyn Transport>,
    clock: Arc<dyn Clock>,
    cache: ResponseCache,
    last_request_ms: Mutex<Option<u64>>,
}

impl S2Client {
    pub fn new(
        config: HarvestConfig,
        transport: Arc<dyn Transport>,
        clock: Arc<dyn Clock>,
    ) -> Result<Self> {
        config.validate()?;
        let cache = ResponseCache::new(&config.cache_dir);
        let api_key = config.resolved_api_key();
        Ok(S2Client {
            config,
            api_key,
            transport,
            clock,
            cache,
            last_request_ms: Mutex::new(None),
        })
    }

    pub fn config(&self) -> &HarvestConfig {
        &self.config
    }

    pub fn cache(&self) -> &ResponseCache {
        &self.cache
    }

    /// Blocks until at least `min_request_interval_ms` has passed since the
    /// previous network request, then stamps the new request time.
    fn throttle(&self) {
        let mut last = self.last_request_ms.lock().unwrap();
        if let Some(at) = *last {
            let now = self.clock.now_ms();
            let earliest = at + self.config.min_request_interval_ms;
            if now < earliest {
                self.clock.sleep_ms(earliest - now);
            }
        }
        *last = Some(self.clock.now_ms());
    }

    /// Cache-first GET with retry-on-429. Only 200 bodies enter the cache.
    fn get_body(&self, url: &str) -> Result<Vec<u8>> {
        if let Some(body) = self.cache.get(url)? {
            return Ok(body);
        }
        let headers: Vec<(&str, &str)> = match &self.api_key {
            Some(key) => vec![("x-api-key", key.as_str())],
            None => Vec::new(),
        };
        let mut attempt = 0u32;
        loop {
            self.throttle();
            let response = self
                .transport
                .get(url, &headers)
                .map_err(|message| HarvestError::Transport {
                    url: url.to_string(),
                    message,
                })?;
            match response.status {
                200 => {
                    self.cache.put(url, &response.body)?;
                    return Ok(response.body);
                }
                404 => {
                    return Err(HarvestError::NotFound(url.to_string()));
                }
                429 => {
                    if attempt >= self.config.max_retries {
                        return Err(HarvestError::RateLimited {
                            url: url.to_string(),
                            retries: attempt,
                        });
                    }
                    let backoff =
                        self.config.min_request_interval_ms.max(500) * (1 << attempt.min(16));
                    log::warn!("429 from {url}; backing off {backoff} ms (attempt {attempt})");
                    self.clock.sleep_ms(backoff);
                    attempt += 1;
                }
                status => {
                    return Err(HarvestError::Status {
                        status,
                        url: url.to_string(),
                    });
                }
            }
        }
    }

    fn parse_json<'a, T: Deserialize<'a>>(url: &str, body: &'a [u8]) -> Result<T> {
        serde_json::from_slice(body).map_err(|e| HarvestError::Parse {
            url: url.to_string(),
            message: e.to_string(),
        })
    }

    /// Resolves a DOI to a paper record. Absent metadata fields stay absent.
    pub fn fetch_paper(&self, doi: &str) -> Result<PaperRecord> {
        if !doi.starts_with("10.") {
            return Err(HarvestError::InvalidDoi(doi.to_string()));
        }
        let url = paper_url(&self.config.base_url, doi);
        let body = self.get_body(&url).map_err(|e| match e {
            HarvestError::NotFound(_) => HarvestError::NotFound(doi.to_string()),
            other => other,
        })?;
        let response: PaperResponse = Self::parse_json(&url, &body)?;
        let paper_id = response.paper_id.ok_or_else(|| HarvestError::Parse {
            url: url.clone(),
            message: "response has no paperId".into(),
        })?;
        let mut record = PaperRecord::new(paper_id, doi);
        record.title = response.title;
        record.venue = response.venue;
        record.year = response.year;
        Ok(record)
    }

    /// Walks the citations endpoint with offset/limit pagination until
    /// exhausted. Whitespace-only contexts are dropped and counted; exact
    /// duplicate (citing, text) pairs across pages collapse to one record.
    /// Any page failure aborts the whole paper (per-paper atomicity).
    pub fn fetch_citation_contexts(&self, paper_id: &str) -> Result<PaperHarvest> {
        let mut harvest = PaperHarvest {
            contexts: Vec::new(),
            citations_seen: 0,
            empty_contexts_dropped: 0,
            duplicate_contexts_dropped: 0,
        };
        let mut seen_ids: HashSet<String> = HashSet::new();
        let mut offset = 0usize;
        loop {
            let url = citations_url(
                &self.config.base_url,
                paper_id,
                offset,
                self.config.page_limit,
            );
            let body = self.get_body(&url)?;
            let page: CitationsPage = Self::parse_json(&url, &body)?;
            harvest.citations_seen += page.data.len();
            for entry in page.data {
                let Some(citing_id) = entry.citing_paper.and_then(|c| c.paper_id) else {
                    log::warn!("citation of {paper_id} without citingPaper.paperId; skipped");
                    continue;
                };
                for raw in entry.contexts.unwrap_or_default() {
                    match CitationContext::new(paper_id, citing_id.as_str(), &raw) {
                        Ok(ctx) => {
                            if seen_ids.insert(ctx.context_id.clone()) {
                                harvest.contexts.push(ctx);
                            } else {
                                harvest.duplicate_contexts_dropped += 1;
                            }
                        }
                        Err(_) => harvest.empty_contexts_dropped += 1,
                    }
                }
            }
            match page.next {
                Some(next) if next > offset => offset = next,
                Some(next) => {
                    return Err(HarvestError::Parse {
                        url,
                        message: format!("non-advancing pagination: next {next} at offset {offset}"),
                    });
                }
                None => break,
            }
        }
        if harvest.empty_contexts_dropped > 0 {
            log::warn!(
                "{paper_id}: dropped {} empty/whitespace contexts",
                harvest.empty_contexts_dropped
            );
        }
        Ok(harvest)
    }
}
