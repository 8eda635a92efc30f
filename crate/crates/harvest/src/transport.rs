//! Injected HTTP layer so harvesting logic is testable without a network.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

/// A raw HTTP response: status plus body bytes.
#[derive(Debug, Clone)]
pub struct HttpResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

/// Minimal blocking GET abstraction. Implementations return `Err` only for
/// transport-level failures; HTTP error statuses come back as responses.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str, headers: &[(&str, &str)]) -> Result<HttpResponse, String>;
}

/// Real HTTP transport.
pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Self {
        HttpTransport {
            client: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(30))
                .build()
                .expect("reqwest client construction cannot fail with static config"),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str, headers: &[(&str, &str)]) -> Result<HttpResponse, String> {
        let mut request = self.client.get(url);
        for (name, value) in headers {
            request = request.header(*name, *value);
        }
        let response = request.send().map_err(|e| e.to_string())?;
        let status = response.status().as_u16();
        let body = response.bytes().map_err(|e| e.to_string())?.to_vec();
        Ok(HttpResponse { status, body })
    }
}

/// Counts requests passing through to the inner transport; used to verify
/// cache behavior and request budgets.
pub struct CountingTransport<T: Transport> {
    inner: T,
    count: AtomicU64,
}

impl<T: Transport> CountingTransport<T> {
    pub fn new(inner: T) -> Self {
        CountingTransport {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn requests(&self) -> u64 {
        self.count.load(Ordering::SeqCst)
    }
}

impl<T: Transport> Transport for CountingTransport<T> {
    fn get(&self, url: &str, headers: &[(&str, &str)]) -> Result<HttpResponse, String> {
        self.count.fetch_add(1, Ordering::SeqCst);
        self.inner.get(url, headers)
    }
}

/// Serves canned responses from an in-memory map, keyed by exact URL.
#[derive(Default)]
pub struct StaticTransport {
    responses: HashMap<String, HttpResponse>,
}

impl StaticTransport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, url: impl Into<String>, status: u16, body: impl Into<Vec<u8>>) {
        self.responses.insert(
            url.into(),
            HttpResponse {
                status,
                body: body.into(),
            },
        );
    }
}

impl Transport for StaticTransport {
    fn get(&self, url: &str, _headers: &[(&str, &str)]) -> Result<HttpResponse, String> {
        self.responses
            .get(url)
            .cloned()
            .ok_or_else(|| format!("no canned response for {url}"))
    }
}

/// Refuses every request; cache hits are the only way to harvest.
pub struct OfflineTransport;

impl Transport for OfflineTransport {
    fn get(&self, url: &str, _headers: &[(&str, &str)]) -> Result<HttpResponse, String> {
        Err(format!("offline mode: refusing network request to {url}"))
    }
}
