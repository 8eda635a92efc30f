//! Semantic Scholar Graph API harvester: resolves DOIs to paper records and
//! collects citation contexts with pagination, rate limiting, retry, and a
//! disk cache that makes re-harvests fully offline and byte-reproducible.
//!
//! Transport and clock are injected so no test touches the network.

pub mod cache;
pub mod client;
pub mod clock;
pub mod config;
pub mod error;
pub mod harvest;
pub mod transport;

pub use cache::ResponseCache;
pub use client::{citations_url, paper_url, PaperHarvest, S2Client};
pub use clock::{Clock, ManualClock, SystemClock};
pub use config::{HarvestConfig, API_KEY_ENV, DEFAULT_BASE_URL};
pub use error::{HarvestError, Result};
pub use harvest::{harvest_corpus, HarvestReport};
pub use transport::{
    CountingTransport, HttpResponse, HttpTransport, OfflineTransport, StaticTransport, Transport,
};
