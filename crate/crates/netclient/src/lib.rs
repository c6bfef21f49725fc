//! Remote result-count backend.
//!
//! Queries are substituted into a URL template, sent through a burst-1 token
//! bucket with retries and exponential backoff, and the result count is
//! pulled out of the response body with a user-supplied pattern. Counts are
//! cached in an append-only file so repeated queries never hit the network.
//!
//! A failed request is always an error; it is never reported as zero
//! results.

mod backend;
mod cache;
mod config;
mod extract;
mod limiter;
pub mod mock;
mod transport;

use thiserror::Error;

pub use backend::RemoteBackend;
pub use cache::CountCache;
pub use config::{RemoteConfig, REMOTE_KEYS};
pub use extract::{extract_count, CountPattern};
pub use limiter::{Clock, MockClock, RateLimiter, SystemClock};
pub use transport::{HttpResponse, HttpTransport, Transport, TransportError};

use crossover_core::BackendError;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("invalid remote config: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("backend unavailable after {attempts} attempts: {last}")]
    BackendUnavailable { attempts: u32, last: String },
    #[error("backend rejected the request with HTTP {status}")]
    BackendRejected { status: u16 },
    #[error("cache file line {line}: {message}")]
    Cache { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<NetError> for BackendError {
    fn from(e: NetError) -> Self {
        match e {
            NetError::Parse(m) => BackendError::Parse(m),
            NetError::BackendRejected { .. } => BackendError::Rejected(e.to_string()),
            other => BackendError::Unavailable(other.to_string()),
        }
    }
}
