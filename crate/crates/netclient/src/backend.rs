use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crossover_core::{BackendError, QueryBackend};
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use crate::cache::CountCache;
use crate::config::{RemoteConfig, QUERY_PLACEHOLDER};
use crate::extract::CountPattern;
use crate::limiter::{Clock, RateLimiter, SystemClock};
use crate::transport::{HttpTransport, Transport};
use crate::NetError;

/// RFC 3986 unreserved characters pass through; everything else is escaped.
const QUERY_ESCAPE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

pub struct RemoteBackend {
    config: RemoteConfig,
    pattern: CountPattern,
    limiter: RateLimiter,
    cache: CountCache,
    transport: Box<dyn Transport>,
    clock: Arc<dyn Clock>,
    requests: AtomicU64,
}

impl std::fmt::Debug for RemoteBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemoteBackend")
            .field("config", &self.config)
            .field("requests", &self.requests)
            .finish_non_exhaustive()
    }
}

impl RemoteBackend {
    pub fn new(config: RemoteConfig) -> Result<Self, NetError> {
        Self::with_parts(config, Box::new(HttpTransport::default()), Arc::new(SystemClock::new()))
    }

    pub fn with_parts(
        config: RemoteConfig,
        transport: Box<dyn Transport>,
        clock: Arc<dyn Clock>,
    ) -> Result<Self, NetError> {
        let pattern = config.validate()?;
        let cache = match &config.cache_path {
            Some(path) => CountCache::open(path)?,
            None => CountCache::in_memory(),
        };
        Ok(Self {
            limiter: RateLimiter::new(config.qps_limit),
            config,
            pattern,
            cache,
            transport,
            clock,
            requests: AtomicU64::new(0),
        })
    }

    pub fn config(&self) -> &RemoteConfig {
        &self.config
    }

    /// Requests actually dispatched (cache hits excluded, retries included).
    pub fn requests_sent(&self) -> u64 {
        self.requests.load(Ordering::Relaxed)
    }

    pub fn url_for(&self, query: &str) -> String {
        let encoded = utf8_percent_encode(query, QUERY_ESCAPE).to_string();
        self.config.url_template.replace(QUERY_PLACEHOLDER, &encoded)
    }

    /// Result count for `query`: cache first, then a rate-limited request
    /// with up to `max_retries` retries of transient failures
    /// (connection errors, 408, 429, 5xx), backing off
    /// `backoff_base · 2^attempt` between attempts.
    pub fn lookup(&self, query: &str) -> Result<u64, NetError> {
        if let Some(hit) = self.cache.get(query) {
            return Ok(hit);
        }
        let url = self.url_for(query);
        let attempts = self.config.max_retries + 1;
        let mut last = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                let factor = 1u32.checked_shl(attempt - 1).unwrap_or(u32::MAX);
                self.clock.sleep(self.config.backoff_base.saturating_mul(factor));
            }
            self.limiter.acquire(self.clock.as_ref());
            self.requests.fetch_add(1, Ordering::Relaxed);
            match self.transport.get(&url, &self.config.user_agent) {
                Err(e) => last = e.0,
                Ok(resp) if resp.status == 408 || resp.status == 429 || resp.status >= 500 => {
                    last = format!("HTTP {}", resp.status);
                }
                Ok(resp) if !(200..300).contains(&resp.status) => {
                    return Err(NetError::BackendRejected { status: resp.status });
                }
                Ok(resp) => {
                    let count = self.pattern.extract(&resp.body)?;
                    self.cache.insert(query, count)?;
                    return Ok(count);
                }
            }
        }
        Err(NetError::BackendUnavailable { attempts, last })
    }
}

impl QueryBackend for RemoteBackend {
    fn count(&self, query: &str) -> Result<u64, BackendError> {
        self.lookup(query).map_err(BackendError::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limiter::MockClock;
    use crate::transport::{HttpResponse, TransportError};
    use std::sync::Mutex;
    use std::time::Duration;

    /// Replays scripted responses and logs the clock time of every request.
    struct Scripted {
        script: Mutex<Vec<Result<HttpResponse, TransportError>>>,
        log: Arc<Mutex<Vec<(Duration, String)>>>,
        clock: Arc<MockClock>,
    }

    impl Transport for Scripted {
        fn get(&self, url: &str, _: &str) -> Result<HttpResponse, TransportError> {
            self.log.lock().unwrap().push((self.clock.now(), url.to_owned()));
            let mut script = self.script.lock().unwrap();
            if script.is_empty() {
                Ok(ok("About 42 results"))
            } else {
                script.remove(0)
            }
        }
    }

    fn ok(body: &str) -> HttpResponse {
        HttpResponse { status: 200, body: body.into() }
    }

    fn status(code: u16) -> Result<HttpResponse, TransportError> {
        Ok(HttpResponse { status: code, body: String::new() })
    }

    type Log = Arc<Mutex<Vec<(Duration, String)>>>;

    fn backend(
        config: RemoteConfig,
        script: Vec<Result<HttpResponse, TransportError>>,
    ) -> (RemoteBackend, Arc<MockClock>, Log) {
        let clock = Arc::new(MockClock::new());
        let log = Arc::new(Mutex::new(Vec::new()));
        let transport = Scripted { script: Mutex::new(script), log: log.clone(), clock: clock.clone() };
        let b = RemoteBackend::with_parts(config, Box::new(transport), clock.clone()).unwrap();
        (b, clock, log)
    }

    fn config() -> RemoteConfig {
        RemoteConfig {
            qps_limit: 5.0,
            max_retries: 3,
            backoff_base: Duration::from_millis(100),
            ..RemoteConfig::new("http://mock/search?q={Q}", r"About ([0-9][0-9,]*) results")
        }
    }

    #[test]
    fn fixture_count() {
        let (b, _, log) = backend(config(), vec![]);
        assert_eq!(b.lookup("abc").unwrap(), 42);
        assert_eq!(log.lock().unwrap()[0].1, "http://mock/search?q=abc");
    }

    #[test]
    fn queries_are_percent_encoded() {
        let (b, _, _) = backend(config(), vec![]);
        assert_eq!(b.url_for("a b&c/é~"), "http://mock/search?q=a%20b%26c%2F%C3%A9~");
    }

    #[test]
    fn ten_lookups_take_nine_intervals_of_mock_time() {
        let (b, clock, log) = backend(config(), vec![]);
        for i in 0..10 {
            b.lookup(&format!("q{i}")).unwrap();
        }
        assert!(clock.now() >= Duration::from_millis(1800), "{:?}", clock.now());
        let times: Vec<Duration> = log.lock().unwrap().iter().map(|e| e.0).collect();
        assert_eq!(times.len(), 10);
        assert_eq!(*times.last().unwrap(), Duration::from_millis(1800));
    }

    #[test]
    fn retries_transient_failures_with_exponential_backoff() {
        let script = vec![Err(TransportError("refused".into())), status(503), status(429)];
        let (b, clock, log) = backend(config(), script);
        assert_eq!(b.lookup("abc").unwrap(), 42);
        assert_eq!(log.lock().unwrap().len(), 4);
        // Backoff sleeps of 100, 200, 400 ms; the 200 ms rate interval is
        // already satisfied by the time each retry is dispatched.
        let backoffs: Vec<u128> = clock.sleeps().iter().map(|d| d.as_millis()).collect();
        assert_eq!(backoffs, vec![100, 100, 200, 400]);
    }

    #[test]
    fn exhausted_retries_are_unavailable() {
        let script = (0..4).map(|_| status(500)).collect();
        let (b, _, log) = backend(config(), script);
        let err = b.lookup("abc").unwrap_err();
        assert!(matches!(err, NetError::BackendUnavailable { attempts: 4, .. }), "{err}");
        assert_eq!(log.lock().unwrap().len(), 4);
        assert!(matches!(b.count("abc"), Ok(42)), "a later lookup can still succeed");
    }

    #[test]
    fn client_errors_are_not_retried() {
        let (b, _, log) = backend(config(), vec![status(403)]);
        assert!(matches!(b.lookup("abc"), Err(NetError::BackendRejected { status: 403 })));
        assert_eq!(log.lock().unwrap().len(), 1);
        assert!(matches!(b.count("zzz"), Ok(42)));
    }

    #[test]
    fn parse_failures_surface_and_are_not_cached() {
        let (b, _, _) = backend(config(), vec![Ok(ok("no results found"))]);
        assert!(matches!(b.count("abc"), Err(BackendError::Parse(_))));
        assert_eq!(b.lookup("abc").unwrap(), 42);
    }

    #[test]
    fn cache_hits_skip_the_network() {
        let (b, _, log) = backend(config(), vec![]);
        assert_eq!(b.lookup("abc").unwrap(), 42);
        assert_eq!(b.lookup("abc").unwrap(), 42);
        assert_eq!(log.lock().unwrap().len(), 1);
        assert_eq!(b.requests_sent(), 1);
    }
}
