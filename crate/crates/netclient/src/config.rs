use std::path::PathBuf;
use std::time::Duration;

use crate::extract::CountPattern;
use crate::NetError;

/// Placeholder replaced by the percent-encoded query.
pub const QUERY_PLACEHOLDER: &str = "{Q}";

/// Recognized keys of the `remote.` config section.
pub const REMOTE_KEYS: [&str; 7] =
    ["url_template", "count_pattern", "qps", "max_retries", "backoff_ms", "cache", "user_agent"];

#[derive(Debug, Clone, PartialEq)]
pub struct RemoteConfig {
    pub url_template: String,
    pub count_pattern: String,
    pub qps_limit: f64,
    pub max_retries: u32,
    pub backoff_base: Duration,
    pub cache_path: Option<PathBuf>,
    pub user_agent: String,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            url_template: String::new(),
            count_pattern: r"([0-9][0-9,]*) results".into(),
            qps_limit: 1.0,
            max_retries: 3,
            backoff_base: Duration::from_millis(500),
            cache_path: None,
            user_agent: concat!("crossover/", env!("CARGO_PKG_VERSION")).into(),
        }
    }
}

impl RemoteConfig {
    pub fn new(url_template: impl Into<String>, count_pattern: impl Into<String>) -> Self {
        Self { url_template: url_template.into(), count_pattern: count_pattern.into(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<CountPattern, NetError> {
        let slots = self.url_template.matches(QUERY_PLACEHOLDER).count();
        if slots != 1 {
            return Err(NetError::Config(format!(
                "url_template must contain {QUERY_PLACEHOLDER} exactly once, found {slots}"
            )));
        }
        if !(self.qps_limit.is_finite() && self.qps_limit > 0.0) {
            return Err(NetError::Config(format!("qps must be positive, got {}", self.qps_limit)));
        }
        CountPattern::new(&self.count_pattern)
    }

    /// Sets a field from a `remote.<key>` config entry (without the prefix).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), NetError> {
        let value = value.trim();
        let bad = || NetError::Config(format!("remote.{key}: cannot parse {value:?}"));
        match key {
            "url_template" => self.url_template = value.into(),
            "count_pattern" => self.count_pattern = value.into(),
            "qps" => self.qps_limit = value.parse().map_err(|_| bad())?,
            "max_retries" => self.max_retries = value.parse().map_err(|_| bad())?,
            "backoff_ms" => self.backoff_base = Duration::from_millis(value.parse().map_err(|_| bad())?),
            "cache" => self.cache_path = (!value.is_empty()).then(|| PathBuf::from(value)),
            "user_agent" => self.user_agent = value.into(),
            other => return Err(NetError::Config(format!("unknown key remote.{other}"))),
        }
        Ok(())
    }
}
