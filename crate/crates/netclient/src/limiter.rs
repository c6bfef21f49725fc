//! Burst-1 token bucket driven by a pluggable clock.

use std::sync::Mutex;
use std::time::{Duration, Instant};

pub trait Clock: Send + Sync {
    /// Time elapsed since the clock's origin.
    fn now(&self) -> Duration;
    fn sleep(&self, d: Duration);
}

#[derive(Debug)]
pub struct SystemClock {
    origin: Instant,
}

impl SystemClock {
    pub fn new() -> Self {
        Self { origin: Instant::now() }
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// Virtual time: `sleep` advances the clock instantly.
#[derive(Debug, Default)]
pub struct MockClock {
    now: Mutex<Duration>,
    slept: Mutex<Vec<Duration>>,
}

impl MockClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&self, d: Duration) {
        *self.now.lock().unwrap() += d;
    }

    /// Every sleep requested so far, in order.
    pub fn sleeps(&self) -> Vec<Duration> {
        self.slept.lock().unwrap().clone()
    }
}

impl Clock for MockClock {
    fn now(&self) -> Duration {
        *self.now.lock().unwrap()
    }

    fn sleep(&self, d: Duration) {
        self.slept.lock().unwrap().push(d);
        self.advance(d);
    }
}

/// Admits at most one request per `1/qps` seconds with a burst of one.
///
/// Callers block in [`RateLimiter::acquire`] until their slot; slots are
/// handed out under a lock, so concurrent callers are serialized.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next_slot: Mutex<Option<Duration>>,
}

impl RateLimiter {
    pub fn new(qps: f64) -> Self {
        assert!(qps > 0.0 && qps.is_finite(), "qps must be positive");
        Self { interval: Duration::from_secs_f64(1.0 / qps), next_slot: Mutex::new(None) }
    }

    pub fn interval(&self) -> Duration {
        self.interval
    }

    /// Waits for a token and returns the clock time at which it was granted.
    pub fn acquire(&self, clock: &dyn Clock) -> Duration {
        let mut next = self.next_slot.lock().unwrap();
        let mut now = clock.now();
        if let Some(slot) = *next {
            if slot > now {
                clock.sleep(slot - now);
                now = clock.now().max(slot);
            }
        }
        *next = Some(now + self.interval);
        now
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_tokens_at_five_qps_span_nine_gaps() {
        let clock = MockClock::new();
        let limiter = RateLimiter::new(5.0);
        let grants: Vec<Duration> = (0..10).map(|_| limiter.acquire(&clock)).collect();
        assert_eq!(grants[0], Duration::ZERO);
        assert!(clock.now() >= Duration::from_millis(1800));
        for w in grants.windows(2) {
            assert!(w[1] - w[0] >= Duration::from_millis(200) - Duration::from_nanos(1));
        }
    }

    #[test]
    fn idle_time_is_not_banked() {
        let clock = MockClock::new();
        let limiter = RateLimiter::new(2.0);
        limiter.acquire(&clock);
        clock.advance(Duration::from_secs(10));
        let a = limiter.acquire(&clock);
        let b = limiter.acquire(&clock);
        assert_eq!(b - a, Duration::from_millis(500));
    }

    #[test]
    fn window_ceiling() {
        // Irregular arrivals: requests in any window w never exceed qps·w + 1.
        let qps = 4.0;
        let clock = MockClock::new();
        let limiter = RateLimiter::new(qps);
        let mut grants = Vec::new();
        for i in 0..60u64 {
            clock.advance(Duration::from_millis((i * 37) % 190));
            grants.push(limiter.acquire(&clock).as_secs_f64());
        }
        for (i, &start) in grants.iter().enumerate() {
            for width in [0.1, 0.25, 0.6, 1.0, 3.3] {
                let inside = grants[i..].iter().filter(|&&t| t < start + width).count() as f64;
                assert!(inside <= qps * width + 1.0, "{inside} in {width}s from {start}");
            }
        }
    }
}
