//! Blocking token-bucket limiter shared by concurrent requests.

use std::num::NonZeroU32;
use std::time::Duration;

use governor::clock::{Clock, DefaultClock};
use governor::{DefaultDirectRateLimiter, Quota};

pub const DEFAULT_INTERVAL: Duration = Duration::from_millis(500);

#[derive(Debug)]
pub struct RateLimit {
    limiter: DefaultDirectRateLimiter,
    clock: DefaultClock,
}

impl RateLimit {
    /// One request per `interval`, with bursts of up to `burst` requests.
    pub fn new(interval: Duration, burst: u32) -> Option<Self> {
        let quota = Quota::with_period(interval)?.allow_burst(NonZeroU32::new(burst.max(1))?);
        Some(RateLimit { limiter: DefaultDirectRateLimiter::direct(quota), clock: DefaultClock::default() })
    }

    /// Blocks until a request may be sent.
    pub fn acquire(&self) {
        while let Err(not_until) = self.limiter.check() {
            std::thread::sleep(not_until.wait_time_from(self.clock.now()));
        }
    }
}

impl Default for RateLimit {
    fn default() -> Self {
        RateLimit::new(DEFAULT_INTERVAL, 1).expect("nonzero interval")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Instant;

    #[test]
    fn spaces_requests() {
        let r = RateLimit::new(Duration::from_millis(20), 1).unwrap();
        let start = Instant::now();
        for _ in 0..4 {
            r.acquire();
        }
        assert!(start.elapsed() >= Duration::from_millis(55));
        assert!(RateLimit::new(Duration::ZERO, 1).is_none());
    }
}
