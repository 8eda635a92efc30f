//! Injected time source so rate limiting and backoff are observable in tests.

use std::sync::Mutex;
use std::time::{Duration, Instant};

pub trait Clock: Send + Sync {
    /// Monotonic milliseconds since an arbitrary epoch.
    fn now_ms(&self) -> u64;
    fn sleep_ms(&self, ms: u64);
}

pub struct SystemClock {
    start: Instant,
}

impl SystemClock {
    pub fn new() -> Self {
        SystemClock {
            start: Instant::now(),
        }
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now_ms(&self) -> u64 {
        self.start.elapsed().as_millis() as u64
    }

    fn sleep_ms(&self, ms: u64) {
        std::thread::sleep(Duration::from_millis(ms));
    }
}

/// Virtual clock: sleeping advances time instantly and records the request.
pub struct ManualClock {
    state: Mutex<ManualState>,
}

struct ManualState {
    now_ms: u64,
    sleeps: Vec<u64>,
}

impl ManualClock {
    pub fn new() -> Self {
        ManualClock {
            state: Mutex::new(ManualState {
                now_ms: 0,
                sleeps: Vec::new(),
            }),
        }
    }

    pub fn sleeps(&self) -> Vec<u64> {
        self.state.lock().unwrap().sleeps.clone()
    }

    pub fn advance(&self, ms: u64) {
        self.state.lock().unwrap().now_ms += ms;
    }
}

impl Default for ManualClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for ManualClock {
    fn now_ms(&self) -> u64 {
        self.state.lock().unwrap().now_ms
    }

    fn sleep_ms(&self, ms: u64) {
        let mut state = self.state.lock().unwrap();
        state.now_ms += ms;
        state.sleeps.push(ms);
    }
}
