use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use super::SearchOptions;

const TIME_CHECK_MASK: u64 = 0x1fff;

/// Shared node/time accounting for one solver invocation. Workers poll the
/// stop flag through [`Budget::tick`], so both budget exhaustion and
/// first-witness early exit propagate to every subtree.
pub(crate) struct Budget {
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    stop: AtomicBool,
    exhausted: AtomicBool,
}

impl Budget {
    pub fn new(opts: &SearchOptions) -> Self {
        let deadline = opts
            .max_seconds
            .map(|s| Instant::now() + std::time::Duration::from_secs_f64(s.max(0.0)));
        Budget {
            max_nodes: opts.max_nodes,
            deadline,
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            exhausted: AtomicBool::new(false),
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            max_nodes: None,
            deadline: None,
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Counts one expanded candidate; returns true when the search must
    /// abort (budget blown or another worker finished).
    pub fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(max) = self.max_nodes {
            if n > max {
                self.exhausted.store(true, Ordering::Relaxed);
                self.stop.store(true, Ordering::Relaxed);
                return true;
            }
        }
        if n & TIME_CHECK_MASK == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.exhausted.store(true, Ordering::Relaxed);
                    self.stop.store(true, Ordering::Relaxed);
                    return true;
                }
            }
        }
        self.stop.load(Ordering::Relaxed)
    }

    pub fn request_stop(&self) {
        self.stop.store(true, Ordering::Relaxed);
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }
}
