use crate::error::{Error, Result};

/// Default number of candidates an exhaustive search may examine.
pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000;

/// Counts candidates examined by an exhaustive search and fails
/// deterministically once the cap is exceeded.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    cap: u64,
    used: u64,
}

impl SearchBudget {
    pub fn new(cap: u64) -> Self {
        Self { cap, used: 0 }
    }

    pub fn charge(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            Err(Error::SearchBudgetExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::new(DEFAULT_SEARCH_CAP)
    }
}
