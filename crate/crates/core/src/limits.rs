use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Cooperative cancellation flag shared between a caller and a running search.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Resource configuration for constructions and searches.
///
/// Exceeding any of these yields [`Error::ResourceLimit`].
#[derive(Debug, Clone)]
pub struct Limits {
    /// Maximum universe size of any constructed structure.
    pub universe_cap: usize,
    /// Maximum number of assignments visited by one backtracking search.
    pub node_budget: u64,
    /// Maximum input size for the exponential decision procedures
    /// (core computation, general FO check, rigidity).
    pub max_size: usize,
    /// Maximum template size for the projection-link search.
    pub link_max_size: usize,
    pub cancel: CancelToken,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            universe_cap: 1_000_000,
            node_budget: 100_000_000,
            max_size: 12,
            link_max_size: 3,
            cancel: CancelToken::default(),
        }
    }
}

impl Limits {
    pub(crate) fn check_universe(&self, what: &str, size: Option<usize>) -> Result<usize> {
        match size {
            Some(n) if n <= self.universe_cap => Ok(n),
            Some(n) => Err(Error::limit(format!(
                "{what} needs {n} elements, cap is {}",
                self.universe_cap
            ))),
            None => Err(Error::limit(format!("{what} universe size overflows"))),
        }
    }

    pub(crate) fn check_size(&self, what: &str, size: usize, bound: usize) -> Result<()> {
        if size > bound {
            return Err(Error::limit(format!(
                "{what}: input has {size} elements, bound is {bound}"
            )));
        }
        Ok(())
    }
}

/// `base^exp` with overflow detection.
pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
