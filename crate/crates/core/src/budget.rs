//! Explicit step budgets for the combinatorial searches.
//!
//! Every potentially expensive enumeration (distance search, cycle
//! enumeration, minor audits, difference-sum screens) counts its elementary
//! steps against a caller-supplied [`Budget`].  Running out of budget is a
//! first-class outcome — the search reports [`BudgetExceeded`] instead of
//! silently truncating, so a caller can always distinguish "verified" from
//! "gave up".

use thiserror::Error;

/// Name of the environment variable that overrides the default step budget.
pub const BUDGET_ENV_VAR: &str = "DTSCONV_BUDGET";

/// Default number of elementary search steps allowed per operation.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search budget of {limit} steps exceeded")]
pub struct BudgetExceeded {
    pub limit: u64,
}

/// A step allowance for one search.  Cheap to copy into a [`BudgetMeter`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }

    /// Default budget, overridable through the `DTSCONV_BUDGET` environment
    /// variable (a plain integer step count).
    pub fn from_env() -> Self {
        let limit = std::env::var(BUDGET_ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Budget { limit }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn meter(&self) -> BudgetMeter {
        BudgetMeter {
            limit: self.limit,
            spent: 0,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// Running counter against a [`Budget`].
#[derive(Debug, Clone)]
pub struct BudgetMeter {
    limit: u64,
    spent: u64,
}

impl BudgetMeter {
    /// Records `steps` elementary operations, failing once the limit is hit.
    pub fn charge(&mut self, steps: u64) -> Result<(), BudgetExceeded> {
        self.spent = self.spent.saturating_add(steps);
        if self.spent > self.limit {
            Err(BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }
}
