//! Size guard for intermediate polynomials.
//!
//! Any operation that could blow up (multiplication, powers, substitution)
//! checks the running term count against the budget and aborts with
//! [`SymError::TermBudget`] instead of exhausting memory. The default of
//! 2e6 terms is far above anything the shipped proof scripts produce.

use std::cell::Cell;
use std::sync::OnceLock;

use super::SymError;

pub const DEFAULT_TERM_BUDGET: usize = 2_000_000;

thread_local! {
    static OVERRIDE: Cell<Option<usize>> = const { Cell::new(None) };
}

fn env_budget() -> usize {
    static ENV: OnceLock<usize> = OnceLock::new();
    *ENV.get_or_init(|| {
        std::env::var("MOMENT_MAX_TERMS")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_TERM_BUDGET)
    })
}

/// The budget in effect on this thread.
pub fn term_budget() -> usize {
    OVERRIDE.with(|b| b.get()).unwrap_or_else(env_budget)
}

/// Override the budget on this thread; `None` restores the default.
pub fn set_term_budget(budget: Option<usize>) {
    OVERRIDE.with(|b| b.set(budget));
}

/// Run `f` with a temporary budget, restoring the previous one afterwards.
pub fn with_term_budget<T>(budget: usize, f: impl FnOnce() -> T) -> T {
    struct Reset(Option<usize>);
    impl Drop for Reset {
        fn drop(&mut self) {
            OVERRIDE.with(|b| b.set(self.0));
        }
    }
    let _reset = Reset(OVERRIDE.with(|b| b.replace(Some(budget))));
    f()
}

pub(crate) fn check_terms(terms: usize) -> Result<(), SymError> {
    let budget = term_budget();
    if terms > budget {
        Err(SymError::TermBudget { terms, budget })
    } else {
        Ok(())
    }
}
