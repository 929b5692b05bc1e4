//! Variable-count limits.
//!
//! Exponent tuples live on fixed arrays of length [`VAR_CAPACITY`]. The
//! default working limit is [`DEFAULT_MAX_VARS`]; the environment variable
//! `EULERIAN_DMOD_MAXN` may raise it up to the capacity.

use crate::error::{Error, Result};

pub const VAR_CAPACITY: usize = 8;
pub const DEFAULT_MAX_VARS: usize = 6;
pub const MAX_VARS_ENV: &str = "EULERIAN_DMOD_MAXN";

pub fn max_vars() -> usize {
    std::env::var(MAX_VARS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(VAR_CAPACITY))
        .unwrap_or(DEFAULT_MAX_VARS)
}

pub fn check_vars(n: usize) -> Result<()> {
    let max = max_vars();
    if n > max {
        return Err(Error::TooManyVariables { n, max });
    }
    Ok(())
}
