//! Size cap for operations that enumerate all of `S_n`.
//!
//! Rough memory for a full theta table: n = 6 about 1 MB, n = 7 about 40 MB,
//! n = 8 about 3 GB (40320 elements with up to 1430 diagrams each).

use thiserror::Error;

pub const DEFAULT_MAX_N: usize = 8;
pub const ENV_VAR: &str = "TLIMM_MAX_N";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("n = {n} exceeds the limit {limit} (set {ENV_VAR} to override)")]
pub struct LimitExceeded {
    pub n: usize,
    pub limit: usize,
}

/// The configured cap: `TLIMM_MAX_N` if set and valid, else [`DEFAULT_MAX_N`].
pub fn max_n() -> usize {
    std::env::var(ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

pub fn check(n: usize) -> Result<(), LimitExceeded> {
    let limit = max_n();
    if n > limit {
        Err(LimitExceeded { n, limit })
    } else {
        Ok(())
    }
}
