//! Resource guards. `CLONECALC_GUARD_OVERRIDE` multiplies every limit.

use crate::error::{Error, Result};

pub const ENV_OVERRIDE: &str = "CLONECALC_GUARD_OVERRIDE";

/// Largest modulus accepted by enumeration operations.
pub const MAX_ENUM_MODULUS: u64 = 30;

fn factor() -> u64 {
    std::env::var(ENV_OVERRIDE)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&f| f >= 1)
        .unwrap_or(1)
}

/// Applies the environment override to a base limit.
pub fn limit(base: u64) -> u64 {
    base.saturating_mul(factor())
}

/// Fails with `GuardExceeded` when `amount` is above the (overridable) limit.
pub fn check(what: &str, amount: u64, base: u64) -> Result<()> {
    let lim = limit(base);
    if amount > lim {
        Err(Error::GuardExceeded(format!("{what}: {amount} > {lim}")))
    } else {
        Ok(())
    }
}
