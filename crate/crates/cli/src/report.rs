//! The JSON envelope printed by every subcommand and the error-to-exit-code map.

use serde::Serialize;
use serde_json::Value;

use kronlef::cache::CacheStats;
use kronlef::Error;

pub const EXIT_BUDGET: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub results: Value,
    pub timings: Timings,
    pub cache: CacheStats,
}

/// Budget and capacity errors exit 1, bad input exits 2, and internal
/// disagreements between independent routes count as verification failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        Error::Internal(_) => EXIT_VERIFICATION,
        _ => EXIT_INPUT,
    }
}
