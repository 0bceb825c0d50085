//! One line per acceptance criterion. Set `KRON_LONG=1` for the full
//! (4,2),(2,2,2),(3,2,1) sequence instead of its prefix.

use kronlef::cache::open_coefficient_cache;
use kronlef::hwv::DEFAULT_WEIGHT_BUDGET;
use kronlef_cli::acceptance::Suite;

#[test]
fn acceptance() {
    let long = std::env::var("KRON_LONG").is_ok_and(|v| !v.is_empty() && v != "0");
    let cache = open_coefficient_cache(None);
    let suite = Suite { long, budget: DEFAULT_WEIGHT_BUDGET, cache: Some(&cache) };
    let outcomes = suite.run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
