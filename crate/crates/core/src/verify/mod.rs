//! Exact superlevel counts, certified ℓᵖ sums, and the inequality checks
//! built on them.

mod checks;
mod field;
mod lp;
mod search;

pub use field::{certified_window, superlevel_count, Field};
pub use lp::{lp_power_certified, lp_power_of, LpPower};
pub use checks::{
    good_lambda_counts, run_check, run_checks, CheckId, Corpus, ReportRow, VerificationReport, VerifyConfig, Violation,
};
pub use search::{estimate_constant, ratio_of, RatioId, SearchConfig, SearchResult};
