//! Verification harness: one evaluator per identity or inequality, named
//! suites, and deterministic seeded sweeps.
//!
//! Exact identities (Parseval routes, trace formulas, two-route agreements,
//! submatrix nonsingularity, the uncertainty bound) are hard assertions at
//! fixed tolerances. Inequalities hide an absolute constant, so each
//! evaluator reports `(lhs, rhs_core, ratio)` where `rhs_core` is the right
//! side with its constant stripped; a report passes when the ratio stays
//! within a configurable budget, and the maximum observed ratio per
//! inequality is tracked as its empirical constant.

mod inequalities;
mod reports;
mod suites;
mod sweep;
mod zp;

pub use inequalities::{
    bilinear_bound, chang, conv_energy, eig_stats, higher_moment, level_set_bound, mu1_bound,
    rudin_moment, EigStats,
};
pub use reports::{
    random_complex_func, random_real_func, to_csv, to_jsonl, ConstantsLedger, InequalityReport,
    DEFAULT_BUDGET, DEGENERATE_ATOL,
};
pub use suites::{run_suite, standard_groups, CheckLine, Suite, SuiteConfig, SuiteOutcome};
pub use sweep::{mix_seed, sharpness_sweep, standard_sweep, IneqFamily, SweepConfig, SweepOutcome};
pub use zp::{
    chebotarev_scan, constructive_eigenbasis, min_support_basis, modulated_dimension,
    sparsify_cover, uncertainty_check, ChebotarevReport, EigenbasisCase, EigenbasisReport,
    MinSupportBasis, SparsifyReport, UncertaintyReport,
};
