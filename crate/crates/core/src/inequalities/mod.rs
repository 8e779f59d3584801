//! Verifiers for the Harnack-type determinantal bounds.

pub mod counterexample;
pub mod report;
pub mod verify;

pub use counterexample::{
    counterexample_with, published_counterexample, published_matrices, round4, CounterexampleOutcome,
};
pub use report::{
    relative_gap, EnsembleSpec, EqualityClassification, EqualityFlag, ExtendedReal,
    InequalityReport, HOLD_TOL,
};
pub use verify::{
    classify_equality, conjecture_eval, harnack_bounds, harnack_bounds_weighted,
    operator_convexity_gap, tung_ratio, verify_corollary, verify_general_lower, verify_marcus,
    verify_multi, verify_psd, verify_tung,
};
