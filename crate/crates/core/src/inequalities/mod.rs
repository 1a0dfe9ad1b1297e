//! Verifiers for the symmetrization estimates and the counterexample
//! runner. Each verifier returns an [`InequalityReport`]; an unverifiable
//! hypothesis yields a vacuous verdict with `meta.reason`, never an error.

mod counterexample;
mod report;
mod sets;
pub(crate) mod verify;

pub use counterexample::{
    counterexample_profile, parse_trace_csv, run_counterexample, CounterexampleKind,
    CounterexampleTrace, TraceCsv, LADDER,
};
pub use report::{parse_reports, read_reports, render_reports, write_reports, InequalityReport, Verdict};
pub use sets::{vanishing_tolerance, BoundarySet, CellSet};
pub use verify::{
    local_factor, support_alpha, thm_1_2_constant, verify_cor_1_6, verify_cor_2_2,
    verify_cor_2_2_sequence, verify_thm_1_1, verify_thm_1_2, verify_thm_1_3, verify_thm_1_4,
    verify_thm_2_1, SequenceTrend, Symmetrized,
};
