//! Fixtures, textual sources and the error-versus-queries sweep.

pub mod matrices;
pub mod source;
pub mod sweep;

pub use matrices::{
    checked_inverse, first_primes, model_problem_matrix, model_problem_operator, trefethen_matrix,
    trefethen_operator,
};
pub use source::{MatrixSource, PatternSource};
pub use sweep::{
    quantile, run_sweep, summary_path_for, Algorithm, ExperimentConfig, MSummary, SweepReport,
    TrialRecord,
};
