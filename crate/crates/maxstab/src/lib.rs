//! File formats, bias statistics and the batch experiment harness built on
//! [`maxstab_core`].

pub mod error;
pub mod experiment;
pub mod io;
pub mod stats;

pub use error::{Error, Result};
pub use experiment::{
    run_bias_study, run_partition_prob, run_scaling_study, run_study, run_term_count,
    ExperimentConfig, ResultRow, ResultTable, Study,
};
pub use stats::{bias_summary, BiasSummary};
