//! Likelihood inference for the multivariate extreme value logistic model
//! when the occurrence partition of componentwise maxima is observed.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! * [`partition`] and [`combinatorics`]: set partitions of `{0, …, d-1}`,
//!   restricted-growth-string enumeration, one-block-split refinements, Bell
//!   and Stirling numbers, and the occurrence probability `n!/((n-d)! n^d)`.
//! * [`model`]: the max-stable model interface and the logistic exponent
//!   function with closed-form subset partial derivatives.
//! * [`density`]: limit (occurrence-time), second-order and full densities.
//! * [`rng`] and [`sampler`]: reproducible streams, positive stable variates,
//!   logistic and outer power Clayton vectors, block maxima.
//! * [`inference`]: dataset log-likelihoods and bracketed scalar maximum
//!   likelihood for the dependence parameter.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod density;
pub mod error;
pub mod inference;
pub mod model;
pub mod numeric;
pub mod optimize;
pub mod partition;
pub mod rng;
pub mod sampler;

pub use combinatorics::{bell_number, ratio_approx, ratio_exact, stirling2};
pub use density::{
    log_full_density, log_second_order_density, log_st_density, return_level,
    second_order_coefficient,
};
pub use error::{Error, Result};
pub use inference::{fit, log_likelihood, FitResult, LikelihoodKind};
pub use model::{Logistic, LogisticParam, MaxStableModel};
pub use partition::{enumerate_partitions, occurrence_partition, Partition};
pub use rng::RngStream;
pub use sampler::{
    sample_dataset, sample_logistic_vector, sample_max_block, sample_max_block_frailty,
    sample_opc_vector, sample_positive_stable, BlockMethod, Dataset, MaxBlockObservation,
    ModelKind,
};
