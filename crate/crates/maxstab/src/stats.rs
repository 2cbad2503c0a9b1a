//! Sample bias with the one-sample two-sided t-test used to star table cells.

use maxstab_core::error::Error as CoreError;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasSummary {
    pub mean_bias: f64,
    pub sample_sd: f64,
    /// `mean_bias / (sample_sd / sqrt(replications))`.
    pub t_statistic: f64,
    pub significant_5pct: bool,
    pub replications: usize,
}

impl BiasSummary {
    /// Monte Carlo standard error of the mean bias.
    pub fn mc_se(&self) -> f64 {
        self.sample_sd / (self.replications as f64).sqrt()
    }
}

/// Two-sided 5% critical value of Student's t with `df` degrees of freedom.
pub fn t_critical_5pct(df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64)
        .expect("df >= 1")
        .inverse_cdf(0.975)
}

pub fn bias_summary(estimates: &[f64], alpha_true: f64) -> Result<BiasSummary> {
    let m = estimates.len();
    if m < 2 {
        return Err(CoreError::Domain(format!("bias_summary needs at least 2 estimates, got {m}")).into());
    }
    let mean = corrected_mean(estimates);
    let mean_bias = mean - alpha_true;
    let ss: f64 = estimates.iter().map(|e| (e - mean).powi(2)).sum();
    let sample_sd = (ss / (m - 1) as f64).sqrt();
    let t_statistic = if sample_sd > 0.0 {
        mean_bias / (sample_sd / (m as f64).sqrt())
    } else if mean_bias == 0.0 {
        0.0
    } else {
        mean_bias.signum() * f64::INFINITY
    };
    Ok(BiasSummary {
        mean_bias,
        sample_sd,
        t_statistic,
        significant_5pct: t_statistic.abs() > t_critical_5pct(m - 1),
        replications: m,
    })
}

/// Two-pass mean; exact when all values are equal.
fn corrected_mean(values: &[f64]) -> f64 {
    let m = values.len() as f64;
    let rough = values.iter().sum::<f64>() / m;
    rough + values.iter().map(|v| v - rough).sum::<f64>() / m
}

/// Mean and standard error of the mean.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = corrected_mean(values);
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}
