//! Dataset log-likelihoods and maximum likelihood for the logistic `alpha`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::density::{log_density_prepared, log_full_density, second_order_allowed};
use crate::error::{bail, Error, Result};
use crate::model::{Logistic, LogisticParam, MaxStableModel};
use crate::numeric::order_free_sum;
use crate::optimize::brent_max;
use crate::partition::ENUMERATION_CAP;
use crate::sampler::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LikelihoodKind {
    /// Limit density of maxima and occurrence partition.
    StephensonTawn,
    /// Finite-`n` density truncated after order `1/n`.
    SecondOrder,
    /// Density of the maxima alone; partitions ignored.
    Full,
}

impl LikelihoodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LikelihoodKind::StephensonTawn => "st",
            LikelihoodKind::SecondOrder => "second-order",
            LikelihoodKind::Full => "full",
        }
    }

    /// Whether this likelihood can be used for block size `n` in dimension `d`.
    pub fn check(self, n: u64, d: usize) -> Result<()> {
        match self {
            LikelihoodKind::StephensonTawn => Ok(()),
            LikelihoodKind::SecondOrder if !second_order_allowed(n, d) => {
                Err(Error::SecondOrderConstraint { n, d })
            }
            LikelihoodKind::SecondOrder => Ok(()),
            LikelihoodKind::Full if d > ENUMERATION_CAP => bail!(
                Capacity,
                "full likelihood enumerates all partitions; d = {d} exceeds {ENUMERATION_CAP}"
            ),
            LikelihoodKind::Full => Ok(()),
        }
    }
}

impl fmt::Display for LikelihoodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LikelihoodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "st" | "stephenson-tawn" => Ok(LikelihoodKind::StephensonTawn),
            "so" | "second-order" => Ok(LikelihoodKind::SecondOrder),
            "full" => Ok(LikelihoodKind::Full),
            other => bail!(Validation, "unknown likelihood kind {other:?}"),
        }
    }
}

/// Sum of per-observation log densities at `alpha`.
///
/// The sum is independent of observation order (values are sorted before a
/// pairwise reduction), so permuted datasets give bit-identical results.
pub fn log_likelihood(ds: &Dataset, alpha: f64, kind: LikelihoodKind) -> Result<f64> {
    let model = Logistic::new(LogisticParam::new(alpha)?);
    let n = ds.block_size();
    kind.check(n, ds.dim())?;
    let mut terms = Vec::with_capacity(ds.len());
    for obs in ds.observations() {
        let value = match kind {
            LikelihoodKind::Full => log_full_density(&model, &obs.maxima)?,
            LikelihoodKind::StephensonTawn | LikelihoodKind::SecondOrder => {
                let point = model.prepare(&obs.maxima);
                let n = (kind == LikelihoodKind::SecondOrder).then_some(n);
                log_density_prepared(&model, &point, &obs.partition, n)
            }
        };
        if value == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        terms.push(value);
    }
    Ok(order_free_sum(terms))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub lower: f64,
    pub upper: f64,
    pub tol: f64,
    pub max_evals: usize,
    /// Coarse grid points used to bracket the maximum before Brent's method.
    pub grid: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            lower: 1e-3,
            upper: 1.0 - 1e-6,
            tol: 1e-6,
            max_evals: 200,
            grid: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub alpha_hat: f64,
    pub loglik: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Estimate within a few tolerances of an end of the search interval.
    pub boundary: bool,
    pub kind: LikelihoodKind,
}

/// Maximum likelihood estimate of `alpha` with default options and tolerance `tol`.
pub fn fit(ds: &Dataset, kind: LikelihoodKind, tol: f64) -> Result<FitResult> {
    fit_with(
        ds,
        kind,
        &FitOptions {
            tol,
            ..FitOptions::default()
        },
    )
}

pub fn fit_with(ds: &Dataset, kind: LikelihoodKind, opts: &FitOptions) -> Result<FitResult> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        bail!(Domain, "tolerance must be positive");
    }
    if !(0.0 < opts.lower && opts.lower < opts.upper && opts.upper <= 1.0) {
        bail!(Domain, "search interval must lie inside (0, 1]");
    }
    if ds.is_empty() {
        bail!(Validation, "empty dataset");
    }
    kind.check(ds.block_size(), ds.dim())?;

    let mut failure = None;
    let mut objective = |alpha: f64| match log_likelihood(ds, alpha, kind) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NEG_INFINITY
        }
    };

    // Coarse grid to pick the bracket, then Brent inside it.
    let grid = opts.grid.max(3);
    let step = (opts.upper - opts.lower) / (grid - 1) as f64;
    let nodes: Vec<f64> = (0..grid).map(|k| opts.lower + step * k as f64).collect();
    let values: Vec<f64> = nodes.iter().map(|&a| objective(a)).collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (k, v)| if *v > values[b] { k } else { b });
    let lo = nodes[best.saturating_sub(1)];
    let hi = nodes[(best + 1).min(grid - 1)];
    let budget = opts.max_evals.saturating_sub(grid).max(1);
    let inner = brent_max(&mut objective, lo, hi, opts.tol, budget);

    let (alpha_hat, loglik) = if inner.value >= values[best] {
        (inner.x, inner.value)
    } else {
        (nodes[best], values[best])
    };
    if let Some(e) = failure {
        return Err(e);
    }
    if loglik == f64::NEG_INFINITY {
        bail!(
            FitFailure,
            "log-likelihood is -inf at every candidate in [{}, {}]",
            opts.lower,
            opts.upper
        );
    }
    let edge = 4.0 * opts.tol;
    Ok(FitResult {
        alpha_hat,
        loglik,
        evaluations: grid + inner.evaluations,
        converged: inner.converged,
        boundary: alpha_hat - opts.lower < edge || opts.upper - alpha_hat < edge,
        kind,
    })
}
