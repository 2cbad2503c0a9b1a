//! Per-observation densities of (maxima, occurrence partition).
//!
//! * [`log_st_density`]: the limit contribution `e^{-V} prod_l (-V_{pi_l})`.
//! * [`log_second_order_density`]: the finite-`n` contribution truncated
//!   after order `1/n`: the leading term deflated by `1 - m(m-1)/(2n)` plus
//!   every one-block split weighted by `1/n`.
//! * [`log_full_density`]: the density of the maxima alone, a sum over all
//!   partitions.


use crate::error::{bail, Result};
use crate::numeric::LogSumExp;
use crate::partition::{enumerate_partitions, Partition};
use crate::model::MaxStableModel;

fn check_point(x: &[f64], d: usize) -> Result<()> {
    if x.len() != d {
        bail!(Validation, "point has {} components, partition has d = {d}", x.len());
    }
    if let Some(v) = x.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        bail!(Validation, "point components must be finite and positive, got {v}");
    }
    Ok(())
}

/// `n > d(d-1)/2`, the positivity requirement of the second-order density.
pub fn second_order_allowed(n: u64, d: usize) -> bool {
    let d = d as u128;
    2 * n as u128 > d * d.saturating_sub(1)
}

/// Leading-term weight `1 - m(m-1)/(2n)`.
pub fn second_order_coefficient(m: usize, n: u64) -> f64 {
    let m = m as f64;
    1.0 - m * (m - 1.0) / (2.0 * n as f64)
}

pub fn log_st_density<M: MaxStableModel>(model: &M, x: &[f64], p: &Partition) -> Result<f64> {
    check_point(x, p.dim())?;
    let point = model.prepare(x);
    Ok(st_at(model, &point, p))
}

fn st_at<M: MaxStableModel>(model: &M, point: &M::Point, p: &Partition) -> f64 {
    let log_prod: f64 = p
        .blocks()
        .iter()
        .map(|b| model.log_neg_partial_at(point, b))
        .sum();
    log_prod - model.exponent_at(point)
}

pub fn log_second_order_density<M: MaxStableModel>(
    model: &M,
    x: &[f64],
    p: &Partition,
    n: u64,
) -> Result<f64> {
    let d = p.dim();
    if !second_order_allowed(n, d) {
        return Err(crate::error::Error::SecondOrderConstraint { n, d });
    }
    check_point(x, d)?;
    let point = model.prepare(x);
    Ok(second_order_at(model, &point, p, n))
}

fn second_order_at<M: MaxStableModel>(model: &M, point: &M::Point, p: &Partition, n: u64) -> f64 {
    let blocks = p.blocks();
    let mut log_g = [0.0f64; 64];
    let mut log_g_vec;
    let log_g: &mut [f64] = if blocks.len() <= 64 {
        &mut log_g[..blocks.len()]
    } else {
        log_g_vec = alloc::vec![0.0; blocks.len()];
        &mut log_g_vec
    };
    for (g, b) in log_g.iter_mut().zip(blocks) {
        *g = model.log_neg_partial_at(point, b);
    }
    let log_inv_n = -libm::log(n as f64);
    let mut acc = LogSumExp::new();
    let lead: f64 = log_g.iter().sum();
    acc.add(libm::log(second_order_coefficient(blocks.len(), n)) + lead);
    for (l, b) in blocks.iter().enumerate() {
        if b.len() < 2 {
            continue;
        }
        // product over the other blocks; summed directly so a vanishing
        // factor in block l does not poison the rest
        let others: f64 = log_g
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != l)
            .map(|(_, g)| *g)
            .sum();
        acc.add(log_inv_n + others + model.log_split_sum_at(point, b));
    }
    acc.value() - model.exponent_at(point)
}

/// Density of the maxima, summed over every partition of `{0, …, d-1}`.
pub fn log_full_density<M: MaxStableModel>(model: &M, x: &[f64]) -> Result<f64> {
    let d = x.len();
    let partitions = enumerate_partitions(d)?;
    check_point(x, d)?;
    let point = model.prepare(x);
    let v = model.exponent_at(&point);
    let mut acc = LogSumExp::new();
    for p in partitions {
        acc.add(st_at(model, &point, &p) + v);
    }
    Ok(acc.value() - v)
}

/// Level exceeded by at least one of `d` logistic components with
/// probability `p`: `d^alpha_hat / (-log(1 - p))`.
pub fn return_level(alpha_hat: f64, d: usize, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        bail!(Domain, "exceedance probability must lie in (0, 1), got {p}");
    }
    if !(alpha_hat > 0.0 && alpha_hat <= 1.0) {
        bail!(Domain, "alpha_hat must lie in (0, 1], got {alpha_hat}");
    }
    if d == 0 {
        bail!(Domain, "dimension must be positive");
    }
    Ok(libm::pow(d as f64, alpha_hat) / -libm::log1p(-p))
}

/// True probability that no component exceeds the estimated return level
/// when the data follow `alpha_true`: `(1 - p)^(d^(alpha_true - alpha_hat))`.
pub fn return_level_non_exceedance(alpha_true: f64, alpha_hat: f64, d: usize, p: f64) -> Result<f64> {
    return_level(alpha_hat, d, p)?;
    let exponent = libm::pow(d as f64, alpha_true - alpha_hat);
    Ok(libm::exp(libm::log1p(-p) * exponent))
}

/// Per-observation evaluation with a cached point, used by the inference layer.
pub(crate) fn log_density_prepared<M: MaxStableModel>(
    model: &M,
    point: &M::Point,
    p: &Partition,
    n: Option<u64>,
) -> f64 {
    match n {
        None => st_at(model, point, p),
        Some(n) => second_order_at(model, point, p, n),
    }
}
