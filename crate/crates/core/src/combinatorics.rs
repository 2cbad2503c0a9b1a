//! Exact partition counts and the all-distinct occurrence probability.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};

/// Bell number `B_d`, exact. Capacity error once the value leaves `u128`.
pub fn bell_number(d: usize) -> Result<u128> {
    if d == 0 {
        bail!(Domain, "bell_number needs d >= 1");
    }
    // Bell triangle: each row starts with the last entry of the previous row.
    let mut row: Vec<u128> = vec![1];
    for _ in 1..d {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let Some(s) = next.last().unwrap().checked_add(v) else {
                bail!(Capacity, "B_{d} does not fit in 128 bits");
            };
            next.push(s);
        }
        row = next;
    }
    Ok(*row.last().unwrap())
}

/// Stirling number of the second kind `{d, k}`: partitions of a `d`-set into `k` blocks.
pub fn stirling2(d: usize, k: usize) -> Result<u128> {
    if k == 0 || k > d {
        bail!(Domain, "stirling2 needs 1 <= k <= d, got d = {d}, k = {k}");
    }
    // row[j] = {i, j} for the current i
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=d {
        for j in (1..=k.min(i)).rev() {
            let grown = (j as u128).checked_mul(row[j]);
            let Some(v) = grown.and_then(|g| g.checked_add(row[j - 1])) else {
                bail!(Capacity, "{{{d},{k}}} does not fit in 128 bits");
            };
            row[j] = v;
        }
        row[0] = 0;
    }
    Ok(row[k])
}

/// Probability that `d` maxima over `n` independent vectors all come from
/// different vectors: `n! / ((n-d)! n^d)`, evaluated in log space.
pub fn ratio_exact(n: u64, d: u64) -> Result<f64> {
    if d == 0 || n == 0 {
        bail!(Domain, "ratio_exact needs n, d >= 1");
    }
    if d > n {
        bail!(Domain, "d = {d} > n = {n}: the probability is zero");
    }
    let n_f = n as f64;
    let log_p: f64 = (1..d).map(|k| libm::log1p(-(k as f64) / n_f)).sum();
    Ok(libm::exp(log_p))
}

/// Large-`n` approximation `exp(-d^2 / (2n))` of [`ratio_exact`].
pub fn ratio_approx(n: u64, d: u64) -> f64 {
    let (n, d) = (n as f64, d as f64);
    libm::exp(-d * d / (2.0 * n))
}
