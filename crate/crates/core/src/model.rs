//! Max-stable dependence models with standard Fréchet margins.
//!
//! A model is described by its exponent function `V`, with CDF
//! `exp(-V(x))`, and the partial derivatives `V_S` over index subsets `S`.
//! Only the logistic family is shipped.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::numeric::{floor_positive, log_sum_exp, LogSumExp};

/// Exponent function interface used by the density code.
///
/// Evaluation goes through a per-point cache (`Point`) so that several
/// subset derivatives at the same `x` share the work.
pub trait MaxStableModel {
    type Point;

    /// `x` must be strictly positive; `+inf` components are allowed for
    /// [`exponent_at`](Self::exponent_at).
    fn prepare(&self, x: &[f64]) -> Self::Point;

    fn exponent_at(&self, point: &Self::Point) -> f64;

    /// `log(-V_S(x))` for a non-empty `block` `S`. `-inf` when the derivative vanishes.
    fn log_neg_partial_at(&self, point: &Self::Point, block: &[usize]) -> f64;

    /// `log` of the sum, over unordered splits `{A, B \ A}` of `block` into
    /// two non-empty parts, of `(-V_A(x)) (-V_{B\A}(x))`.
    ///
    /// The default lists all `2^(|B|-1) - 1` splits.
    fn log_split_sum_at(&self, point: &Self::Point, block: &[usize]) -> f64 {
        let size = block.len();
        if size < 2 {
            return f64::NEG_INFINITY;
        }
        assert!(size <= 63, "block too large to enumerate splits");
        let mut acc = LogSumExp::new();
        let (mut a, mut b) = (Vec::with_capacity(size), Vec::with_capacity(size));
        let full: u64 = (1 << size) - 1;
        for mask in (2..full).step_by(2) {
            a.clear();
            b.clear();
            for (k, &j) in block.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    b.push(j);
                } else {
                    a.push(j);
                }
            }
            acc.add(self.log_neg_partial_at(point, &a) + self.log_neg_partial_at(point, &b));
        }
        acc.value()
    }

    fn exponent(&self, x: &[f64]) -> f64 {
        self.exponent_at(&self.prepare(x))
    }

    fn log_neg_partial(&self, x: &[f64], block: &[usize]) -> f64 {
        self.log_neg_partial_at(&self.prepare(x), block)
    }
}

/// Dependence parameter of the logistic model, `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogisticParam(f64);

impl LogisticParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            bail!(Domain, "logistic alpha must lie in (0, 1], got {alpha}");
        }
        Ok(Self(alpha))
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

/// Logistic exponent function `V(x) = (sum_i x_i^(-1/alpha))^alpha`.
///
/// With `T = sum_i x_i^(-1/alpha)` and `s = |S|`,
/// `-V_S(x) = alpha^(1-s) prod_{k=1}^{s-1} (k - alpha) T^(alpha-s) prod_{j in S} x_j^(-1/alpha-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Logistic {
    alpha: f64,
}

impl Logistic {
    pub fn new(param: LogisticParam) -> Self {
        Self {
            alpha: param.alpha(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Size-dependent part of `log(-V_S)`: `(1-s) log alpha + sum_{k<s} log(k - alpha)`.
    fn size_constants(&self, max_size: usize) -> Vec<f64> {
        let log_alpha = libm::log(self.alpha);
        let mut out = Vec::with_capacity(max_size + 1);
        out.push(f64::NAN); // no empty subsets
        let mut acc = 0.0;
        for s in 1..=max_size {
            if s > 1 {
                let k = (s - 1) as f64;
                acc += libm::log(k - self.alpha) - log_alpha;
            }
            out.push(acc);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct LogisticPoint {
    log_x: Vec<f64>,
    log_t: f64,
    v: f64,
    // size_const[s] + (alpha - s) log T
    log_size_factor: Vec<f64>,
    size_const: Vec<f64>,
    log_fact: Vec<f64>,
}

impl MaxStableModel for Logistic {
    type Point = LogisticPoint;

    fn prepare(&self, x: &[f64]) -> LogisticPoint {
        let d = x.len();
        let alpha = self.alpha;
        let log_x: Vec<f64> = x.iter().map(|&xi| libm::log(floor_positive(xi))).collect();
        let log_t = log_sum_exp(log_x.iter().map(|&lx| -lx / alpha));
        let v = libm::exp(alpha * log_t);
        let size_const = self.size_constants(d);
        let log_size_factor = size_const
            .iter()
            .enumerate()
            .map(|(s, &c)| c + (alpha - s as f64) * log_t)
            .collect();
        // log k! for binomials in the split sum
        let mut log_fact = Vec::with_capacity(d + 1);
        log_fact.push(0.0);
        for k in 1..=d {
            log_fact.push(log_fact[k - 1] + libm::log(k as f64));
        }
        LogisticPoint {
            log_x,
            log_t,
            v,
            log_size_factor,
            size_const,
            log_fact,
        }
    }

    fn exponent_at(&self, point: &LogisticPoint) -> f64 {
        point.v
    }

    fn log_neg_partial_at(&self, point: &LogisticPoint, block: &[usize]) -> f64 {
        let s = block.len();
        debug_assert!(s >= 1);
        let sum_log_x: f64 = block.iter().map(|&j| point.log_x[j]).sum();
        point.log_size_factor[s] + (-1.0 / self.alpha - 1.0) * sum_log_x
    }

    /// Closed form: every split of a block of size `b` shares the factor
    /// `T^(2 alpha - b) prod_{j in B} x_j^(-1/alpha-1)`, leaving
    /// `sum_{a=1}^{b-1} C(b, a) / 2 * c(a) c(b - a)`.
    fn log_split_sum_at(&self, point: &LogisticPoint, block: &[usize]) -> f64 {
        let b = block.len();
        if b < 2 {
            return f64::NEG_INFINITY;
        }
        let log_fact = &point.log_fact;
        let c = &point.size_const;
        let mut acc = LogSumExp::new();
        for a in 1..b {
            let log_choose = log_fact[b] - log_fact[a] - log_fact[b - a];
            acc.add(log_choose + c[a] + c[b - a]);
        }
        let sum_log_x: f64 = block.iter().map(|&j| point.log_x[j]).sum();
        acc.value() - core::f64::consts::LN_2
            + (2.0 * self.alpha - b as f64) * point.log_t
            + (-1.0 / self.alpha - 1.0) * sum_log_x
    }
}
