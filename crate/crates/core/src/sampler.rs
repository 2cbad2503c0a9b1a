//! Simulation of logistic and outer power Clayton vectors and of block maxima.
//!
//! Both families are exponential frailty mixtures. Given a frailty `W`,
//! components are driven by independent unit exponentials `E_j` through a
//! decreasing function of `E_j / W`:
//!
//! * logistic: `W = S`, `X_j = (S / E_j)^alpha`, with `S` positive stable,
//! * outer power Clayton: `W = S E^(1/alpha)`, `U_j = (1 + (E_j / W)^alpha)^(-1)`,
//!   `X_j = -1 / log U_j`.
//!
//! This also gives an exact shortcut for block maxima
//! ([`sample_max_block_frailty`]): given the frailties `W_1..W_n`, each column
//! maximum comes from row `i` with probability `W_i / sum W` independently
//! across columns, and `min_i E_ij / W_i` is `Exp(sum W)` independently of
//! which row attains it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{bail, Error, Result};
use crate::model::LogisticParam;
use crate::numeric::{log_sum_exp, softplus};
use crate::partition::{occurrence_partition, Partition};
use crate::rng::RngStream;

/// Above this `alpha` the stable variate is replaced by the constant 1.
pub const INDEPENDENCE_THRESHOLD: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Logistic,
    OuterPowerClayton,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Logistic => "logistic",
            ModelKind::OuterPowerClayton => "opc",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "logistic" => Ok(ModelKind::Logistic),
            "opc" | "outer-power-clayton" | "outer_power_clayton" => {
                Ok(ModelKind::OuterPowerClayton)
            }
            other => bail!(Validation, "unknown model {other:?}"),
        }
    }
}

/// How block maxima are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockMethod {
    /// Materialize all `n` vectors.
    Direct,
    /// Draw only the `n` frailties; see the module docs.
    #[default]
    Frailty,
}

fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

/// `log S` for a positive stable `S` with `E[exp(-t S)] = exp(-t^alpha)`
/// (Chambers–Mallows–Stuck / Kanter representation).
pub fn log_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    assert!(alpha > 0.0 && alpha <= 1.0, "stable index must lie in (0, 1]");
    if alpha > INDEPENDENCE_THRESHOLD {
        return 0.0;
    }
    let u = core::f64::consts::PI * open01(rng);
    let e = exp1(rng);
    let beta = 1.0 - alpha;
    libm::log(libm::sin(alpha * u)) - libm::log(libm::sin(u)) / alpha + beta / alpha * (libm::log(libm::sin(beta * u)) - libm::log(e))
}

pub fn sample_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    libm::exp(log_positive_stable(alpha, rng))
}

/// `log W` for the frailty of `model`.
fn log_frailty<R: Rng + ?Sized>(model: ModelKind, alpha: f64, rng: &mut R) -> f64 {
    let log_s = log_positive_stable(alpha, rng);
    match model {
        ModelKind::Logistic => log_s,
        ModelKind::OuterPowerClayton => log_s + libm::log(exp1(rng)) / alpha,
    }
}

/// `log X_j` from `log(E_j / W)`.
fn log_component(model: ModelKind, alpha: f64, log_ratio: f64) -> f64 {
    match model {
        ModelKind::Logistic => -alpha * log_ratio,
        ModelKind::OuterPowerClayton => -libm::log(softplus(alpha * log_ratio)),
    }
}

fn fill_log_vector<R: Rng + ?Sized>(model: ModelKind, alpha: f64, rng: &mut R, out: &mut [f64]) {
    let log_w = log_frailty(model, alpha, rng);
    for v in out.iter_mut() {
        *v = log_component(model, alpha, libm::log(exp1(rng)) - log_w);
    }
}

/// One max-stable logistic vector on the standard Fréchet scale.
pub fn sample_logistic_vector<R: Rng + ?Sized>(d: usize, param: LogisticParam, rng: &mut R) -> Vec<f64> {
    sample_vector(ModelKind::Logistic, d, param, rng)
}

/// One outer power Clayton vector on the standard Fréchet scale.
pub fn sample_opc_vector<R: Rng + ?Sized>(d: usize, param: LogisticParam, rng: &mut R) -> Vec<f64> {
    sample_vector(ModelKind::OuterPowerClayton, d, param, rng)
}

pub fn sample_vector<R: Rng + ?Sized>(
    model: ModelKind,
    d: usize,
    param: LogisticParam,
    rng: &mut R,
) -> Vec<f64> {
    let mut out = vec![0.0; d];
    fill_log_vector(model, param.alpha(), rng, &mut out);
    out.iter_mut().for_each(|v| *v = libm::exp(*v));
    out
}

/// Scaled componentwise maximum `M_n / n` of one block with its occurrence partition.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxBlockObservation {
    pub maxima: Vec<f64>,
    pub partition: Partition,
    pub n: u64,
}

impl MaxBlockObservation {
    pub fn new(maxima: Vec<f64>, partition: Partition, n: u64) -> Result<Self> {
        if n == 0 {
            bail!(Validation, "block size must be positive");
        }
        if maxima.len() != partition.dim() {
            bail!(
                Validation,
                "{} maxima for a partition of d = {}",
                maxima.len(),
                partition.dim()
            );
        }
        if maxima.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            bail!(Validation, "maxima must be finite and positive");
        }
        if partition.len() as u64 > n {
            bail!(Validation, "partition has more blocks than the block size {n}");
        }
        Ok(Self { maxima, partition, n })
    }

    pub fn dim(&self) -> usize {
        self.maxima.len()
    }
}

/// Simulates all `n` vectors of the block and reads off the maxima and the
/// occurrence partition.
pub fn sample_max_block<R: Rng + ?Sized>(
    n: u64,
    d: usize,
    model: ModelKind,
    param: LogisticParam,
    rng: &mut R,
) -> MaxBlockObservation {
    assert!(n >= 1 && d >= 1);
    let rows = n as usize;
    let mut raw = vec![0.0; rows * d];
    for row in raw.chunks_exact_mut(d) {
        fill_log_vector(model, param.alpha(), rng, row);
    }
    let partition = occurrence_partition(&raw, rows, d).expect("simulated block is finite");
    let log_n = libm::log(n as f64);
    let maxima = (0..d)
        .map(|j| {
            let top = raw.iter().skip(j).step_by(d).fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            libm::exp(top - log_n)
        })
        .collect();
    MaxBlockObservation { maxima, partition, n }
}

/// Frailty weights of one block, normalized to sum to one.
pub fn sample_block_weights<R: Rng + ?Sized>(
    n: u64,
    model: ModelKind,
    param: LogisticParam,
    rng: &mut R,
) -> (Vec<f64>, f64) {
    let log_w: Vec<f64> = (0..n).map(|_| log_frailty(model, param.alpha(), rng)).collect();
    let log_total = log_sum_exp(log_w.iter().copied());
    let weights = log_w.iter().map(|lw| libm::exp(lw - log_total)).collect();
    (weights, log_total)
}

/// Same law as [`sample_max_block`] at `O(n + d log n)` cost.
pub fn sample_max_block_frailty<R: Rng + ?Sized>(
    n: u64,
    d: usize,
    model: ModelKind,
    param: LogisticParam,
    rng: &mut R,
) -> MaxBlockObservation {
    assert!(n >= 1 && d >= 1);
    let alpha = param.alpha();
    let (weights, log_total) = sample_block_weights(n, model, param, rng);
    let mut cumulative = weights;
    let mut run = 0.0;
    for w in cumulative.iter_mut() {
        run += *w;
        *w = run;
    }
    let total = run;
    let log_n = libm::log(n as f64);
    let mut rows = Vec::with_capacity(d);
    let mut maxima = Vec::with_capacity(d);
    for _ in 0..d {
        let target = rng.random::<f64>() * total;
        let row = cumulative.partition_point(|&c| c <= target).min(cumulative.len() - 1);
        rows.push(row);
        let log_x = log_component(model, alpha, libm::log(exp1(rng)) - log_total);
        maxima.push(libm::exp(log_x - log_n));
    }
    MaxBlockObservation {
        maxima,
        partition: Partition::from_labels(&rows),
        n,
    }
}

/// Observations sharing `n` and `d`, with generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    observations: Vec<MaxBlockObservation>,
    n: u64,
    d: usize,
    pub model: ModelKind,
    pub alpha_true: f64,
}

impl Dataset {
    pub fn new(
        observations: Vec<MaxBlockObservation>,
        model: ModelKind,
        alpha_true: f64,
    ) -> Result<Self> {
        let Some(first) = observations.first() else {
            bail!(Validation, "dataset needs at least one observation");
        };
        let (n, d) = (first.n, first.dim());
        if observations.iter().any(|o| o.n != n || o.dim() != d) {
            bail!(Validation, "observations must share n and d");
        }
        Ok(Self {
            observations,
            n,
            d,
            model,
            alpha_true,
        })
    }

    pub fn observations(&self) -> &[MaxBlockObservation] {
        &self.observations
    }

    pub fn block_size(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

/// `num_obs` observations; observation `i` uses `rng.child(i)`.
pub fn sample_dataset(
    num_obs: usize,
    n: u64,
    d: usize,
    model: ModelKind,
    param: LogisticParam,
    method: BlockMethod,
    rng: &RngStream,
) -> Result<Dataset> {
    if num_obs == 0 || n == 0 || d == 0 {
        bail!(Validation, "num_obs, n and d must all be positive");
    }
    let observations = (0..num_obs as u64)
        .map(|i| {
            let mut stream = rng.child(i);
            match method {
                BlockMethod::Direct => sample_max_block(n, d, model, param, &mut stream),
                BlockMethod::Frailty => sample_max_block_frailty(n, d, model, param, &mut stream),
            }
        })
        .collect();
    Dataset::new(observations, model, param.alpha())
}
