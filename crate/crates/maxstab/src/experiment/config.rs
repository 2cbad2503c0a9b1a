use std::path::{Path, PathBuf};

use maxstab_core::{LikelihoodKind, ModelKind};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Study {
    BiasTable,
    TermCount,
    Scaling,
    PartitionProb,
}

impl Study {
    pub fn as_str(self) -> &'static str {
        match self {
            Study::BiasTable => "bias_table",
            Study::TermCount => "term_count",
            Study::Scaling => "scaling",
            Study::PartitionProb => "partition_prob",
        }
    }

    pub(crate) fn code(self) -> u64 {
        match self {
            Study::BiasTable => 1,
            Study::TermCount => 2,
            Study::Scaling => 3,
            Study::PartitionProb => 4,
        }
    }
}

/// How `(d, n)` pairs are generated for the scaling study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingRule {
    /// `n = d^2 / 2`
    HalfSquare,
    /// `n = 2 d`
    TwiceD,
}

impl ScalingRule {
    pub fn block_size(self, d: usize) -> u64 {
        let d = d as u64;
        match self {
            ScalingRule::HalfSquare => d * d / 2,
            ScalingRule::TwiceD => 2 * d,
        }
    }
}

fn default_model() -> String {
    "logistic".into()
}
fn default_num_obs() -> usize {
    100
}
fn default_replications() -> usize {
    300
}
fn default_kinds() -> Vec<String> {
    vec!["st".into(), "second-order".into()]
}
fn default_tol() -> f64 {
    1e-6
}
fn default_blocks() -> usize {
    100_000
}
fn default_proxy_blocks() -> usize {
    2_000
}
fn default_proxy_factor() -> u64 {
    1_000
}

/// Batch study description, read from JSON. Every key except `alphas` has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub study: Option<Study>,
    #[serde(default = "default_model")]
    pub model: String,
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub dims: Vec<usize>,
    /// Block sizes `n`; crossed with `dims` unless `pairs` is given.
    #[serde(default)]
    pub block_sizes: Vec<u64>,
    /// Explicit `(d, n)` cells, overriding `dims x block_sizes`.
    #[serde(default)]
    pub pairs: Vec<(usize, u64)>,
    #[serde(default)]
    pub scaling_rule: Option<ScalingRule>,
    /// Observations per dataset (bias and scaling) or per cell (term count).
    #[serde(default = "default_num_obs")]
    pub num_obs: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_kinds")]
    pub kinds: Vec<String>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Partition-probability study: blocks simulated at `n`.
    #[serde(default = "default_blocks")]
    pub blocks: usize,
    /// Partition-probability study: blocks simulated at the proxy size.
    #[serde(default = "default_proxy_blocks")]
    pub proxy_blocks: usize,
    /// Proxy block size is `proxy_factor * n`.
    #[serde(default = "default_proxy_factor")]
    pub proxy_factor: u64,
}

impl ExperimentConfig {
    pub fn new(alphas: Vec<f64>) -> Self {
        Self {
            study: None,
            model: default_model(),
            alphas,
            dims: Vec::new(),
            block_sizes: Vec::new(),
            pairs: Vec::new(),
            scaling_rule: None,
            num_obs: default_num_obs(),
            replications: default_replications(),
            seed: 0,
            kinds: default_kinds(),
            output: None,
            workers: None,
            tol: default_tol(),
            blocks: default_blocks(),
            proxy_blocks: default_proxy_blocks(),
            proxy_factor: default_proxy_factor(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn model_kind(&self) -> Result<ModelKind> {
        Ok(self.model.parse()?)
    }

    pub fn likelihood_kinds(&self) -> Result<Vec<LikelihoodKind>> {
        let mut kinds = self
            .kinds
            .iter()
            .map(|k| k.parse().map_err(Error::from))
            .collect::<Result<Vec<LikelihoodKind>>>()?;
        kinds.dedup();
        Ok(kinds)
    }

    /// `(d, n)` cells: explicit pairs, the scaling rule, or `dims x block_sizes`.
    pub fn cells(&self) -> Vec<(usize, u64)> {
        if !self.pairs.is_empty() {
            return self.pairs.clone();
        }
        if let Some(rule) = self.scaling_rule {
            return self.dims.iter().map(|&d| (d, rule.block_size(d))).collect();
        }
        self.dims
            .iter()
            .flat_map(|&d| self.block_sizes.iter().map(move |&n| (d, n)))
            .collect()
    }

    pub fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn validate(&self) -> Result<Study> {
        let bad = |msg: String| Err(Error::Config(msg));
        let Some(study) = self.study else {
            return bad("no study selected".into());
        };
        self.model_kind()?;
        self.likelihood_kinds()?;
        if self.alphas.is_empty() {
            return bad("alphas must be non-empty".into());
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
            return bad(format!("alpha {a} outside (0, 1]"));
        }
        let cells = self.cells();
        if cells.is_empty() {
            return bad("no (d, n) cells: give dims with block_sizes or a scaling_rule, or pairs".into());
        }
        if let Some((d, n)) = cells.iter().find(|(d, n)| *d == 0 || *n == 0) {
            return bad(format!("cell (d = {d}, n = {n}) must have positive d and n"));
        }
        if let Some(w) = self.workers.filter(|w| *w == 0) {
            return bad(format!("workers must be positive, got {w}"));
        }
        match study {
            Study::BiasTable | Study::Scaling => {
                if self.replications < 2 {
                    return bad("bias studies need at least 2 replications".into());
                }
                if self.num_obs == 0 {
                    return bad("num_obs must be positive".into());
                }
                if self.tol.is_nan() || self.tol <= 0.0 {
                    return bad("tol must be positive".into());
                }
                if self.kinds.is_empty() {
                    return bad("kinds must be non-empty".into());
                }
            }
            Study::TermCount => {
                if self.num_obs < 2 {
                    return bad("term counts need at least 2 observations per cell".into());
                }
                if let Some((d, _)) = cells.iter().find(|(d, _)| *d > 128) {
                    return bad(format!("term counts support d <= 128, got {d}"));
                }
            }
            Study::PartitionProb => {
                if let Some((d, _)) = cells.iter().find(|(d, _)| *d > 4) {
                    return bad(format!("partition-probability study is limited to d <= 4, got {d}"));
                }
                if let Some((d, n)) = cells.iter().find(|(d, n)| *d as u64 > *n) {
                    return bad(format!("d = {d} exceeds block size n = {n}"));
                }
                if self.blocks < 2 || self.proxy_blocks < 2 {
                    return bad("blocks and proxy_blocks must be at least 2".into());
                }
                if self.proxy_factor < 2 {
                    return bad("proxy_factor must be at least 2".into());
                }
            }
        }
        Ok(study)
    }
}
