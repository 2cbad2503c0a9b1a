//! Batch studies: bias tables, likelihood term counts, joint `(d, n)` scaling
//! and the all-distinct partition probability.
//!
//! Every cell draws from a stream keyed by the study, model and cell
//! coordinates, and every replication (or chunk) from a child of that stream,
//! so results do not depend on the worker count or on the other cells listed.

mod config;
mod table;

use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use maxstab_core::rng::mix_all;
use maxstab_core::sampler::sample_block_weights;
use maxstab_core::{
    fit, ratio_exact, sample_dataset, sample_max_block_frailty,
    BlockMethod, LikelihoodKind, LogisticParam, ModelKind, RngStream,
};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{ExperimentConfig, ScalingRule, Study};
pub use table::{ResultRow, ResultTable, HEADER};

use crate::error::{Error, Result};
use crate::stats::{bias_summary, mean_and_se};

/// Observations per parallel task in the term-count study.
const TERM_CHUNK: usize = 500;
/// Blocks per parallel task in the partition-probability study.
const BLOCK_CHUNK: usize = 1000;

pub fn run_study(cfg: &ExperimentConfig) -> Result<ResultTable> {
    match cfg.validate()? {
        Study::BiasTable | Study::Scaling => run_bias_like(cfg),
        Study::TermCount => run_term_count(cfg),
        Study::PartitionProb => run_partition_prob(cfg),
    }
}

pub fn run_bias_study(cfg: &ExperimentConfig) -> Result<ResultTable> {
    run_bias_like(&with_study(cfg, Study::BiasTable))
}

pub fn run_scaling_study(cfg: &ExperimentConfig) -> Result<ResultTable> {
    run_bias_like(&with_study(cfg, Study::Scaling))
}

fn with_study(cfg: &ExperimentConfig, study: Study) -> ExperimentConfig {
    let mut cfg = cfg.clone();
    cfg.study = Some(study);
    cfg
}

fn pool(cfg: &ExperimentConfig) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers())
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    alpha: f64,
    d: usize,
    n: u64,
}

fn cells(cfg: &ExperimentConfig) -> Vec<Cell> {
    let pairs = cfg.cells();
    cfg.alphas
        .iter()
        .flat_map(|&alpha| pairs.iter().map(move |&(d, n)| Cell { alpha, d, n }))
        .collect()
}

fn cell_stream(cfg: &ExperimentConfig, study: Study, model: ModelKind, cell: Cell) -> RngStream {
    let model_code = match model {
        ModelKind::Logistic => 1,
        ModelKind::OuterPowerClayton => 2,
    };
    let key = mix_all(&[study.code(), model_code, cell.alpha.to_bits(), cell.d as u64, cell.n]);
    RngStream::new(cfg.seed, key)
}

fn base_row(study: Study, model: ModelKind, cell: Cell, reps: usize) -> ResultRow {
    ResultRow {
        study: study.as_str().into(),
        model: model.as_str().into(),
        alpha: cell.alpha,
        d: cell.d,
        n: cell.n,
        reps,
        ..ResultRow::default()
    }
}

struct RepOutcome {
    estimates: Vec<f64>,
    terms: Vec<f64>,
}

fn run_bias_like(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let study = cfg.validate()?;
    let model = cfg.model_kind()?;
    let kinds = cfg.likelihood_kinds()?;
    let cells = cells(cfg);
    let mut skipped = Vec::new();
    let plan: Vec<Vec<LikelihoodKind>> = cells
        .iter()
        .map(|c| {
            kinds
                .iter()
                .copied()
                .filter(|k| match k.check(c.n, c.d) {
                    Ok(()) => true,
                    Err(e) => {
                        skipped.push(format!(
                            "skipped {} at alpha = {}, d = {}, n = {}: {e}",
                            k.as_str(),
                            c.alpha,
                            c.d,
                            c.n
                        ));
                        false
                    }
                })
                .collect()
        })
        .collect();

    let tasks: Vec<(usize, u64)> = (0..cells.len())
        .filter(|&i| !plan[i].is_empty())
        .flat_map(|i| (0..cfg.replications as u64).map(move |r| (i, r)))
        .collect();
    let outcomes: Vec<RepOutcome> = pool(cfg)?.install(|| {
        tasks
            .par_iter()
            .map(|&(i, r)| {
                let c = cells[i];
                let stream = cell_stream(cfg, study, model, c).child(r);
                let ds = sample_dataset(
                    cfg.num_obs,
                    c.n,
                    c.d,
                    model,
                    LogisticParam::new(c.alpha)?,
                    BlockMethod::Frailty,
                    &stream,
                )?;
                let estimates = plan[i]
                    .iter()
                    .map(|&k| fit(&ds, k, cfg.tol).map(|f| f.alpha_hat))
                    .collect::<maxstab_core::Result<Vec<f64>>>()?;
                let terms = ds
                    .observations()
                    .iter()
                    .map(|o| 1.0 + o.partition.refinement_count() as f64)
                    .collect();
                Ok(RepOutcome { estimates, terms })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::new();
    let mut outcomes = outcomes.into_iter();
    for (i, c) in cells.iter().enumerate() {
        if plan[i].is_empty() {
            continue;
        }
        let reps: Vec<RepOutcome> = outcomes.by_ref().take(cfg.replications).collect();
        for (slot, kind) in plan[i].iter().enumerate() {
            let estimates: Vec<f64> = reps.iter().map(|r| r.estimates[slot]).collect();
            let s = bias_summary(&estimates, c.alpha)?;
            let mut row = base_row(study, model, *c, cfg.replications);
            row.kind = Some(kind.as_str().into());
            row.mean_bias = Some(s.mean_bias);
            row.sd = Some(s.sample_sd);
            row.mc_se = Some(s.mc_se());
            row.t_stat = Some(s.t_statistic);
            row.significant = Some(s.significant_5pct);
            if *kind == LikelihoodKind::SecondOrder {
                let terms: Vec<f64> = reps.iter().flat_map(|r| r.terms.iter().copied()).collect();
                let (mean, se) = mean_and_se(&terms);
                row.mean_terms = Some(mean);
                row.terms_se = Some(se);
            }
            rows.push(row);
        }
    }
    Ok(ResultTable {
        study: study.as_str().into(),
        rows,
        skipped,
    })
}

/// Mean number of terms `1 + sum_B (2^{|B|-1} - 1)` in the second-order
/// likelihood contribution of one block maximum.
pub fn run_term_count(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let cfg = with_study(cfg, Study::TermCount);
    cfg.validate()?;
    let model = cfg.model_kind()?;
    let cells = cells(&cfg);
    let chunks = cfg.num_obs.div_ceil(TERM_CHUNK);
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|i| (0..chunks).map(move |k| (i, k)))
        .collect();
    let counts: Vec<Vec<f64>> = pool(&cfg)?.install(|| {
        tasks
            .par_iter()
            .map(|&(i, k)| {
                let c = cells[i];
                let param = LogisticParam::new(c.alpha)?;
                let mut stream = cell_stream(&cfg, Study::TermCount, model, c).child(k as u64);
                let len = TERM_CHUNK.min(cfg.num_obs - k * TERM_CHUNK);
                Ok((0..len)
                    .map(|_| {
                        let obs = sample_max_block_frailty(c.n, c.d, model, param, &mut stream);
                        1.0 + obs.partition.refinement_count() as f64
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let rows = cells
        .iter()
        .zip(counts.chunks(chunks))
        .map(|(c, parts)| {
            let all: Vec<f64> = parts.iter().flatten().copied().collect();
            let (mean, se) = mean_and_se(&all);
            let mut row = base_row(Study::TermCount, model, *c, cfg.num_obs);
            row.kind = Some(LikelihoodKind::SecondOrder.as_str().into());
            row.mean_terms = Some(mean);
            row.terms_se = Some(se);
            row
        })
        .collect();
    Ok(ResultTable {
        study: Study::TermCount.as_str().into(),
        rows,
        skipped: Vec::new(),
    })
}

/// `P(all d columns peak in distinct rows | weights) = d! e_d(w)` for
/// normalized frailty weights `w`.
fn distinct_rows_probability(weights: &[f64], d: usize) -> f64 {
    let mut e = vec![0.0; d + 1];
    e[0] = 1.0;
    for &w in weights {
        for k in (1..=d).rev() {
            e[k] += w * e[k - 1];
        }
    }
    (1..=d).fold(e[d], |p, k| p * k as f64)
}

/// Probability that a block maximum has the all-singletons partition, at `n`
/// and at the proxy size `proxy_factor * n`, and their ratio.
///
/// Each block contributes its conditional probability given the frailty
/// weights rather than a 0/1 indicator.
pub fn run_partition_prob(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let cfg = with_study(cfg, Study::PartitionProb);
    cfg.validate()?;
    let model = cfg.model_kind()?;
    let cells = cells(&cfg);
    let chunks_n = cfg.blocks.div_ceil(BLOCK_CHUNK);
    let chunks_r = cfg.proxy_blocks.div_ceil(BLOCK_CHUNK);
    // (cell, 0 = block size n / 1 = proxy, chunk)
    let tasks: Vec<(usize, u64, usize)> = (0..cells.len())
        .flat_map(|i| {
            (0..chunks_n)
                .map(move |k| (i, 0, k))
                .chain((0..chunks_r).map(move |k| (i, 1, k)))
        })
        .collect();
    let probs: Vec<Vec<f64>> = pool(&cfg)?.install(|| {
        tasks
            .par_iter()
            .map(|&(i, which, k)| {
                let c = cells[i];
                let param = LogisticParam::new(c.alpha)?;
                let (size, total) = if which == 0 {
                    (c.n, cfg.blocks)
                } else {
                    (c.n.saturating_mul(cfg.proxy_factor), cfg.proxy_blocks)
                };
                let mut stream =
                    cell_stream(&cfg, Study::PartitionProb, model, c).descend(&[which, k as u64]);
                let len = BLOCK_CHUNK.min(total - k * BLOCK_CHUNK);
                Ok((0..len)
                    .map(|_| {
                        let (w, _) = sample_block_weights(size, model, param, &mut stream);
                        distinct_rows_probability(&w, c.d)
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut parts = probs.into_iter();
    let mut rows = Vec::new();
    for c in &cells {
        let at_n: Vec<f64> = parts.by_ref().take(chunks_n).flatten().collect();
        let at_proxy: Vec<f64> = parts.by_ref().take(chunks_r).flatten().collect();
        let (pn, se_n) = mean_and_se(&at_n);
        let (pr, se_r) = mean_and_se(&at_proxy);
        let ratio = pn / pr;
        let ratio_se = ratio * ((se_n / pn).powi(2) + (se_r / pr).powi(2)).sqrt();
        let proxy_n = c.n.saturating_mul(cfg.proxy_factor);
        let mut row = base_row(Study::PartitionProb, model, *c, cfg.blocks);
        row.prob_rn = Some(pn);
        row.prob_r = Some(pr);
        row.ratio = Some(ratio);
        row.ratio_se = Some(ratio_se);
        row.ratio_exact = Some(ratio_exact(c.n, c.d as u64)?);
        row.proxy_bound = Some((c.d * c.d) as f64 / (2.0 * proxy_n as f64));
        rows.push(row);
    }
    Ok(ResultTable {
        study: Study::PartitionProb.as_str().into(),
        rows,
        skipped: Vec::new(),
    })
}

/// Build identifier recorded in manifests.
pub fn build_id() -> String {
    match option_env!("MAXSTAB_BUILD_ID") {
        Some(id) => format!("{}-{} ({id})", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        None => format!("{}-{}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub study: &'a str,
    pub config: &'a ExperimentConfig,
    pub seed: u64,
    pub workers: usize,
    pub build_id: String,
    pub started_unix: u64,
    pub elapsed_seconds: f64,
    pub output: &'a Path,
    pub rows: usize,
    pub skipped: &'a [String],
}

/// Path of the manifest written next to `output`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the CSV to `output` and the run manifest beside it.
pub fn write_outputs(
    table: &ResultTable,
    cfg: &ExperimentConfig,
    output: &Path,
    started: SystemTime,
    elapsed: Duration,
) -> Result<PathBuf> {
    table.save_csv(output)?;
    let manifest = Manifest {
        study: &table.study,
        config: cfg,
        seed: cfg.seed,
        workers: cfg.workers(),
        build_id: build_id(),
        started_unix: started.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        elapsed_seconds: elapsed.as_secs_f64(),
        output,
        rows: table.rows.len(),
        skipped: &table.skipped,
    };
    let path = manifest_path(output);
    let text = serde_json::to_string_pretty(&manifest).map_err(|source| Error::Json {
        path: path.clone(),
        source,
    })?;
    std::fs::write(&path, text + "\n").map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}
