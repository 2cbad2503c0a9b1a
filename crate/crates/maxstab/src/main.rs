use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use maxstab::experiment::{self, ExperimentConfig, Study};
use maxstab::io;
use maxstab_core::{fit, sample_dataset, BlockMethod, LikelihoodKind, LogisticParam, ModelKind, RngStream};

#[derive(Parser)]
#[command(name = "maxstab", version, about = "Simulate and fit logistic max-stable block maxima")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a dataset of block maxima with occurrence partitions.
    Simulate {
        /// logistic | opc
        #[arg(long, default_value = "logistic")]
        model: ModelKind,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 100)]
        obs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Simulate whole blocks instead of the frailty shortcut.
        #[arg(long)]
        direct: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the dependence parameter to a dataset file.
    Fit {
        #[arg(long)]
        data: PathBuf,
        /// st | second-order | full; may be repeated.
        #[arg(long = "kind", default_value = "st")]
        kinds: Vec<LikelihoodKind>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bias of the estimators over a grid of (alpha, d, n) cells.
    BiasStudy(StudyArgs),
    /// Mean number of second-order likelihood terms per observation.
    TermCount(StudyArgs),
    /// Bias along a joint (d, n) path.
    ScalingStudy(StudyArgs),
    /// Probability of the all-singletons partition at n against n -> infinity.
    PartitionProb(StudyArgs),
}

#[derive(Args)]
struct StudyArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; falls back to the config, then MAXSTAB_WORKERS, then all cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    num_obs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn env_workers() -> anyhow::Result<Option<usize>> {
    match std::env::var("MAXSTAB_WORKERS") {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("MAXSTAB_WORKERS = {v:?}"))?)),
        Err(_) => Ok(None),
    }
}

fn study_command(study: Study, args: StudyArgs) -> anyhow::Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(s) = cfg.study {
        if s != study {
            bail!("config selects study {} but the command runs {}", s.as_str(), study.as_str());
        }
    }
    cfg.study = Some(study);
    cfg.replications = args.reps.unwrap_or(cfg.replications);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.num_obs = args.num_obs.unwrap_or(cfg.num_obs);
    cfg.workers = match args.workers.or(cfg.workers) {
        Some(w) => Some(w),
        None => env_workers()?,
    };
    cfg.output = args.out.or(cfg.output);
    let started = SystemTime::now();
    let clock = Instant::now();
    let table = experiment::run_study(&cfg)?;
    for line in &table.skipped {
        eprintln!("{line}");
    }
    match &cfg.output {
        Some(path) => {
            let manifest = experiment::write_outputs(&table, &cfg, path, started, clock.elapsed())?;
            eprintln!("wrote {} and {}", path.display(), manifest.display());
        }
        None => table.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate {
            model,
            alpha,
            d,
            n,
            obs,
            seed,
            stream,
            direct,
            out,
        } => {
            let method = if direct { BlockMethod::Direct } else { BlockMethod::Frailty };
            let rng = RngStream::new(seed, stream);
            let ds = sample_dataset(obs, n, d, model, LogisticParam::new(alpha)?, method, &rng)?;
            match out {
                Some(path) => io::save_dataset(&ds, &path)?,
                None => io::write_dataset(&ds, std::io::stdout().lock())?,
            }
        }
        Command::Fit { data, kinds, tol, out } => {
            let ds = io::load_dataset(&data)?;
            let results = kinds
                .iter()
                .map(|&k| fit(&ds, k, tol))
                .collect::<Result<Vec<_>, _>>()?;
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    io::write_fit_results(&results, file)?;
                }
                None => io::write_fit_results(&results, std::io::stdout().lock())?,
            }
        }
        Command::BiasStudy(args) => study_command(Study::BiasTable, args)?,
        Command::TermCount(args) => study_command(Study::TermCount, args)?,
        Command::ScalingStudy(args) => study_command(Study::Scaling, args)?,
        Command::PartitionProb(args) => study_command(Study::PartitionProb, args)?,
    }
    std::io::stdout().flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
