//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use emtagger_core::corpus::SplitPart;
use emtagger_core::eval::Metric;
use emtagger_core::{ModelKind, RankScope};

use crate::commands::{self, emit, pretty, EvalOptions, TrainOptions};
use crate::config::RunConfig;
use crate::error::{AppError, AppResult};

#[derive(Debug, Parser)]
#[command(name = "emtagger", version, about = "Embedding-based hashtag recommendation")]
pub struct Cli {
    /// Run configuration (TOML, or JSON by `.json` extension)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed for every randomized stage; overrides the config
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Working directory for corpus splits, models and reports
    #[arg(long, global = true)]
    pub workdir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Aloc,
    Muc,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Aloc => Metric::Aloc,
            MetricArg::Muc => Metric::Muc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Model1,
    Model2,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Model1 => ModelKind::Model1,
            ModelArg::Model2 => ModelKind::Model2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Expansion,
    Global,
}

impl From<ScopeArg> for RankScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Expansion => RankScope::Expansion,
            ScopeArg::Global => RankScope::Global,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Validation,
    Test,
}

impl From<SplitArg> for SplitPart {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Validation => SplitPart::Validation,
            SplitArg::Test => SplitPart::Test,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineArg {
    Lda,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean, filter and split a raw JSON Lines corpus
    Preprocess {
        /// Raw corpus; overrides `paths.input`
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Train a model on the train split and write a bundle
    Train {
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Vector size
        #[arg(long)]
        dim: Option<u32>,
        /// Bundle directory
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// Worker threads. Above 1, Model 2 training is nondeterministic
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        workers: u64,
    },
    /// Recommend hashtags for clean tweets (default: the test split)
    Recommend {
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// Clean tweets as JSON Lines
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum)]
        rank_scope: Option<ScopeArg>,
        /// Output file; stdout when absent
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score a bundle with ALOC or MuC
    Evaluate {
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "aloc")]
        metric: MetricArg,
        /// Recommendation budget: `aloc` is k=1, `muc` is k=|truth|; must match the metric
        #[arg(long, value_enum)]
        k_policy: Option<MetricArg>,
        #[arg(long, value_enum, default_value = "test")]
        split: SplitArg,
        #[arg(long, value_enum)]
        rank_scope: Option<ScopeArg>,
        #[arg(long, value_enum)]
        baseline: Option<BaselineArg>,
        /// Skip evaluation and compute the lift of this score...
        #[arg(long, requires = "baseline_score")]
        score: Option<f64>,
        /// ...over this baseline score
        #[arg(long, requires = "score")]
        baseline_score: Option<f64>,
        /// Per-tweet `id,hit,k` CSV
        #[arg(long)]
        per_tweet: Option<PathBuf>,
    },
    /// Train and score at several vector sizes on the validation split
    Sweep {
        /// Comma-separated vector sizes; defaults to `sweep_dims` from the config
        #[arg(long = "l", value_delimiter = ',')]
        l_values: Option<Vec<u32>>,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Metrics to report; repeatable
        #[arg(long, value_enum, default_values = ["aloc"])]
        metric: Vec<MetricArg>,
        /// CSV output; stdout when absent
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score the LDA topic-model baseline under both metrics
    Baseline {
        #[arg(long, value_enum, default_value = "test")]
        split: SplitArg,
    },
}

fn load_config(cli: &Cli) -> AppResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.override_seed(seed);
    }
    if let Some(w) = &cli.workdir {
        cfg.paths.workdir = Some(w.clone());
    }
    Ok(cfg)
}

/// Runs one parsed invocation.
pub fn run(cli: Cli) -> AppResult<()> {
    let mut cfg = load_config(&cli)?;
    match cli.command {
        Command::Preprocess { input } => {
            let input = input
                .or_else(|| cfg.paths.input.clone())
                .ok_or_else(|| AppError::usage("no input corpus: pass --input or set paths.input"))?;
            let report = commands::preprocess(&cfg, &input)?;
            emit(None, &pretty(&report))
        }
        Command::Train { model, dim, bundle, workers } => {
            if let Some(m) = model {
                cfg.model = m.into();
            }
            if let Some(d) = dim {
                cfg.train.dim = d;
            }
            if let Some(b) = bundle {
                cfg.paths.bundle = Some(b);
            }
            let workers = usize::try_from(workers).map_err(AppError::usage)?;
            let manifest = commands::train(&cfg, TrainOptions { workers })?;
            eprintln!(
                "trained {:?} with {} hashtags ({} without vectors) into {}",
                manifest.kind,
                manifest.hashtags.len(),
                manifest.absent.len(),
                cfg.bundle_dir().display()
            );
            Ok(())
        }
        Command::Recommend { bundle, input, k, rank_scope, output } => {
            if let Some(b) = bundle {
                cfg.paths.bundle = Some(b);
            }
            if let Some(k) = k {
                cfg.k = k;
            }
            if let Some(s) = rank_scope {
                cfg.rank_scope = s.into();
            }
            let text = commands::recommend(&cfg, input.as_deref())?;
            emit(output.as_deref(), &text)
        }
        Command::Evaluate { bundle, metric, k_policy, split, rank_scope, baseline, score, baseline_score, per_tweet } => {
            if let Some(policy) = k_policy {
                if policy != metric {
                    return Err(AppError::usage(format!(
                        "--k-policy {} does not match --metric {}",
                        Metric::from(policy).name(),
                        Metric::from(metric).name()
                    )));
                }
            }
            if let (Some(s), Some(b)) = (score, baseline_score) {
                return emit(None, &pretty(&commands::lift_report(metric.into(), s, b)?));
            }
            if let Some(b) = bundle {
                cfg.paths.bundle = Some(b);
            }
            if let Some(s) = rank_scope {
                cfg.rank_scope = s.into();
            }
            let opts = EvalOptions { split: split.into(), metric: metric.into(), baseline: baseline.is_some(), per_tweet };
            emit(None, &pretty(&commands::evaluate(&cfg, &opts)?))
        }
        Command::Sweep { l_values, model, metric, output } => {
            if let Some(m) = model {
                cfg.model = m.into();
            }
            let dims = l_values.unwrap_or_else(|| cfg.sweep_dims.clone());
            let metrics: Vec<Metric> = metric.into_iter().map(Metric::from).collect();
            let (_, csv) = commands::sweep(&cfg, &dims, &metrics)?;
            emit(output.as_deref(), &csv)
        }
        Command::Baseline { split } => emit(None, &pretty(&commands::baseline(&cfg, split.into())?)),
    }
}

/// Parses `args` and runs, returning the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("emtagger: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("emtagger: internal error");
            AppError::Internal(String::new()).exit_code()
        }
    }
}
