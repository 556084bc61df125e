//! Command-line driver for the ensemble benchmark.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ensbench::config::{parse_config, ExperimentConfig};
use ensbench::emit::{emit_results, load_results, Format};
use ensbench::ensemble::Method;
use ensbench::harness::{
    aggregate, correlation_matrix, error_ratios, noise_study, run_cv, sign_counts, sign_test, size_sweep,
    sweep_curve, synthetic_study, ReportRow, SyntheticOptions,
};
use ensbench::learners::LearnerKind;

#[derive(Parser)]
#[command(name = "ensbench", version, about = "Ensemble learning benchmark")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated k-fold cross-validation.
    Run {
        #[command(flatten)]
        common: Common,
        /// Also write the aggregated report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Error against ensemble size, building each ensemble once.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        max_members: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,5,10,15,20,25,50,75,100")]
        sizes: Vec<usize>,
        /// Also write mean error per size (with a composite over datasets).
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Network ensembles on noisy copies of each dataset.
    Noise {
        #[command(flatten)]
        common: Common,
        /// Noise levels in percent.
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,30")]
        levels: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        replicas: usize,
    },
    /// Perceptron ensembles on one-sided-noise hyperplane problems.
    Synthetic {
        #[arg(long, default_value_t = 5)]
        datasets: usize,
        #[arg(long, default_value_t = 0.20)]
        noise: f64,
        #[arg(long, default_value_t = 100)]
        max_members: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,5,10,15,20,25,50,75,100")]
        sizes: Vec<usize>,
        #[arg(long, env = "ENSBENCH_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 800)]
        train: usize,
        #[arg(long, default_value_t = 2000)]
        test: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Statistics over emitted results.
    Stats {
        #[command(subcommand)]
        command: StatsCommand,
    },
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Two-tailed sign test of a method against a baseline across datasets.
    Sign {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long, default_value = "single")]
        baseline: String,
    },
    /// Pearson correlation of per-dataset error ratios between methods.
    Correlate {
        #[arg(long)]
        results: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let mut cfg = parse_config(path).with_context(|| format!("reading config {}", path.display()))?;
    if let Ok(seed) = std::env::var("ENSBENCH_SEED") {
        cfg.master_seed = seed
            .trim()
            .parse()
            .with_context(|| format!("ENSBENCH_SEED '{seed}' is not an integer"))?;
    }
    Ok(cfg)
}

fn provenance(command: &str, cfg: &ExperimentConfig, extra: &[String]) -> Vec<String> {
    let mut lines = vec![format!("ensbench {} {command}", env!("CARGO_PKG_VERSION"))];
    lines.extend(extra.iter().cloned());
    lines.extend(cfg.to_string().lines().map(str::to_owned));
    lines
}

fn emit_report(path: &Path, rows: &[ReportRow], format: Format, prov: &[String]) -> Result<()> {
    emit_results(rows, Some(path), format, prov).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common, report } => {
            let cfg = load_config(&common.config)?;
            let prov = provenance("run", &cfg, &[]);
            let cells = run_cv(&cfg)?;
            let format = common.output.format.into();
            emit_results(&cells, common.output.out.as_deref(), format, &prov)?;
            if let Some(path) = report {
                emit_report(&path, &aggregate(&cells)?, format, &prov)?;
            }
        }
        Command::Sweep {
            common,
            max_members,
            sizes,
            curve,
        } => {
            let cfg = load_config(&common.config)?;
            let extra = [format!("max_members = {max_members}"), format!("sizes = {}", join(&sizes))];
            let prov = provenance("sweep", &cfg, &extra);
            let cells = size_sweep(&cfg, max_members, &sizes)?;
            let format = common.output.format.into();
            emit_results(&cells, common.output.out.as_deref(), format, &prov)?;
            if let Some(path) = curve {
                emit_results(&sweep_curve(&cells), Some(&path), format, &prov)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Noise {
            common,
            levels,
            replicas,
        } => {
            let cfg = load_config(&common.config)?;
            if let Some(l) = levels.iter().find(|l| !(0.0..=100.0).contains(*l)) {
                bail!("noise level {l}% outside 0..100");
            }
            let fractions: Vec<f64> = levels.iter().map(|l| l / 100.0).collect();
            let extra = [format!("levels = {}", join(&levels)), format!("replicas = {replicas}")];
            let prov = provenance("noise", &cfg, &extra);
            let (rows, _) = noise_study(&cfg, &fractions, replicas)?;
            emit_results(&rows, common.output.out.as_deref(), common.output.format.into(), &prov)?;
        }
        Command::Synthetic {
            datasets,
            noise,
            max_members,
            sizes,
            seed,
            train,
            test,
            output,
        } => {
            let opts = SyntheticOptions {
                datasets,
                noise,
                max_members,
                eval_sizes: sizes,
                seed,
                n_train: train,
                n_test: test,
                ..SyntheticOptions::default()
            };
            let prov = vec![
                format!("ensbench {} synthetic", env!("CARGO_PKG_VERSION")),
                format!(
                    "datasets = {datasets}, noise = {noise}, max_members = {max_members}, sizes = {}, seed = {seed}, train = {train}, test = {test}",
                    join(&opts.eval_sizes)
                ),
            ];
            let rows = synthetic_study(&opts)?;
            emit_results(&rows, output.out.as_deref(), output.format.into(), &prov)?;
        }
        Command::Stats { command } => stats(command)?,
    }
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn stats(command: StatsCommand) -> Result<()> {
    match command {
        StatsCommand::Sign {
            results,
            method,
            baseline,
        } => {
            let method: Method = method.parse()?;
            let baseline: Method = baseline.parse()?;
            let report = load_results(&results).with_context(|| format!("reading {}", results.display()))?;
            println!("learner,method,baseline,wins,losses,ties,p_value");
            let mut any = false;
            for learner in [LearnerKind::Network, LearnerKind::Tree] {
                let pick = |m: Method| {
                    report
                        .iter()
                        .filter(|r| r.learner == learner && r.method == m)
                        .map(|r| (r.dataset.clone(), r.error_mean))
                        .collect::<std::collections::BTreeMap<_, _>>()
                };
                let (a, b) = (pick(method), pick(baseline));
                let common: Vec<&String> = a.keys().filter(|d| b.contains_key(*d)).collect();
                if common.is_empty() {
                    continue;
                }
                any = true;
                let ma: Vec<f64> = common.iter().map(|d| a[*d]).collect();
                let mb: Vec<f64> = common.iter().map(|d| b[*d]).collect();
                let (w, l, t) = sign_counts(&ma, &mb);
                println!("{learner},{method},{baseline},{w},{l},{t},{:.6e}", sign_test(w, l));
            }
            if !any {
                bail!("no datasets with both {method} and {baseline} results");
            }
        }
        StatsCommand::Correlate { results } => {
            let report = load_results(&results).with_context(|| format!("reading {}", results.display()))?;
            let mut series = Vec::new();
            for learner in [LearnerKind::Network, LearnerKind::Tree] {
                for method in Method::ALL.into_iter().filter(|m| *m != Method::Single) {
                    if !report.iter().any(|r| r.learner == learner && r.method == method) {
                        continue;
                    }
                    series.push((format!("{method}-{learner}"), error_ratios(&report, learner, method)?));
                }
            }
            let Some(first) = series.first() else {
                bail!("no ensemble results with a single baseline");
            };
            let datasets: Vec<String> = first
                .1
                .keys()
                .filter(|d| series.iter().all(|(_, s)| s.contains_key(*d)))
                .cloned()
                .collect();
            let named: Vec<(String, Vec<f64>)> = series
                .iter()
                .map(|(n, s)| (n.clone(), datasets.iter().map(|d| s[d]).collect()))
                .collect();
            let m = correlation_matrix(&named)?;
            println!("method,{}", m.names.join(","));
            for (name, row) in m.names.iter().zip(&m.values) {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
                println!("{name},{}", cells.join(","));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("ensbench: --threads must be at least 1");
            return ExitCode::FAILURE;
        }
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("ensbench: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ensbench: {e:#}");
            ExitCode::FAILURE
        }
    }
}
