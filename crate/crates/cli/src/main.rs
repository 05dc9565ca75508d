//! `cperiod`: conditional periodicity scoring from the command line.
//!
//! Subcommands score a pair of series (generated or read from CSV),
//! compute the %DET baseline, and run the sweep experiments, emitting
//! JSON or CSV for plotting. Every subcommand is deterministic given
//! `--seed`; exit code 1 flags input/flag problems, 2 computation failures.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use cperiod_core::experiments::{
    compare_csv, dimension_csv, dimension_json, run_compare_det, run_dimension_sweep,
    run_noise_sweep, run_periodicity_sweep, sweep_csv, sweep_json, CompareDetSweep, DimensionSweep,
    NoiseSweep, PeriodicitySweep,
};
use cperiod_core::pipeline::{conditional_score, periodicity_score, trial_seed, PipelineConfig};
use cperiod_core::rqa::det_pipeline;
use cperiod_core::signals::{
    generate, read_series_csv, sma_smooth, SignalFamily, SignalSpec, TimeSeries,
};
use cperiod_core::{embedding, Error};

#[derive(Parser)]
#[command(
    name = "cperiod",
    version,
    about = "Conditional periodicity scoring of time-series pairs, with a %DET baseline and sweep experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score the conditional periodicity of one series given another.
    Score(ScoreArgs),
    /// Score the periodicity of a single series (conditioned on itself).
    Selfscore(SelfscoreArgs),
    /// Percent determinism of a pair of series.
    Det(DetArgs),
    /// Mean score (with 95% CI) as the second signal's cycle count sweeps.
    SweepPeriodicity(SweepPeriodicityArgs),
    /// Mean score (with 95% CI) as the Gaussian noise level sweeps.
    SweepNoise(SweepNoiseArgs),
    /// Score of one pair across a range of embedding dimensions, with
    /// minimum-dimension markers.
    SweepDimension(SweepDimensionArgs),
    /// Score stability across dimensions vs %DET stability across lags.
    CompareDet(CompareDetArgs),
}

/// Where one input series comes from: a generator spec or a CSV file.
#[derive(Args, Clone)]
struct InputPair {
    /// Generator for the first series, `family:cycles[:amplitude[:damping]]`.
    #[arg(long, value_name = "SPEC")]
    gen1: Option<String>,
    /// CSV file for the first series (rows `t,value` or a single column).
    #[arg(long, value_name = "PATH")]
    file1: Option<PathBuf>,
    /// Generator for the second series.
    #[arg(long, value_name = "SPEC")]
    gen2: Option<String>,
    /// CSV file for the second series.
    #[arg(long, value_name = "PATH")]
    file2: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GenCommon {
    /// Gaussian noise level for generated series (fraction of amplitude).
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Number of samples for generated series.
    #[arg(long, default_value_t = 300)]
    points: usize,
    /// Base seed for all randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct PipelineFlags {
    /// Embedding dimension M (conflicts with --epsilon).
    #[arg(long, value_name = "M")]
    dim: Option<usize>,
    /// Precision ε deriving M (conflicts with --dim).
    #[arg(long, value_name = "EPS")]
    epsilon: Option<f64>,
    /// Number of embedding points (default: the minimum-points rule).
    #[arg(long, value_name = "N")]
    embed_points: Option<usize>,
    /// Number of principal components.
    #[arg(long, default_value_t = 2)]
    pcs: usize,
    /// SMA window (odd; default: largest admissible for the estimated w1).
    #[arg(long, value_name = "W")]
    sma: Option<usize>,
    /// Disable mean-shift denoising of the embedding.
    #[arg(long)]
    no_mean_shift: bool,
    /// Angular threshold for mean-shift neighbors, radians.
    #[arg(long, default_value_t = std::f64::consts::PI / 16.0)]
    angle: f64,
}

impl PipelineFlags {
    fn to_config(&self, seed: u64) -> Result<PipelineConfig, Error> {
        let base = match (self.dim, self.epsilon) {
            (Some(m), None) => PipelineConfig::with_dimension(m),
            (None, Some(eps)) => PipelineConfig::with_epsilon(eps),
            (Some(_), Some(_)) => {
                return Err(Error::Validation {
                    field: "dim",
                    reason: "--dim conflicts with --epsilon".to_string(),
                })
            }
            (None, None) => {
                return Err(Error::Validation {
                    field: "dim",
                    reason: "one of --dim or --epsilon is required".to_string(),
                })
            }
        };
        Ok(PipelineConfig {
            n: self.embed_points,
            k: self.pcs,
            sma_window: self.sma,
            mean_shift: !self.no_mean_shift,
            angle_threshold: self.angle,
            seed,
            ..base
        })
    }
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    input: InputPair,
    #[command(flatten)]
    gen: GenCommon,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelfscoreArgs {
    /// Generator for the series, `family:cycles[:amplitude[:damping]]`.
    #[arg(long, value_name = "SPEC")]
    gen1: Option<String>,
    /// CSV file for the series.
    #[arg(long, value_name = "PATH")]
    file1: Option<PathBuf>,
    #[command(flatten)]
    gen: GenCommon,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DetArgs {
    #[command(flatten)]
    input: InputPair,
    #[command(flatten)]
    gen: GenCommon,
    /// Embedding dimension M.
    #[arg(long, value_name = "M")]
    dim: usize,
    /// Index lag between embedding coordinates, in samples.
    #[arg(long, value_name = "TAU")]
    tau: usize,
    /// Recurrence distance threshold.
    #[arg(long)]
    tol: f64,
    /// Minimum diagonal length counted as deterministic.
    #[arg(long)]
    mindl: usize,
    /// Number of principal components.
    #[arg(long, default_value_t = 2)]
    pcs: usize,
    /// SMA window applied to both series before embedding (odd).
    #[arg(long, value_name = "W")]
    sma: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepPeriodicityArgs {
    /// Cycle count of the first signal.
    #[arg(long, default_value_t = 2)]
    w1: u32,
    /// Cycle counts of the second signal, `a..b` inclusive or one value.
    #[arg(long, value_name = "RANGE", default_value = "2..20")]
    w2: String,
    /// Waveform family for both signals.
    #[arg(long, default_value = "cosine")]
    family: String,
    #[command(flatten)]
    gen: GenCommon,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Trials per sweep cell.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepNoiseArgs {
    /// Generator for the first series (noise comes from --levels).
    #[arg(long, value_name = "SPEC", default_value = "cosine:3")]
    gen1: String,
    /// Generator for the second series.
    #[arg(long, value_name = "SPEC", default_value = "cosine:7")]
    gen2: String,
    /// Comma-separated noise levels to sweep.
    #[arg(long, default_value = "0,0.05,0.15,0.25,0.5,0.75")]
    levels: String,
    #[command(flatten)]
    gen: GenCommon,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Trials per sweep cell.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepDimensionArgs {
    /// Generator for the first series.
    #[arg(long, value_name = "SPEC", default_value = "cosine:3")]
    gen1: String,
    /// Generator for the second series.
    #[arg(long, value_name = "SPEC", default_value = "cosine:7")]
    gen2: String,
    /// Embedding dimensions to score, `a..b` inclusive.
    #[arg(long, value_name = "RANGE", default_value = "2..60")]
    dims: String,
    /// Precisions to mark with their minimum dimensions, comma-separated.
    #[arg(long, default_value = "0.1,0.05,0.02")]
    epsilons: String,
    #[command(flatten)]
    gen: GenCommon,
    /// Number of principal components.
    #[arg(long, default_value_t = 2)]
    pcs: usize,
    /// SMA window (odd; default: largest admissible).
    #[arg(long, value_name = "W")]
    sma: Option<usize>,
    /// Disable mean-shift denoising.
    #[arg(long)]
    no_mean_shift: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareDetArgs {
    /// Cycle count of the first signal.
    #[arg(long, default_value_t = 2)]
    w1: u32,
    /// Cycle counts of the second signal, `a..b` inclusive or one value.
    #[arg(long, value_name = "RANGE", default_value = "2..20")]
    w2: String,
    /// Waveform family for both signals.
    #[arg(long, default_value = "cosine")]
    family: String,
    /// Embedding dimensions, comma-separated.
    #[arg(long, default_value = "16,17,18")]
    dims: String,
    /// %DET index lags, comma-separated.
    #[arg(long, default_value = "2,3,4")]
    taus: String,
    /// Recurrence distance threshold.
    #[arg(long, default_value_t = 0.9)]
    tol: f64,
    /// Minimum diagonal length.
    #[arg(long, default_value_t = 15)]
    mindl: usize,
    /// Number of principal components for both measures.
    #[arg(long, default_value_t = 2)]
    pcs: usize,
    /// SMA window applied in both arms (odd).
    #[arg(long, default_value_t = 11)]
    sma: usize,
    /// Disable mean-shift denoising in the score arm.
    #[arg(long)]
    no_mean_shift: bool,
    #[command(flatten)]
    gen: GenCommon,
    /// Trials per (w2) cell.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

/// Parsed `family:cycles[:amplitude[:damping]]`.
struct GenSpec {
    family: SignalFamily,
    cycles: u32,
    amplitude: f64,
    damping: f64,
}

fn parse_gen_spec(text: &str) -> Result<GenSpec, Error> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() < 2 || parts.len() > 4 {
        return Err(Error::Validation {
            field: "gen",
            reason: format!("`{text}` is not family:cycles[:amplitude[:damping]]"),
        });
    }
    let family = SignalFamily::from_str(parts[0])?;
    let cycles: u32 = parts[1].parse().map_err(|_| Error::Validation {
        field: "gen",
        reason: format!("cycle count `{}` is not a positive integer", parts[1]),
    })?;
    let amplitude: f64 = match parts.get(2) {
        Some(a) => a.parse().map_err(|_| Error::Validation {
            field: "gen",
            reason: format!("amplitude `{a}` is not a number"),
        })?,
        None => 1.0,
    };
    let damping: f64 = match parts.get(3) {
        Some(d) => d.parse().map_err(|_| Error::Validation {
            field: "gen",
            reason: format!("damping `{d}` is not a number"),
        })?,
        None => 0.0,
    };
    Ok(GenSpec {
        family,
        cycles,
        amplitude,
        damping,
    })
}

fn signal_spec(gen: &GenSpec, common: &GenCommon, seed: u64) -> SignalSpec {
    SignalSpec {
        family: gen.family,
        cycles: gen.cycles,
        amplitude: gen.amplitude,
        damping: gen.damping,
        noise_sigma: common.noise,
        points: common.points,
        seed,
    }
}

/// Resolves one input: exactly one of generator / file.
fn load_input(
    which: &'static str,
    gen: &Option<String>,
    file: &Option<PathBuf>,
    common: &GenCommon,
    seed_index: u64,
) -> Result<TimeSeries, Error> {
    let file_flag = match which {
        "gen1" => "file1",
        _ => "file2",
    };
    match (gen, file) {
        (Some(_), Some(_)) => Err(Error::Validation {
            field: which,
            reason: format!("give either --{which} or --{file_flag}, not both"),
        }),
        (None, None) => Err(Error::Validation {
            field: which,
            reason: format!("an input is required (--{which} or --{file_flag})"),
        }),
        (Some(spec), None) => {
            let parsed = parse_gen_spec(spec)?;
            generate(&signal_spec(
                &parsed,
                common,
                trial_seed(common.seed, seed_index),
            ))
        }
        (None, Some(path)) => read_series_csv(path),
    }
}

/// `a..b` inclusive, or a single value.
fn parse_range_u32(text: &str) -> Result<Vec<u32>, Error> {
    let bad = |reason: String| Error::Validation {
        field: "range",
        reason,
    };
    if let Some((a, b)) = text.split_once("..") {
        let lo: u32 = a
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{text}`: bad start")))?;
        let hi: u32 = b
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{text}`: bad end")))?;
        if hi < lo {
            return Err(bad(format!("`{text}`: end below start")));
        }
        Ok((lo..=hi).collect())
    } else {
        Ok(vec![text.trim().parse().map_err(|_| {
            bad(format!("`{text}` is not an integer or a..b range"))
        })?])
    }
}

fn parse_list_usize(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| Error::Validation {
                field: "list",
                reason: format!("`{s}` is not an integer"),
            })
        })
        .collect()
}

fn parse_list_f64(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| Error::Validation {
                field: "list",
                reason: format!("`{s}` is not a number"),
            })
        })
        .collect()
}

fn configure_pool(jobs: Option<usize>) -> Result<(), Error> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::Validation {
                field: "jobs",
                reason: "need at least one worker".to_string(),
            });
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Validation {
                field: "jobs",
                reason: e.to_string(),
            })?;
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Score(args) => {
            let f1 = load_input("gen1", &args.input.gen1, &args.input.file1, &args.gen, 0)?;
            let f2 = load_input("gen2", &args.input.gen2, &args.input.file2, &args.gen, 1)?;
            let config = args.pipeline.to_config(args.gen.seed)?;
            let report = conditional_score(&f1, &f2, &config)?;
            warn_on_low_n(&report, f1.len().min(f2.len()));
            emit(&args.out, &format!("{}\n", report.to_json()))
        }
        Command::Selfscore(args) => {
            let f = load_input("gen1", &args.gen1, &args.file1, &args.gen, 0)?;
            let config = args.pipeline.to_config(args.gen.seed)?;
            let report = periodicity_score(&f, &config)?;
            emit(&args.out, &format!("{}\n", report.to_json()))
        }
        Command::Det(args) => {
            let mut f1 = load_input("gen1", &args.input.gen1, &args.input.file1, &args.gen, 0)?;
            let mut f2 = load_input("gen2", &args.input.gen2, &args.input.file2, &args.gen, 1)?;
            if let Some(w) = args.sma {
                f1 = sma_smooth(&f1, w)?;
                f2 = sma_smooth(&f2, w)?;
            }
            let det = det_pipeline(&f1, &f2, args.dim, args.tau, args.tol, args.mindl, args.pcs)?;
            emit(&args.out, &format!("{}\n", det.to_json()))
        }
        Command::SweepPeriodicity(args) => {
            configure_pool(args.jobs)?;
            let family = SignalFamily::from_str(&args.family)?;
            let template = SignalSpec {
                noise_sigma: args.gen.noise,
                ..SignalSpec::new(family, args.w1, args.gen.points)
            };
            let sweep = PeriodicitySweep {
                f1: template.clone(),
                f2: template,
                w2_values: parse_range_u32(&args.w2)?
                    .into_iter()
                    .filter(|w2| *w2 >= args.w1)
                    .collect(),
                config: args.pipeline.to_config(args.gen.seed)?,
                samples: args.samples,
                seed: args.gen.seed,
            };
            let points = run_periodicity_sweep(&sweep)?;
            let text = match args.format {
                OutputFormat::Csv => sweep_csv("w2", &points),
                OutputFormat::Json => format!("{}\n", sweep_json("w2", &points)),
            };
            emit(&args.out, &text)
        }
        Command::SweepNoise(args) => {
            configure_pool(args.jobs)?;
            let g1 = parse_gen_spec(&args.gen1)?;
            let g2 = parse_gen_spec(&args.gen2)?;
            let sweep = NoiseSweep {
                f1: signal_spec(&g1, &args.gen, 0),
                f2: signal_spec(&g2, &args.gen, 0),
                levels: parse_list_f64(&args.levels)?,
                config: args.pipeline.to_config(args.gen.seed)?,
                samples: args.samples,
                seed: args.gen.seed,
            };
            let points = run_noise_sweep(&sweep)?;
            let text = match args.format {
                OutputFormat::Csv => sweep_csv("noise", &points),
                OutputFormat::Json => format!("{}\n", sweep_json("noise", &points)),
            };
            emit(&args.out, &text)
        }
        Command::SweepDimension(args) => {
            configure_pool(args.jobs)?;
            let g1 = parse_gen_spec(&args.gen1)?;
            let g2 = parse_gen_spec(&args.gen2)?;
            let dims = parse_range_u32(&args.dims)?;
            let config = PipelineConfig {
                k: args.pcs,
                sma_window: args.sma,
                mean_shift: !args.no_mean_shift,
                seed: args.gen.seed,
                ..PipelineConfig::with_dimension(2)
            };
            let sweep = DimensionSweep {
                f1: signal_spec(&g1, &args.gen, trial_seed(args.gen.seed, 0)),
                f2: signal_spec(&g2, &args.gen, trial_seed(args.gen.seed, 1)),
                m_values: dims.into_iter().map(|m| m as usize).collect(),
                config,
                epsilons: parse_list_f64(&args.epsilons)?,
            };
            let result = run_dimension_sweep(&sweep)?;
            let text = match args.format {
                OutputFormat::Csv => dimension_csv(&result),
                OutputFormat::Json => format!("{}\n", dimension_json(&result)),
            };
            emit(&args.out, &text)
        }
        Command::CompareDet(args) => {
            configure_pool(args.jobs)?;
            let family = SignalFamily::from_str(&args.family)?;
            let template = SignalSpec {
                noise_sigma: args.gen.noise,
                ..SignalSpec::new(family, args.w1, args.gen.points)
            };
            let sweep = CompareDetSweep {
                f1: template.clone(),
                f2: template,
                w2_values: parse_range_u32(&args.w2)?
                    .into_iter()
                    .filter(|w2| *w2 >= args.w1)
                    .collect(),
                dims: parse_list_usize(&args.dims)?,
                taus: parse_list_usize(&args.taus)?,
                tol: args.tol,
                min_dl: args.mindl,
                k: args.pcs,
                sma_window: args.sma,
                mean_shift: !args.no_mean_shift,
                samples: args.samples,
                seed: args.gen.seed,
            };
            let rows = run_compare_det(&sweep)?;
            emit(&args.out, &compare_csv(&rows))
        }
    }
}

/// An explicit --embed-points below the minimum-points rule is honored but
/// flagged on stderr, using the cycle counts the run estimated.
fn warn_on_low_n(report: &cperiod_core::ScoreReport, points: usize) {
    if report.config.n.is_some() && points >= report.w1 as usize {
        let floor = embedding::min_embedding_points(points, report.w1, report.w2);
        if report.n < floor {
            eprintln!(
                "cperiod: warning: --embed-points {} is below the minimum-points rule ({floor} for w1={}, w2={})",
                report.n, report.w1, report.w2
            );
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            let first_line = err.to_string();
            let first_line = first_line.lines().next().unwrap_or("bad arguments");
            eprintln!("cperiod: error: {first_line}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("cperiod: error: {err}");
            ExitCode::from(if err.is_validation() { 1 } else { 2 })
        }
    }
}
