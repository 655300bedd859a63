//! Command-line experiment runner.
//!
//! Exit codes: `0` success, `2` configuration error (unreadable or invalid
//! config, bad override), `3` runtime error (including observation files
//! whose dimensions do not match the scenario).

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bench::runtime_sweep;
use crate::config::ExperimentConfig;
use crate::detectors::{Detector, DetectorId, GridSpec};
use crate::io::{
    fmt_float, read_observations, write_cost_reports, write_curve, write_observations,
};
use crate::montecarlo::{calibrate_threshold, detection_curve, roc_curve, CalibratedDetector};
use crate::seed::{self, STREAM_CALIBRATION};
use crate::signal::{generate_observations_with, GenerationOptions};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "freqdev",
    version,
    about = "Frequency-deviation detection experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write one synthetic observation set as CSV.
    Generate(CommonArgs),
    /// Evaluate every configured detector on an observation CSV.
    Detect(CommonArgs),
    /// Calibrate thresholds for every detector and false-alarm level.
    Calibrate(CommonArgs),
    /// Detection probability versus the configured sweep.
    Curve(CommonArgs),
    /// ROC curves at the scenario's frequency deviation.
    Roc(CommonArgs),
    /// Flop model and wall-clock runtime versus N.
    Bench(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Detect(_) => "detect",
            Command::Calibrate(_) => "calibrate",
            Command::Curve(_) => "curve",
            Command::Roc(_) => "roc",
            Command::Bench(_) => "bench",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Generate(a)
            | Command::Detect(a)
            | Command::Calibrate(a)
            | Command::Curve(a)
            | Command::Roc(a)
            | Command::Bench(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Experiment config (JSON). Built-in defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a config field, e.g. `--set scenario.N=4` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Master seed (overrides `master_seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 picks automatically. `bench` always uses 1.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Observation CSV for `detect` (overrides `input`).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    let args = cli.command.args();
    let config = match resolve_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let threads = if matches!(cli.command, Command::Bench(_)) {
        1
    } else {
        args.threads
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_RUNTIME;
        }
    };
    match pool.install(|| execute(&cli.command, &config, threads)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Loads the config file (or defaults), applies `--set` overrides, then the
/// dedicated flags, and validates.
pub fn resolve_config(args: &CommonArgs) -> Result<ExperimentConfig> {
    let base = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let mut config = base.with_overrides(&args.overrides)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(out) = &args.out {
        config.output_dir = out.clone();
    }
    if let Some(input) = &args.input {
        config.input = Some(input.clone());
    }
    config.validate()?;
    Ok(config)
}

fn detector_for(id: DetectorId, config: &ExperimentConfig) -> Detector {
    Detector::new(id)
        .with_grid(config.grid)
        .with_kappa2(config.kappa2)
        .with_design_delta(config.lrt_delta())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn calibration_seed(config: &ExperimentConfig) -> u64 {
    seed::point_seed(config.master_seed, STREAM_CALIBRATION, 0)
}

fn execute(command: &Command, config: &ExperimentConfig, threads: usize) -> Result<()> {
    let out = &config.output_dir;
    fs::create_dir_all(out)?;
    let mut files: Vec<String> = Vec::new();
    let mut record = |name: String| -> PathBuf {
        let path = out.join(&name);
        files.push(name);
        path
    };
    let alpha_tag = |a: f64| format!("a{a}");

    match command {
        Command::Generate(_) => {
            let obs = generate_observations_with(
                &config.scenario,
                config.hypothesis,
                config.master_seed,
                GenerationOptions {
                    noiseless: config.noiseless,
                },
            )?;
            let path = record("observations.csv".into());
            write_observations(&obs, BufWriter::new(File::create(path)?))?;
        }
        Command::Detect(_) => {
            let input = config
                .input
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("detect needs --input or `input`".into()))?;
            let obs = read_observations(File::open(input)?)?;
            obs.check_matches(&config.scenario)?;
            let alpha = *config
                .alpha_list
                .first()
                .ok_or_else(|| Error::InvalidArgument("alpha_list is empty".into()))?;
            let path = record("detections.csv".into());
            let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
            w.write_record(["detector", "statistic", "threshold", "decision"])?;
            for &id in &config.detector_ids {
                let detector = detector_for(id, config);
                let cal = calibrate_threshold(
                    &detector,
                    &config.scenario,
                    alpha,
                    config.trials,
                    calibration_seed(config),
                )?;
                let statistic = detector.statistic(&obs, &config.scenario)?;
                let decision = if statistic > cal.threshold {
                    "reject"
                } else {
                    "accept"
                };
                println!(
                    "{id}: statistic={} threshold={} alpha={alpha} decision={decision}",
                    fmt_float(statistic),
                    fmt_float(cal.threshold)
                );
                w.write_record([
                    id.to_string(),
                    fmt_float(statistic),
                    fmt_float(cal.threshold),
                    decision.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Command::Calibrate(_) => {
            for &id in &config.detector_ids {
                let detector = detector_for(id, config);
                for &alpha in &config.alpha_list {
                    let cal: CalibratedDetector = calibrate_threshold(
                        &detector,
                        &config.scenario,
                        alpha,
                        config.trials,
                        calibration_seed(config),
                    )?;
                    let path = record(format!("calibration_{id}_{}.json", alpha_tag(alpha)));
                    write_json(&path, &cal)?;
                }
            }
        }
        Command::Curve(_) => {
            for &id in &config.detector_ids {
                let detector = detector_for(id, config);
                for &alpha in &config.alpha_list {
                    let curve = detection_curve(
                        &detector,
                        &config.scenario,
                        &config.sweep,
                        alpha,
                        config.trials,
                        config.master_seed,
                    )?;
                    let stem = format!("curve_{id}_{}", alpha_tag(alpha));
                    let path = record(format!("{stem}.csv"));
                    write_curve(&curve, BufWriter::new(File::create(path)?))?;
                    let sidecar = json!({
                        "detector": detector,
                        "alpha": alpha,
                        "trials": config.trials,
                        "master_seed": config.master_seed,
                        "scenario": config.scenario,
                        "grid": config.grid,
                        "sweep": config.sweep,
                    });
                    write_json(&record(format!("{stem}.json")), &sidecar)?;
                }
            }
        }
        Command::Roc(_) => {
            for &id in &config.detector_ids {
                let detector = detector_for(id, config);
                let curve = roc_curve(
                    &detector,
                    &config.scenario,
                    config.trials,
                    config.master_seed,
                )?;
                let stem = format!("roc_{id}");
                write_curve(
                    &curve,
                    BufWriter::new(File::create(record(format!("{stem}.csv")))?),
                )?;
                let sidecar = json!({
                    "detector": detector,
                    "trials": config.trials,
                    "master_seed": config.master_seed,
                    "scenario": config.scenario,
                    "grid": config.grid,
                });
                write_json(&record(format!("{stem}.json")), &sidecar)?;
            }
        }
        Command::Bench(_) => {
            let grid = GridSpec {
                n_alpha: config.bench.n_alpha,
                ..config.grid
            };
            let reports = runtime_sweep(
                &config.detector_ids,
                &config.bench.n_values,
                &config.scenario,
                &grid,
                config.bench.repetitions,
                config.master_seed,
            )?;
            for r in &reports {
                println!(
                    "{} N={} flops={} median={}ns p90={}ns batch={}",
                    r.detector_id,
                    r.samples,
                    r.flops_model,
                    r.wall_ns_median,
                    r.wall_ns_p90,
                    r.batch
                );
            }
            write_cost_reports(
                &reports,
                BufWriter::new(File::create(record("bench.csv".into()))?),
            )?;
            write_json(&record("bench.json".into()), &reports)?;
        }
    }

    let args = command.args();
    let manifest = json!({
        "subcommand": command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "overrides": args.overrides,
        "seed_flag": args.seed,
        "threads": threads,
        "seeds": {
            "master": config.master_seed,
            "calibration": calibration_seed(config),
        },
        "files": files,
    });
    write_json(&out.join("manifest.json"), &manifest)?;
    Ok(())
}
