//! Command-line front end. The `distkern` binary is a thin wrapper around
//! [`main`].

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::divergence::DistanceKind;
use crate::embed::LleConfig;
use crate::error::{Error, Result};
use crate::gram::{write_gram, GramMatrix, GramSidecar, KernelSpec, ProjectionMode, Width};
use crate::neighbors::Backend;
use crate::pipeline::{
    default_c_grid, default_sigma_grid, run, run_gram, write_report, DataSource, EstimateCache,
    RunConfig, Task,
};
use crate::presets::{preset, run_preset};
use crate::sampleset::write_dataset;
use crate::synth::DatasetSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NON_CONVERGENCE: i32 = 4;

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err.root() {
        Error::Config(_) | Error::InvalidParameter(_) | Error::Json(_) => EXIT_CONFIG,
        Error::Io { .. }
        | Error::Manifest { .. }
        | Error::Csv { .. }
        | Error::NonFinite { .. }
        | Error::DimensionMismatch { .. }
        | Error::TooFewPoints { .. }
        | Error::Dataset(_)
        | Error::Shape(_) => EXIT_DATA,
        Error::SmoNonConvergence { .. } | Error::EigenNonConvergence { .. } => EXIT_NON_CONVERGENCE,
        _ => EXIT_OTHER,
    }
}

#[derive(Debug, Parser)]
#[command(name = "distkern", version, about = "Divergence kernels and kernel machines over sample sets")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "DISTKERN_JOBS")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset as a manifest plus one CSV per set.
    Synth(SynthArgs),
    /// Estimate, symmetrize and project a Gram matrix.
    Gram(TaskArgs),
    /// SVM classification with inner-CV tuning.
    Classify(TaskArgs),
    /// ε-SVR regression with inner-CV tuning.
    Regress(TaskArgs),
    /// One-class SVM anomaly scores.
    Anomaly(TaskArgs),
    /// Locally linear embedding of the sets.
    Lle(TaskArgs),
    /// Run a shipped experiment preset.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Preset whose (first) dataset to generate.
    #[arg(long, conflicts_with = "spec")]
    pub preset: Option<String>,
    /// JSON file holding a dataset spec.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub preset: String,
    /// Overrides the seed of every run in the preset.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for the JSON report and CSV tables.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TaskArgs {
    /// Dataset manifest (JSON).
    #[arg(long, required_unless_present = "config")]
    pub data: Option<PathBuf>,
    /// Full run configuration as JSON; other flags are ignored.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// linear, poly, gauss-l2, gauss-hellinger, gauss-renyi, gauss-kl.
    #[arg(long, default_value = "gauss-renyi")]
    pub kernel: String,
    /// Rényi order for `gauss-renyi`.
    #[arg(long, default_value_t = 0.9)]
    pub alpha: f64,
    /// Polynomial degree.
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
    /// Polynomial offset.
    #[arg(long, default_value_t = 1.0)]
    pub offset: f64,
    /// Gaussian width factor (times the median squared distance).
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// brute, kdtree or auto.
    #[arg(long, default_value = "auto")]
    pub backend: String,
    /// transductive or inductive.
    #[arg(long, default_value = "transductive")]
    pub mode: String,
    /// Comma-separated C values; `2^e` accepted.
    #[arg(long)]
    pub c_grid: Option<String>,
    /// Comma-separated width factors; `2^e` accepted.
    #[arg(long)]
    pub sigma_grid: Option<String>,
    /// Outer CV folds (default: use the manifest's partition).
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub nu: f64,
    #[arg(long, default_value_t = 5)]
    pub kappa: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Output directory (gram: output CSV path).
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_value(tok: &str) -> Result<f64> {
    let t = tok.trim();
    let v = match t.split_once('^') {
        Some((b, e)) => {
            let b: f64 = b.trim().parse().map_err(|_| Error::Config(format!("bad number `{t}`")))?;
            let e: i32 = e.trim().parse().map_err(|_| Error::Config(format!("bad exponent `{t}`")))?;
            b.powi(e)
        }
        None => t.parse().map_err(|_| Error::Config(format!("bad number `{t}`")))?,
    };
    Ok(v)
}

/// Parses `"2^-9,2^-6,0.5"`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let v = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_value)
        .collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return Err(Error::Config("empty grid".into()));
    }
    Ok(v)
}

pub fn parse_kernel(name: &str, alpha: f64, degree: u32, offset: f64, width: f64) -> Result<KernelSpec> {
    let width = Width::MedianScaled(width);
    let gauss = |distance| KernelSpec::Gaussian { distance, width };
    let k = match name {
        "linear" => KernelSpec::Linear,
        "poly" => KernelSpec::Polynomial { c: offset, degree },
        "gauss-l2" => gauss(DistanceKind::L2),
        "gauss-hellinger" => gauss(DistanceKind::Hellinger),
        "gauss-renyi" => gauss(DistanceKind::renyi(alpha)?),
        "gauss-kl" => gauss(DistanceKind::KlSq),
        other => return Err(Error::Config(format!("unknown kernel `{other}`"))),
    };
    k.validate()?;
    Ok(k)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

impl TaskArgs {
    pub fn to_config(&self, task: Task) -> Result<RunConfig> {
        if let Some(path) = &self.config {
            let mut cfg: RunConfig = read_json(path)?;
            cfg.task = task;
            return Ok(cfg);
        }
        let data = self
            .data
            .clone()
            .ok_or_else(|| Error::Config("--data is required".into()))?;
        let cfg = RunConfig {
            name: task_name(task).into(),
            task,
            data: DataSource::Manifest { path: data },
            kernel: parse_kernel(&self.kernel, self.alpha, self.degree, self.offset, self.width)?,
            k: self.k,
            backend: self.backend.parse::<Backend>()?,
            mode: self.mode.parse::<ProjectionMode>()?,
            c_grid: match &self.c_grid {
                Some(s) => parse_grid(s)?,
                None => default_c_grid(),
            },
            sigma_grid: match &self.sigma_grid {
                Some(s) => parse_grid(s)?,
                None => default_sigma_grid(),
            },
            folds: self.folds,
            inner_folds: 3,
            seed: self.seed,
            epsilon: self.epsilon,
            nu: self.nu,
            lle: LleConfig {
                kappa: self.kappa,
                out_dim: self.dim,
                ..LleConfig::default()
            },
            lle_period: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn task_name(task: Task) -> &'static str {
    match task {
        Task::Gram => "gram",
        Task::Classify => "classify",
        Task::Regress => "regress",
        Task::Anomaly => "anomaly",
        Task::Lle => "lle",
    }
}

fn run_task(args: &TaskArgs, task: Task) -> Result<()> {
    let cfg = args.to_config(task)?;
    let mut cache = EstimateCache::new();
    if task == Task::Gram {
        let (gram, report) = run_gram(&cfg, &mut cache)?;
        if let Some(dir) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let sidecar = GramSidecar {
            kernel: cfg.kernel,
            sigma: report.sigma,
            k: cfg.k,
            mode: cfg.mode,
            min_eigenvalue_before: Some(report.min_eigenvalue_before),
            set_ids: report.set_ids.clone(),
        };
        let g = GramMatrix {
            values: gram.values,
            symmetric: true,
            psd_projected: cfg.mode == ProjectionMode::Transductive,
            min_eigenvalue_before: Some(report.min_eigenvalue_before),
        };
        write_gram(&g, &sidecar, &args.out)?;
        println!("{}", args.out.display());
        return Ok(());
    }
    let report = run(&cfg, &mut cache)?;
    for p in write_report(&report, &args.out, task_name(task))? {
        println!("{}", p.display());
    }
    Ok(())
}

fn run_synth(args: &SynthArgs) -> Result<()> {
    let spec: DatasetSpec = match (&args.preset, &args.spec) {
        (Some(name), _) => {
            let p = preset(name)?;
            match p.runs.first().map(|r| &r.data) {
                Some(DataSource::Synthetic { spec }) => spec.clone(),
                _ => return Err(Error::Config(format!("preset `{name}` has no synthetic data"))),
            }
        }
        (None, Some(path)) => read_json(path)?,
        (None, None) => return Err(Error::Config("pass --preset or --spec".into())),
    };
    let generated = spec.generate(args.seed)?;
    let manifest = write_dataset(&generated.dataset, &args.out)?;
    println!("{}", manifest.display());
    Ok(())
}

fn run_experiment(args: &ExperimentArgs) -> Result<()> {
    let mut p = preset(&args.preset)?;
    if let Some(seed) = args.seed {
        p = p.with_seed(seed);
    }
    let report = run_preset(&p)?;
    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let path = args.out.join(format!("{}.json", p.name));
    fs::write(&path, serde_json::to_string_pretty(&report)?).map_err(|e| Error::io(&path, e))?;
    println!("{}", path.display());
    for r in &report.runs {
        for w in write_report(r, &args.out, &format!("{}-{}", p.name, r.name()))? {
            println!("{}", w.display());
        }
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    let jobs = cli.jobs.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Synth(a) => run_synth(a),
        Command::Gram(a) => run_task(a, Task::Gram),
        Command::Classify(a) => run_task(a, Task::Classify),
        Command::Regress(a) => run_task(a, Task::Regress),
        Command::Anomaly(a) => run_task(a, Task::Anomaly),
        Command::Lle(a) => run_task(a, Task::Lle),
        Command::Experiment(a) => run_experiment(a),
    })
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("2^-1, 4,2^3").unwrap(), vec![0.5, 4.0, 8.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("x").is_err());
    }

    #[test]
    fn kernel_names() {
        assert_eq!(parse_kernel("linear", 0.9, 2, 1.0, 1.0).unwrap(), KernelSpec::Linear);
        assert!(parse_kernel("gauss-renyi", 1.0, 2, 1.0, 1.0).is_err());
        assert!(parse_kernel("rbf", 0.9, 2, 1.0, 1.0).is_err());
    }

    #[test]
    fn exit_codes_look_through_folds() {
        let e = Error::InFold {
            fold: 1,
            source: Box::new(Error::SmoNonConvergence {
                iterations: 1,
                gap: 1.0,
            }),
        };
        assert_eq!(exit_code(&e), EXIT_NON_CONVERGENCE);
        assert_eq!(exit_code(&Error::Dataset("x".into())), EXIT_DATA);
        assert_eq!(exit_code(&Error::Config("x".into())), EXIT_CONFIG);
    }
}
