//! End-to-end runs: estimate pairwise kernels, symmetrize and project them,
//! tune `(C, σ)` by inner cross-validation, train, predict, report.
//!
//! All randomness is derived from `RunConfig::seed` through
//! [`derive_seed`], one stream per unit of work, so reports do not depend
//! on the number of worker threads.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{embed, reconstruction_weights, LleConfig};
use crate::error::{Error, Result};
use crate::gram::{
    pairwise_estimates, project_psd, symmetrize, GramMatrix, KernelSpec, PairwiseEstimates,
    ProjectionMode, Width,
};
use crate::learners::{
    predict_multiclass, score_one_class, train_multiclass, train_one_class, train_svr,
    training_hash, OneClassModel, SavedModel,
};
use crate::linalg::Matrix;
use crate::neighbors::{Backend, NeighborConfig};
use crate::sampleset::{load_dataset, split_indices, Dataset, Label, Partition};
use crate::synth::{derive_seed, rng_from_seed, DatasetSpec};

/// `{2⁻⁹, 2⁻⁶, …, 2²¹}`
pub fn default_c_grid() -> Vec<f64> {
    (-9..=21).step_by(3).map(|e| 2f64.powi(e)).collect()
}

/// `{2⁻⁴, 2⁻², …, 2¹⁰}`, multiplied by the median squared distance.
pub fn default_sigma_grid() -> Vec<f64> {
    (-4..=10).step_by(2).map(|e| 2f64.powi(e)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Gram,
    Classify,
    Regress,
    Anomaly,
    Lle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DataSource {
    Manifest { path: PathBuf },
    /// Generated with seed `derive_seed(RunConfig::seed, 0)`.
    Synthetic { spec: DatasetSpec },
}

fn default_k() -> usize {
    5
}
fn default_inner_folds() -> usize {
    3
}
fn default_epsilon() -> f64 {
    0.01
}
fn default_nu() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub name: String,
    pub task: Task,
    pub data: DataSource,
    pub kernel: KernelSpec,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub mode: ProjectionMode,
    #[serde(default = "default_c_grid")]
    pub c_grid: Vec<f64>,
    /// Gaussian width factors tried during tuning. Anomaly, LLE and Gram
    /// runs use the kernel's own width instead.
    #[serde(default = "default_sigma_grid")]
    pub sigma_grid: Vec<f64>,
    /// Outer cross-validation folds; `None` uses the dataset's partition.
    #[serde(default)]
    pub folds: Option<usize>,
    #[serde(default = "default_inner_folds")]
    pub inner_folds: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default)]
    pub lle: LleConfig,
    /// Period of the LLE ordering parameter (π for rotation angles of a
    /// centered Gaussian); `None` for a non-periodic parameter.
    #[serde(default)]
    pub lle_period: Option<f64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        NeighborConfig::new(self.k, self.backend)?;
        let positive = |v: &[f64]| v.iter().all(|x| *x > 0.0 && x.is_finite());
        if matches!(self.task, Task::Classify | Task::Regress) {
            if self.c_grid.is_empty() || !positive(&self.c_grid) {
                return Err(Error::Config("c_grid must be non-empty and positive".into()));
            }
            if matches!(self.kernel, KernelSpec::Gaussian { .. })
                && (self.sigma_grid.is_empty() || !positive(&self.sigma_grid))
            {
                return Err(Error::Config("sigma_grid must be non-empty and positive".into()));
            }
            if self.inner_folds < 2 {
                return Err(Error::Config("inner_folds must be >= 2".into()));
            }
        }
        if let Some(f) = self.folds {
            if f < 2 {
                return Err(Error::Config("folds must be >= 2".into()));
            }
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::Config("epsilon must be >= 0".into()));
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::Config("nu must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn neighbor_config(&self) -> Result<NeighborConfig> {
        NeighborConfig::new(self.k, self.backend)
    }

    pub fn data_seed(&self) -> u64 {
        derive_seed(self.seed, 0)
    }
}

/// A dataset plus the generating parameter of each set, when known.
#[derive(Clone, Debug)]
pub struct LoadedData {
    pub dataset: Dataset,
    pub parameters: Option<Vec<f64>>,
}

pub fn load_data(config: &RunConfig) -> Result<LoadedData> {
    match &config.data {
        DataSource::Manifest { path } => Ok(LoadedData {
            dataset: load_dataset(path)?,
            parameters: None,
        }),
        DataSource::Synthetic { spec } => {
            let g = spec.generate(config.data_seed())?;
            Ok(LoadedData {
                dataset: g.dataset,
                parameters: g.parameters,
            })
        }
    }
}

/// Memoizes pairwise base estimates across runs on the same data.
#[derive(Default)]
pub struct EstimateCache {
    entries: HashMap<String, Arc<PairwiseEstimates>>,
}

impl EstimateCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn get_or_compute(
        &mut self,
        config: &RunConfig,
        data: &Dataset,
    ) -> Result<Arc<PairwiseEstimates>> {
        let key = serde_json::to_string(&(
            &config.data,
            config.seed,
            config.kernel.base(),
            config.k,
            config.backend,
        ))?;
        if let Some(hit) = self.entries.get(&key) {
            return Ok(Arc::clone(hit));
        }
        let est = Arc::new(pairwise_estimates(
            data.sets(),
            config.kernel.base(),
            &config.neighbor_config()?,
        )?);
        self.entries.insert(key, Arc::clone(&est));
        Ok(est)
    }
}

/// Kernel matrix after symmetrization and mode-dependent projection.
///
/// In transductive mode the whole matrix is projected; in inductive mode
/// only the training block is, and the remaining entries stay symmetrized
/// raw estimates.
#[derive(Clone, Debug)]
pub struct ModeGram {
    pub values: Matrix,
    pub min_eigenvalue_before: f64,
    pub sigma: Option<f64>,
}

impl ModeGram {
    pub fn build(
        base: &PairwiseEstimates,
        kernel: &KernelSpec,
        width: Option<Width>,
        train: &[usize],
        mode: ProjectionMode,
    ) -> Result<Self> {
        let kernel = match width {
            Some(w) => kernel.with_width(w),
            None => *kernel,
        };
        let sigma = kernel.resolve_sigma(base, Some(train))?;
        let sym = symmetrize(&kernel.apply(base, sigma));
        let (values, min) = match mode {
            ProjectionMode::Transductive => {
                let p = project_psd(&sym)?;
                (p.values, p.min_eigenvalue_before.unwrap_or(0.0))
            }
            ProjectionMode::Inductive => {
                let p = project_psd(&sym.principal(train))?;
                let mut v = sym.values;
                for (a, &i) in train.iter().enumerate() {
                    for (b, &j) in train.iter().enumerate() {
                        v[(i, j)] = p.values[(a, b)];
                    }
                }
                (v, p.min_eigenvalue_before.unwrap_or(0.0))
            }
        };
        Ok(ModeGram {
            values,
            min_eigenvalue_before: min,
            sigma,
        })
    }

    /// Projected Gram restricted to `idx`, which must lie inside the
    /// projected block.
    pub fn block(&self, idx: &[usize]) -> GramMatrix {
        GramMatrix {
            values: self.values.select(idx, idx),
            symmetric: true,
            psd_projected: true,
            min_eigenvalue_before: Some(self.min_eigenvalue_before),
        }
    }

    pub fn row(&self, i: usize, cols: &[usize]) -> Vec<f64> {
        cols.iter().map(|&j| self.values[(i, j)]).collect()
    }
}

#[derive(Clone, Debug)]
enum Targets {
    Classes(Vec<usize>),
    Real(Vec<f64>),
}

impl Targets {
    fn values(&self) -> Vec<f64> {
        match self {
            Targets::Classes(c) => c.iter().map(|&v| v as f64).collect(),
            Targets::Real(z) => z.clone(),
        }
    }

    fn strata(&self, idx: &[usize]) -> Option<Vec<usize>> {
        match self {
            Targets::Classes(c) => Some(idx.iter().map(|&i| c[i]).collect()),
            Targets::Real(_) => None,
        }
    }
}

/// Trains on `train` (indices into `g`) and predicts `test`.
fn fit_predict(
    targets: &Targets,
    g: &ModeGram,
    train: &[usize],
    test: &[usize],
    c: f64,
    epsilon: f64,
) -> Result<Vec<f64>> {
    let block = g.block(train);
    match targets {
        Targets::Classes(cl) => {
            let y: Vec<usize> = train.iter().map(|&i| cl[i]).collect();
            // relabel to 0..r'-1 in case a class is missing from this subset
            let mut present: Vec<usize> = y.clone();
            present.sort_unstable();
            present.dedup();
            if present.len() < 2 {
                return Err(Error::Dataset("training subset has a single class".into()));
            }
            let local: Vec<usize> = y
                .iter()
                .map(|v| present.binary_search(v).unwrap())
                .collect();
            let model = train_multiclass(&block, &local, c)?;
            test.iter()
                .map(|&t| predict_multiclass(&model, &g.row(t, train)).map(|p| present[p] as f64))
                .collect()
        }
        Targets::Real(z) => {
            let y: Vec<f64> = train.iter().map(|&i| z[i]).collect();
            let model = train_svr(&block, &y, c, epsilon)?;
            test.iter().map(|&t| model.predict(&g.row(t, train))).collect()
        }
    }
}

/// Higher is better: accuracy for classes, negative MSE for reals.
fn score(targets: &Targets, test: &[usize], pred: &[f64]) -> f64 {
    match targets {
        Targets::Classes(cl) => {
            let hits = test
                .iter()
                .zip(pred)
                .filter(|(&i, &p)| cl[i] as f64 == p)
                .count();
            hits as f64 / test.len() as f64
        }
        Targets::Real(z) => {
            -test.iter().zip(pred).map(|(&i, p)| (z[i] - p).powi(2)).sum::<f64>()
                / test.len() as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub truth: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub inner_seed: u64,
    pub tie_break_seed: u64,
    pub c: f64,
    pub sigma_factor: Option<f64>,
    pub sigma: Option<f64>,
    /// Mean inner-CV score of the chosen configuration (accuracy, or
    /// negative MSE for regression).
    pub inner_score: f64,
    /// Number of grid cells tied at the best inner score.
    pub tied: usize,
    pub min_eigenvalue_before: f64,
    /// Accuracy for classification, RMSE for regression.
    pub metric: f64,
    /// Hash of the training-set ids of the final model.
    pub training_hash: String,
    pub predictions: Vec<Prediction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupervisedReport {
    pub task: Task,
    pub kernel: String,
    pub mode: ProjectionMode,
    pub config: RunConfig,
    pub data_seed: u64,
    pub split_seed: u64,
    pub metric_name: String,
    pub folds: Vec<FoldReport>,
    pub mean: f64,
    pub std: f64,
    /// Neighbor distances floored during estimation.
    pub clamped_distances: usize,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let std = if v.len() > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// Inner-CV scores on one fold for every C of the grid.
///
/// C values are visited in increasing order. Once SMO hits its iteration
/// cap, that C and every larger one score `-inf` and are not fitted: the
/// dual only gets harder to solve as the box grows.
fn inner_scores(
    config: &RunConfig,
    targets: &Targets,
    gram: &ModeGram,
    train: &[usize],
    test: &[usize],
) -> Result<Vec<f64>> {
    let mut order: Vec<usize> = (0..config.c_grid.len()).collect();
    order.sort_by(|&a, &b| config.c_grid[a].total_cmp(&config.c_grid[b]));
    let mut scores = vec![f64::NEG_INFINITY; order.len()];
    for ci in order {
        match fit_predict(targets, gram, train, test, config.c_grid[ci], config.epsilon) {
            Ok(pred) => scores[ci] = score(targets, test, &pred),
            Err(Error::SmoNonConvergence { iterations, gap }) => {
                log::debug!(
                    "C = {} did not converge in tuning ({iterations} iterations, gap {gap:e})",
                    config.c_grid[ci]
                );
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(scores)
}

struct CellScores {
    width: Option<f64>,
    gram: ModeGram,
    scores: Vec<f64>,
}

fn tune_and_test(
    config: &RunConfig,
    base: &PairwiseEstimates,
    targets: &Targets,
    ids: &[String],
    fold: usize,
    train: &[usize],
    test: &[usize],
) -> Result<FoldReport> {
    let inner_seed = derive_seed(config.seed, 100 + fold as u64);
    let tie_break_seed = derive_seed(config.seed, 200 + fold as u64);
    let strata = targets.strata(train);
    let inner = split_indices(train.len(), strata.as_deref(), config.inner_folds, inner_seed)?;
    let inner: Vec<(Vec<usize>, Vec<usize>)> = inner
        .into_iter()
        .map(|(a, b)| {
            (
                a.into_iter().map(|i| train[i]).collect(),
                b.into_iter().map(|i| train[i]).collect(),
            )
        })
        .collect();

    let widths: Vec<Option<f64>> = match config.kernel {
        KernelSpec::Gaussian { .. } => config.sigma_grid.iter().map(|&f| Some(f)).collect(),
        _ => vec![None],
    };
    let cells = widths
        .par_iter()
        .map(|&w| {
            let gram = ModeGram::build(
                base,
                &config.kernel,
                w.map(Width::MedianScaled),
                train,
                config.mode,
            )?;
            let per_fold = inner
                .par_iter()
                .map(|(itr, ite)| inner_scores(config, targets, &gram, itr, ite))
                .collect::<Result<Vec<Vec<f64>>>>()?;
            let scores = (0..config.c_grid.len())
                .map(|ci| per_fold.iter().map(|f| f[ci]).sum::<f64>() / inner.len() as f64)
                .collect();
            Ok(CellScores {
                width: w,
                gram,
                scores,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = cells
        .iter()
        .flat_map(|c| c.scores.iter().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return Err(Error::Config(
            "no grid cell converged during parameter tuning".into(),
        ));
    }
    let ties: Vec<(usize, usize)> = cells
        .iter()
        .enumerate()
        .flat_map(|(wi, cell)| {
            cell.scores
                .iter()
                .enumerate()
                .filter(move |(_, &s)| s == best)
                .map(move |(ci, _)| (wi, ci))
        })
        .collect();
    let (wi, ci) = ties[rng_from_seed(tie_break_seed).gen_range(0..ties.len())];
    let cell = &cells[wi];
    let c = config.c_grid[ci];

    let pred = fit_predict(targets, &cell.gram, train, test, c, config.epsilon)?;
    let truth = targets.values();
    let metric = match targets {
        Targets::Classes(_) => score(targets, test, &pred),
        Targets::Real(_) => (-score(targets, test, &pred)).sqrt(),
    };
    Ok(FoldReport {
        fold,
        n_train: train.len(),
        n_test: test.len(),
        inner_seed,
        tie_break_seed,
        c,
        sigma_factor: cell.width,
        sigma: cell.gram.sigma,
        inner_score: best,
        training_hash: training_hash(&train.iter().map(|&i| ids[i].as_str()).collect::<Vec<_>>()),
        tied: ties.len(),
        min_eigenvalue_before: cell.gram.min_eigenvalue_before,
        metric,
        predictions: test
            .iter()
            .zip(&pred)
            .map(|(&i, &p)| Prediction {
                id: ids[i].clone(),
                truth: truth[i],
                predicted: p,
            })
            .collect(),
    })
}

fn outer_folds(config: &RunConfig, data: &Dataset, targets: &Targets) -> Result<(u64, Vec<(Vec<usize>, Vec<usize>)>)> {
    let split_seed = derive_seed(config.seed, 1);
    match config.folds {
        Some(f) => {
            let strata = targets.strata(&(0..data.len()).collect::<Vec<_>>());
            Ok((split_seed, split_indices(data.len(), strata.as_deref(), f, split_seed)?))
        }
        None => {
            let train = data.indices_in(Partition::Train);
            let test = data.indices_in(Partition::Test);
            if train.is_empty() || test.is_empty() {
                return Err(Error::Dataset(
                    "dataset needs both train and test sets (or request folds)".into(),
                ));
            }
            Ok((split_seed, vec![(train, test)]))
        }
    }
}

fn run_supervised(config: &RunConfig, cache: &mut EstimateCache, task: Task) -> Result<SupervisedReport> {
    config.validate()?;
    let loaded = load_data(config)?;
    let data = &loaded.dataset;
    let targets = match task {
        Task::Classify => {
            let cl = data.class_labels()?;
            if cl.iter().all(|&c| c == cl[0]) {
                return Err(Error::Dataset("classification needs at least two classes".into()));
            }
            Targets::Classes(cl)
        }
        _ => Targets::Real(data.targets()?),
    };
    let (split_seed, folds) = outer_folds(config, data, &targets)?;
    let base = cache.get_or_compute(config, data)?;
    let ids: Vec<String> = data.sets().iter().map(|s| s.id().to_string()).collect();

    let fold_reports = folds
        .iter()
        .enumerate()
        .map(|(f, (train, test))| {
            tune_and_test(config, &base, &targets, &ids, f, train, test).map_err(|e| {
                Error::InFold {
                    fold: f,
                    source: Box::new(e),
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let metrics: Vec<f64> = fold_reports.iter().map(|f| f.metric).collect();
    let (mean, std) = mean_std(&metrics);
    Ok(SupervisedReport {
        task,
        kernel: config.kernel.label(),
        mode: config.mode,
        config: config.clone(),
        data_seed: config.data_seed(),
        split_seed,
        metric_name: if task == Task::Classify { "accuracy" } else { "rmse" }.into(),
        folds: fold_reports,
        mean,
        std,
        clamped_distances: base.clamped,
    })
}

/// Algorithm summary for classification: pairwise estimates → symmetrize →
/// project (per mode) → tune `(C, σ)` by inner CV → pairwise SVMs → vote.
pub fn run_classify(config: &RunConfig, cache: &mut EstimateCache) -> Result<SupervisedReport> {
    run_supervised(config, cache, Task::Classify)
}

/// As [`run_classify`] with ε-SVR; the metric is test RMSE.
pub fn run_regress(config: &RunConfig, cache: &mut EstimateCache) -> Result<SupervisedReport> {
    run_supervised(config, cache, Task::Regress)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnomalyScore {
    pub id: String,
    pub partition: Partition,
    pub score: f64,
    /// 1 = most anomalous.
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnomalyReport {
    pub kernel: String,
    pub mode: ProjectionMode,
    pub config: RunConfig,
    pub data_seed: u64,
    pub sigma: Option<f64>,
    pub nu: f64,
    pub n_train: usize,
    pub n_support: usize,
    pub offset: f64,
    pub min_eigenvalue_before: f64,
    /// Sorted from most to least anomalous.
    pub scores: Vec<AnomalyScore>,
    pub score_spread: f64,
    pub clamped_distances: usize,
    pub model: SavedModel<OneClassModel>,
}

/// One-class SVM on the training partition; every set is scored.
pub fn run_anomaly(config: &RunConfig, cache: &mut EstimateCache) -> Result<AnomalyReport> {
    config.validate()?;
    let loaded = load_data(config)?;
    let data = &loaded.dataset;
    let train = data.indices_in(Partition::Train);
    if train.len() < 2 {
        return Err(Error::Dataset("anomaly detection needs at least two training sets".into()));
    }
    let base = cache.get_or_compute(config, data)?;
    let gram = ModeGram::build(&base, &config.kernel, None, &train, config.mode)?;
    let model = train_one_class(&gram.block(&train), config.nu)?;
    let mut scores = (0..data.len())
        .map(|i| {
            Ok(AnomalyScore {
                id: data.sets()[i].id().to_string(),
                partition: data.partition()[i],
                score: score_one_class(&model, &gram.row(i, &train))?,
                rank: 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    scores.sort_by(|a, b| a.score.total_cmp(&b.score).then_with(|| a.id.cmp(&b.id)));
    for (r, s) in scores.iter_mut().enumerate() {
        s.rank = r + 1;
    }
    let spread = scores.last().map_or(0.0, |l| l.score) - scores.first().map_or(0.0, |f| f.score);
    Ok(AnomalyReport {
        kernel: config.kernel.label(),
        mode: config.mode,
        config: config.clone(),
        data_seed: config.data_seed(),
        sigma: gram.sigma,
        nu: config.nu,
        n_train: train.len(),
        n_support: model.support_indices.len(),
        offset: model.bias,
        min_eigenvalue_before: gram.min_eigenvalue_before,
        scores,
        score_spread: spread,
        clamped_distances: base.clamped,
        model: SavedModel::new(
            config.kernel.label(),
            gram.sigma,
            train.iter().map(|&i| data.sets()[i].id().to_string()).collect(),
            model,
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedSet {
    pub id: String,
    pub parameter: Option<f64>,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LleReport {
    pub kernel: String,
    pub config: RunConfig,
    pub data_seed: u64,
    pub sigma: Option<f64>,
    pub min_eigenvalue_before: f64,
    pub eigenvalues: Vec<f64>,
    pub embedding: Vec<EmbeddedSet>,
    /// Fraction of sets whose nearest embedded neighbor is adjacent in the
    /// ordering parameter; present when the parameter is known.
    pub adjacent_preservation: Option<f64>,
    pub clamped_distances: usize,
}

/// Fraction of points whose nearest neighbor in `coords` (Euclidean, ties
/// to the lower index) is adjacent to it in the sorted order of `param`.
/// With a period the order is circular.
pub fn adjacent_preservation(coords: &Matrix, param: &[f64], period: Option<f64>) -> f64 {
    let n = coords.rows();
    if n < 2 {
        return 1.0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let key = |i: usize| match period {
        Some(p) => param[i].rem_euclid(p),
        None => param[i],
    };
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
    let mut pos = vec![0; n];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let adjacent = |i: usize, j: usize| {
        let (a, b) = (pos[i], pos[j]);
        let d = a.abs_diff(b);
        d == 1 || (period.is_some() && d == n - 1)
    };
    let hits = (0..n)
        .filter(|&i| {
            let mut best = (f64::INFINITY, usize::MAX);
            for j in (0..n).filter(|&j| j != i) {
                let d: f64 = coords
                    .row(i)
                    .iter()
                    .zip(coords.row(j))
                    .map(|(a, b)| (a - b).powi(2))
                    .sum();
                if d < best.0 {
                    best = (d, j);
                }
            }
            adjacent(i, best.1)
        })
        .count();
    hits as f64 / n as f64
}

/// LLE of all sets from the projected Gram matrix.
pub fn run_lle(config: &RunConfig, cache: &mut EstimateCache) -> Result<LleReport> {
    config.validate()?;
    let loaded = load_data(config)?;
    let data = &loaded.dataset;
    config.lle.validate(data.len())?;
    let all: Vec<usize> = (0..data.len()).collect();
    let base = cache.get_or_compute(config, data)?;
    let gram = ModeGram::build(&base, &config.kernel, None, &all, ProjectionMode::Transductive)?;
    let weights = reconstruction_weights(&gram.block(&all), &config.lle)?;
    let emb = embed(&weights, config.lle.out_dim)?;

    let parameters = loaded.parameters.clone().or_else(|| {
        data.labels().and_then(|ls| {
            ls.iter()
                .map(|l| match l {
                    Label::Number(v) => Some(*v),
                    Label::Text(_) => None,
                })
                .collect()
        })
    });
    let preservation = parameters
        .as_ref()
        .map(|p| adjacent_preservation(&emb.coords, p, config.lle_period));
    let embedding = (0..data.len())
        .map(|i| EmbeddedSet {
            id: data.sets()[i].id().to_string(),
            parameter: parameters.as_ref().map(|p| p[i]),
            coords: emb.coords.row(i).to_vec(),
        })
        .collect();
    Ok(LleReport {
        kernel: config.kernel.label(),
        config: config.clone(),
        data_seed: config.data_seed(),
        sigma: gram.sigma,
        min_eigenvalue_before: gram.min_eigenvalue_before,
        eigenvalues: emb.eigenvalues,
        embedding,
        adjacent_preservation: preservation,
        clamped_distances: base.clamped,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub kernel: String,
    pub config: RunConfig,
    pub data_seed: u64,
    pub sigma: Option<f64>,
    pub min_eigenvalue_before: f64,
    pub set_ids: Vec<String>,
    pub clamped_distances: usize,
}

/// The symmetrized Gram matrix, projected per mode with the training
/// partition as the projected block in inductive mode.
pub fn run_gram(config: &RunConfig, cache: &mut EstimateCache) -> Result<(ModeGram, GramReport)> {
    config.validate()?;
    let loaded = load_data(config)?;
    let data = &loaded.dataset;
    let train = data.indices_in(Partition::Train);
    if train.is_empty() {
        return Err(Error::Dataset("no training sets".into()));
    }
    let base = cache.get_or_compute(config, data)?;
    let gram = ModeGram::build(&base, &config.kernel, None, &train, config.mode)?;
    let report = GramReport {
        kernel: config.kernel.label(),
        config: config.clone(),
        data_seed: config.data_seed(),
        sigma: gram.sigma,
        min_eigenvalue_before: gram.min_eigenvalue_before,
        set_ids: data.sets().iter().map(|s| s.id().to_string()).collect(),
        clamped_distances: base.clamped,
    };
    Ok((gram, report))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "lowercase")]
pub enum TaskReport {
    Gram(GramReport),
    Classify(SupervisedReport),
    Regress(SupervisedReport),
    Anomaly(AnomalyReport),
    Lle(LleReport),
}

impl TaskReport {
    pub fn name(&self) -> &str {
        match self {
            TaskReport::Gram(r) => &r.config.name,
            TaskReport::Classify(r) | TaskReport::Regress(r) => &r.config.name,
            TaskReport::Anomaly(r) => &r.config.name,
            TaskReport::Lle(r) => &r.config.name,
        }
    }
}

pub fn run(config: &RunConfig, cache: &mut EstimateCache) -> Result<TaskReport> {
    Ok(match config.task {
        Task::Gram => TaskReport::Gram(run_gram(config, cache)?.1),
        Task::Classify => TaskReport::Classify(run_classify(config, cache)?),
        Task::Regress => TaskReport::Regress(run_regress(config, cache)?),
        Task::Anomaly => TaskReport::Anomaly(run_anomaly(config, cache)?),
        Task::Lle => TaskReport::Lle(run_lle(config, cache)?),
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Config(format!("{}: {e}", path.display()))
}

/// Writes `<stem>.json` plus the task's CSV table into `dir`.
pub fn write_report(report: &TaskReport, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json = dir.join(format!("{stem}.json"));
    write_text(&json, &serde_json::to_string_pretty(report)?)?;
    let mut written = vec![json];
    match report {
        TaskReport::Classify(r) | TaskReport::Regress(r) => {
            let path = dir.join(format!("{stem}-predictions.csv"));
            let mut w = csv_writer(&path)?;
            w.write_record(["fold", "id", "truth", "predicted"]).map_err(csv_err(&path))?;
            for f in &r.folds {
                for p in &f.predictions {
                    w.write_record([
                        f.fold.to_string(),
                        p.id.clone(),
                        p.truth.to_string(),
                        p.predicted.to_string(),
                    ])
                    .map_err(csv_err(&path))?;
                }
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        TaskReport::Anomaly(r) => {
            let path = dir.join(format!("{stem}-scores.csv"));
            let mut w = csv_writer(&path)?;
            w.write_record(["rank", "id", "partition", "score"]).map_err(csv_err(&path))?;
            for s in &r.scores {
                let part = match s.partition {
                    Partition::Train => "train",
                    Partition::Test => "test",
                };
                w.write_record([s.rank.to_string(), s.id.clone(), part.into(), s.score.to_string()])
                    .map_err(csv_err(&path))?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        TaskReport::Lle(r) => {
            let path = dir.join(format!("{stem}-embedding.csv"));
            let mut w = csv_writer(&path)?;
            let d = r.embedding.first().map_or(0, |e| e.coords.len());
            let mut header = vec!["id".to_string()];
            header.extend((1..=d).map(|i| format!("y{i}")));
            w.write_record(&header).map_err(csv_err(&path))?;
            for e in &r.embedding {
                let mut rec = vec![e.id.clone()];
                rec.extend(e.coords.iter().map(f64::to_string));
                w.write_record(&rec).map_err(csv_err(&path))?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        TaskReport::Gram(_) => {}
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let c = default_c_grid();
        assert_eq!(c.len(), 11);
        assert_eq!(c[0], 2f64.powi(-9));
        assert_eq!(c[10], 2f64.powi(21));
        let s = default_sigma_grid();
        assert_eq!(s.len(), 8);
        assert_eq!(s[7], 1024.0);
    }

    #[test]
    fn preservation_on_a_line_and_circle() {
        let n = 10;
        let line = Matrix::from_fn(n, 1, |i, _| i as f64);
        let p: Vec<f64> = (0..n).map(|i| i as f64).collect();
        assert_eq!(adjacent_preservation(&line, &p, None), 1.0);
        let shuffled: Vec<f64> = (0..n).map(|i| ((i * 3) % n) as f64).collect();
        assert!(adjacent_preservation(&line, &shuffled, None) < 1.0);

        let circle = Matrix::from_fn(n, 2, |i, c| {
            let t = i as f64 * std::f64::consts::TAU / n as f64;
            if c == 0 { t.cos() } else { t.sin() }
        });
        assert_eq!(adjacent_preservation(&circle, &p, Some(n as f64)), 1.0);
    }
}
