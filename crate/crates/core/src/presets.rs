//! Experiment presets shipped with the crate (`presets/*.json`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{run, EstimateCache, RunConfig, TaskReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub runs: Vec<RunConfig>,
}

const SOURCES: &[(&str, &str)] = &[
    ("usps-like", include_str!("../presets/usps-like.json")),
    ("beta-skewness", include_str!("../presets/beta-skewness.json")),
    ("gauss-entropy", include_str!("../presets/gauss-entropy.json")),
    ("rot-gauss-lle", include_str!("../presets/rot-gauss-lle.json")),
    ("planted-outlier", include_str!("../presets/planted-outlier.json")),
];

pub fn preset_names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

pub fn preset(name: &str) -> Result<Preset> {
    let (_, text) = SOURCES.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        Error::Config(format!(
            "unknown preset `{name}` (available: {})",
            preset_names().join(", ")
        ))
    })?;
    Ok(serde_json::from_str(text)?)
}

impl Preset {
    /// Replaces the seed of every run.
    pub fn with_seed(mut self, seed: u64) -> Self {
        for r in &mut self.runs {
            r.seed = seed;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub preset: String,
    pub description: String,
    pub runs: Vec<TaskReport>,
}

/// Runs every configuration of the preset, sharing pairwise estimates
/// between runs on the same data.
pub fn run_preset(preset: &Preset) -> Result<ExperimentReport> {
    let mut cache = EstimateCache::new();
    let runs = preset
        .runs
        .iter()
        .map(|cfg| {
            log::info!("{}: running `{}`", preset.name, cfg.name);
            run(cfg, &mut cache)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        preset: preset.name.clone(),
        description: preset.description.clone(),
        runs,
    })
}
