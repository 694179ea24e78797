//! One-class SVM over sample sets: 49 sets from N(0, I) and one from a
//! shifted Gaussian. The shifted set should get the lowest score. The
//! trained model is saved to JSON and read back for rescoring.
//!
//! cargo run --example detect_anomaly -- [out_dir]

use std::path::PathBuf;

use distkern::divergence::DistanceKind;
use distkern::embed::LleConfig;
use distkern::gram::ProjectionMode;
use distkern::learners::{OneClassModel, SavedModel};
use distkern::pipeline::{run_anomaly, DataSource, EstimateCache, RunConfig, Task};
use distkern::synth::DatasetSpec;
use distkern::{Backend, KernelSpec, Width};

fn main() -> distkern::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let config = RunConfig {
        name: "planted-outlier-small".into(),
        task: Task::Anomaly,
        data: DataSource::Synthetic {
            spec: DatasetSpec::PlantedOutlier {
                n_sets: 50,
                n_outliers: 1,
                n_train: 50,
                n_points: 200,
                dim: 2,
                shift: 5.0,
            },
        },
        kernel: KernelSpec::Gaussian {
            distance: DistanceKind::Hellinger,
            width: Width::MedianScaled(16.0),
        },
        k: 5,
        backend: Backend::Auto,
        mode: ProjectionMode::Transductive,
        c_grid: vec![1.0],
        sigma_grid: vec![1.0],
        folds: None,
        inner_folds: 3,
        seed: 2,
        epsilon: 0.01,
        nu: 0.1,
        lle: LleConfig::default(),
        lle_period: None,
    };
    let report = run_anomaly(&config, &mut EstimateCache::new())?;
    println!("offset {:.4}, {} support sets", report.offset, report.n_support);
    for s in report.scores.iter().take(3) {
        println!("  rank {}  {}  score {:+.4}", s.rank, s.id, s.score);
    }
    println!("  ...");
    let last = report.scores.last().unwrap();
    println!("  rank {}  {}  score {:+.4}", last.rank, last.id, last.score);

    let path = out.join("one-class-model.json");
    report.model.save(&path)?;
    let back: SavedModel<OneClassModel> = SavedModel::load(&path)?;
    println!(
        "saved model to {} (training hash {}…)",
        path.display(),
        &back.training_hash[..12]
    );
    Ok(())
}
