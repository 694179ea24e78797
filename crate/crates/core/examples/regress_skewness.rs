//! Distribution regression: learns the skewness of Beta(a, 3) from samples
//! alone, with a Rényi-0.9 Gaussian kernel and ε-SVR.
//!
//! A reduced version of the `beta-skewness` preset; run
//! `distkern experiment beta-skewness` for the full-size one.
//!
//! cargo run --example regress_skewness

use distkern::divergence::DistanceKind;
use distkern::embed::LleConfig;
use distkern::gram::ProjectionMode;
use distkern::pipeline::{run_regress, DataSource, EstimateCache, RunConfig, Task};
use distkern::synth::{beta_skewness, DatasetSpec};
use distkern::{Backend, KernelSpec, Width};

fn main() -> distkern::Result<()> {
    let config = RunConfig {
        name: "beta-skewness-small".into(),
        task: Task::Regress,
        data: DataSource::Synthetic {
            spec: DatasetSpec::BetaSkewness {
                n_sets: 120,
                n_train: 100,
                n_points: 300,
                a_range: (3.0, 20.0),
                b: 3.0,
            },
        },
        kernel: KernelSpec::Gaussian {
            distance: DistanceKind::RenyiSq { alpha: 0.9 },
            width: Width::MedianScaled(1.0),
        },
        k: 5,
        backend: Backend::Auto,
        mode: ProjectionMode::Transductive,
        c_grid: vec![0.125, 1.0, 8.0],
        sigma_grid: vec![4.0, 16.0, 64.0],
        folds: None,
        inner_folds: 3,
        seed: 5,
        epsilon: 0.01,
        nu: 0.1,
        lle: LleConfig::default(),
        lle_period: None,
    };
    let report = run_regress(&config, &mut EstimateCache::new())?;
    let fold = &report.folds[0];
    println!(
        "test RMSE {:.4} over {} sets (targets span {:.3}..{:.3})",
        fold.metric,
        fold.n_test,
        beta_skewness(20.0, 3.0),
        beta_skewness(3.0, 3.0)
    );
    println!("chosen C {} and width factor {:?}", fold.c, fold.sigma_factor);
    for p in fold.predictions.iter().take(5) {
        println!("  {}  true {:+.4}  predicted {:+.4}", p.id, p.truth, p.predicted);
    }
    Ok(())
}
