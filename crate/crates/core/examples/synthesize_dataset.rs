//! Generates a labeled dataset of sample sets, writes it as CSV files plus
//! a JSON manifest, and loads it back.
//!
//! cargo run --example synthesize_dataset -- [out_dir]

use std::path::PathBuf;

use distkern::sampleset::write_dataset;
use distkern::synth::DatasetSpec;
use distkern::{load_dataset, split_folds};

fn main() -> distkern::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("distkern-gaussian-classes"));

    let spec = DatasetSpec::GaussianClasses {
        sets_per_class: 5,
        n_points: 100,
        means: vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]],
    };
    // the same seed always gives the same sets, whatever the thread count
    let generated = spec.generate(42)?;
    let manifest = write_dataset(&generated.dataset, &out)?;
    println!("wrote {} sets to {}", generated.dataset.len(), manifest.display());

    let loaded = load_dataset(&manifest)?;
    assert_eq!(loaded, generated.dataset);
    println!(
        "read back {} sets of dimension {}, classes {:?}",
        loaded.len(),
        loaded.dim(),
        loaded.class_labels()?
    );

    for (f, (train, test)) in split_folds(&loaded, 5, 1)?.iter().enumerate() {
        println!("fold {f}: {} train, test {:?}", train.len(), test);
    }
    Ok(())
}
