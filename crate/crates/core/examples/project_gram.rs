//! Builds a Gaussian-Hellinger Gram matrix over a handful of sample sets,
//! shows how far the raw estimate is from PSD, projects it, and writes the
//! result as CSV with its JSON sidecar.
//!
//! cargo run --example project_gram -- [out_dir]

use std::path::PathBuf;

use distkern::divergence::DistanceKind;
use distkern::gram::{write_gram, GramSidecar, ProjectionMode};
use distkern::synth::{sample_many, Family};
use distkern::{build_gram, eigh, project_psd, symmetrize, Backend, KernelSpec, NeighborConfig, Width};

fn main() -> distkern::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);

    let families: Vec<Family> = (0..40)
        .map(|i| Family::Gaussian {
            mean: vec![0.05 * i as f64, 0.0],
            cov: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        })
        .collect();
    let sets = sample_many(&families, 200, 3, "g")?;

    let kernel = KernelSpec::Gaussian {
        distance: DistanceKind::Hellinger,
        width: Width::MedianScaled(16.0),
    };
    let cfg = NeighborConfig::new(3, Backend::Auto)?;
    let raw = build_gram(&sets, &kernel, &cfg)?;
    println!("raw asymmetry: {:.3e}", raw.values.max_asymmetry());

    let sym = symmetrize(&raw);
    let before = eigh(&sym.values)?;
    println!(
        "eigenvalues before projection: max {:.4}, min {:.4e}",
        before.values[0],
        before.values.last().unwrap()
    );

    let psd = project_psd(&sym)?;
    let after = eigh(&psd.values)?;
    println!(
        "after projection: min {:.3e}, Frobenius change {:.3e}",
        after.values.last().unwrap(),
        {
            let n = psd.len();
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += (psd.get(i, j) - sym.get(i, j)).powi(2);
                }
            }
            s.sqrt()
        }
    );

    let path = out.join("hellinger-gram.csv");
    let sidecar = GramSidecar {
        kernel,
        sigma: None,
        k: cfg.k,
        mode: ProjectionMode::Transductive,
        min_eigenvalue_before: psd.min_eigenvalue_before,
        set_ids: sets.iter().map(|s| s.id().to_string()).collect(),
    };
    write_gram(&psd, &sidecar, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
