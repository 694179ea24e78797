//! Estimates divergences between two Gaussian sample sets and compares the
//! Rényi estimate with its closed form.
//!
//! cargo run --example estimate_divergence

use distkern::divergence::{estimate_d, renyi_divergence, squared_distance, DistanceKind, DivergenceSpec};
use distkern::synth::{gaussian_renyi_divergence, sample_family, Family};
use distkern::{Backend, NeighborConfig};

fn main() -> distkern::Result<()> {
    let p = Family::Gaussian {
        mean: vec![0.0, 0.0],
        cov: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    };
    let q = Family::Gaussian {
        mean: vec![1.0, 0.0],
        cov: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    };
    let cfg = NeighborConfig::new(5, Backend::Auto)?;
    let alpha = 0.5;
    let exact = gaussian_renyi_divergence(
        (&[0.0, 0.0], &[vec![1.0, 0.0], vec![0.0, 1.0]]),
        (&[1.0, 0.0], &[vec![1.0, 0.0], vec![0.0, 1.0]]),
        alpha,
    )?;
    println!("closed-form Rényi-{alpha}: {exact:.4}");

    for n in [250, 1000, 4000] {
        let x = sample_family(&p, n, 11, "x")?;
        let y = sample_family(&q, n, 12, "y")?;
        let renyi = renyi_divergence(&x, &y, alpha, &cfg)?;
        let hellinger = squared_distance(&x, &y, DistanceKind::Hellinger, &cfg)?;
        let l2 = squared_distance(&x, &y, DistanceKind::L2, &cfg)?;
        // D_{0,0} is the normalization of p, exactly 1 for any sample
        let one = estimate_d(&x, &y, DivergenceSpec::new(0.0, 0.0), &cfg)?;
        println!(
            "n = {n:5}  Rényi {renyi:.4}  Hellinger² {hellinger:.4}  L2² {l2:.4}  D_00 {one}"
        );
    }
    Ok(())
}
