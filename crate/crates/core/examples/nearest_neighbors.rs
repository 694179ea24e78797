//! k-th nearest-neighbor distances within a set and across two sets, with
//! the brute-force and kd-tree backends giving the same answer.
//!
//! cargo run --example nearest_neighbors

use std::time::Instant;

use distkern::synth::{sample_family, Family};
use distkern::{knn_cross, knn_within, Backend};

fn main() -> distkern::Result<()> {
    let unit = Family::Uniform {
        lo: vec![0.0; 3],
        hi: vec![1.0; 3],
    };
    let x = sample_family(&unit, 4000, 1, "x")?;
    let y = sample_family(&unit, 3000, 2, "y")?;
    let k = 4;

    for backend in [Backend::Brute, Backend::KdTree] {
        let t = Instant::now();
        let rho = knn_within(&x, k, backend)?;
        let nu = knn_cross(&x, &y, k, backend)?;
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "{backend:?}: mean ρ_{k} {:.5}, mean ν_{k} {:.5}, {:?}",
            mean(&rho),
            mean(&nu),
            t.elapsed()
        );
    }
    let brute = knn_cross(&x, &y, k, Backend::Brute)?;
    let tree = knn_cross(&x, &y, k, Backend::KdTree)?;
    assert_eq!(brute, tree);
    println!("backends agree on all {} distances", brute.len());
    Ok(())
}
