mod common;

use std::fs;

use distkern::divergence::DistanceKind;
use distkern::gram::{pairwise_estimates, write_gram, GramSidecar, ProjectionMode};
use distkern::pipeline::ModeGram;
use distkern::synth::{sample_many, Family};
use distkern::{build_gram, eigh, project_psd, symmetrize, Backend, GramMatrix, KernelSpec, Matrix, NeighborConfig, SampleSet, Width};
use proptest::prelude::*;

use common::*;

fn m(rows: &[&[f64]]) -> Matrix {
    Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn cfg() -> NeighborConfig {
    NeighborConfig::new(5, Backend::Auto).unwrap()
}

fn gaussian_sets(n_sets: usize, n: usize, seed: u64) -> Vec<SampleSet> {
    let fams: Vec<Family> = (0..n_sets)
        .map(|i| Family::Gaussian {
            mean: vec![0.3 * i as f64, -0.1 * i as f64],
            cov: vec![vec![1.0, 0.2], vec![0.2, 0.5]],
        })
        .collect();
    sample_many(&fams, n, seed, "g").unwrap()
}

fn gauss(distance: DistanceKind, width: Width) -> KernelSpec {
    KernelSpec::Gaussian { distance, width }
}

#[test]
fn linear_kernel_of_identical_uniform_samples() {
    // the query point is its own first cross neighbor here, which biases
    // every entry up by roughly k/(k-2); a large k keeps that under 0.1
    let u = Family::Uniform {
        lo: vec![0.0],
        hi: vec![1.0],
    };
    let x = sample_many(&[u], 4000, 21, "u").unwrap().remove(0);
    let twin = SampleSet::new("twin", 1, x.points().to_vec()).unwrap();
    let cfg = NeighborConfig::new(40, Backend::Auto).unwrap();
    let g = build_gram(&[x, twin], &KernelSpec::Linear, &cfg).unwrap();
    let oracle = simpson(|_| 1.0, 0.0, 1.0, 10);
    for v in g.values.as_slice() {
        assert!((v - oracle).abs() < 0.1, "{v}");
    }
}

#[test]
fn linear_kernel_of_independent_uniform_samples() {
    let u = Family::Uniform {
        lo: vec![0.0],
        hi: vec![1.0],
    };
    let sets = sample_many(&[u.clone(), u], 4000, 22, "u").unwrap();
    let g = build_gram(&sets, &KernelSpec::Linear, &cfg()).unwrap();
    assert!((g.values[(0, 1)] - 1.0).abs() < 0.05);
    assert!((g.values[(1, 0)] - 1.0).abs() < 0.05);
}

#[test]
fn gaussian_kernel_entries_lie_in_unit_interval() {
    let sets = gaussian_sets(6, 200, 1);
    for distance in [
        DistanceKind::L2,
        DistanceKind::Hellinger,
        DistanceKind::RenyiSq { alpha: 0.9 },
        DistanceKind::KlSq,
    ] {
        for width in [Width::Fixed(0.5), Width::MedianScaled(1.0)] {
            let g = build_gram(&sets, &gauss(distance, width), &cfg()).unwrap();
            assert!(g.values.as_slice().iter().all(|&v| v > 0.0 && v <= 1.0));
        }
    }
}

#[test]
fn polynomial_of_degree_one_is_linear_plus_offset() {
    let sets = gaussian_sets(4, 150, 2);
    let lin = build_gram(&sets, &KernelSpec::Linear, &cfg()).unwrap();
    let poly = build_gram(&sets, &KernelSpec::Polynomial { c: 1.0, degree: 1 }, &cfg()).unwrap();
    for (a, b) in lin.values.as_slice().iter().zip(poly.values.as_slice()) {
        assert!((a + 1.0 - b).abs() < 1e-12);
    }
}

#[test]
fn fewer_than_two_sets_is_an_error() {
    let sets = gaussian_sets(1, 50, 3);
    assert!(build_gram(&sets, &KernelSpec::Linear, &cfg()).is_err());
}

#[test]
fn median_scaled_width_uses_positive_off_diagonal_entries() {
    let sets = gaussian_sets(5, 150, 4);
    let base = pairwise_estimates(&sets, gauss(DistanceKind::L2, Width::Fixed(1.0)).base(), &cfg()).unwrap();
    let mut off: Vec<f64> = (0..5)
        .flat_map(|i| (0..5).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| base.values[(i, j)])
        .filter(|&v| v > 0.0)
        .collect();
    off.sort_by(f64::total_cmp);
    let n = off.len();
    let median = if n % 2 == 1 { off[n / 2] } else { 0.5 * (off[n / 2 - 1] + off[n / 2]) };
    let k = gauss(DistanceKind::L2, Width::MedianScaled(4.0));
    assert!((k.resolve_sigma(&base, None).unwrap().unwrap() - 4.0 * median).abs() < 1e-15);
}

#[test]
fn symmetrize_examples() {
    let g = symmetrize(&GramMatrix::raw(m(&[&[1.0, 2.0], &[4.0, 3.0]])));
    assert_eq!(g.values, m(&[&[1.0, 3.0], &[3.0, 3.0]]));
    assert!(g.symmetric);
    let s = m(&[&[2.0, -1.0], &[-1.0, 5.0]]);
    assert_eq!(symmetrize(&GramMatrix::raw(s.clone())).values, s);
    let anti = symmetrize(&GramMatrix::raw(m(&[&[0.0, 1.0], &[-1.0, 0.0]])));
    assert_eq!(anti.values, Matrix::zeros(2, 2));
}

#[test]
fn eigh_small_examples() {
    let e = eigh(&m(&[&[2.0, 0.0], &[0.0, 1.0]])).unwrap();
    assert_eq!(e.values, vec![2.0, 1.0]);
    assert_eq!(e.vectors[(0, 0)].abs(), 1.0);
    assert_eq!(e.vectors[(1, 1)].abs(), 1.0);

    let e = eigh(&m(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
    assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
    let h = 0.5f64.sqrt();
    assert!((e.vectors[(0, 0)].abs() - h).abs() < 1e-14);
    assert!((e.vectors[(0, 0)] - e.vectors[(1, 0)]).abs() < 1e-14);
    assert!((e.vectors[(0, 1)] + e.vectors[(1, 1)]).abs() < 1e-14);

    assert!(eigh(&m(&[&[0.0, 1.0], &[0.5, 0.0]])).is_err());
}

#[test]
fn eigh_residuals_on_random_matrix() {
    let a = random_symmetric(&mut rng(20), 20);
    let e = eigh(&a).unwrap();
    let recon = e.reconstruct_with(|l| l);
    let norm = a.frobenius_norm();
    assert!(recon.max_abs_diff(&a) <= 1e-8 * norm);
    let vtv = e.vectors.transpose().matmul(&e.vectors).unwrap();
    assert!(vtv.max_abs_diff(&Matrix::identity(20)) <= 1e-10);
    assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn projection_examples() {
    let sym = |x: Matrix| symmetrize(&GramMatrix::raw(x));
    let p = project_psd(&sym(m(&[&[0.0, 1.0], &[1.0, 0.0]]))).unwrap();
    assert!(p.values.max_abs_diff(&m(&[&[0.5, 0.5], &[0.5, 0.5]])) < 1e-12);
    assert!((p.min_eigenvalue_before.unwrap() + 1.0).abs() < 1e-12);

    let psd = random_psd(&mut rng(5), 6, 3);
    let p = project_psd(&sym(psd.clone())).unwrap();
    assert!(p.values.max_abs_diff(&psd) < 1e-10);

    let p = project_psd(&sym(m(&[&[3.0, 0.0], &[0.0, -2.0]]))).unwrap();
    assert!(p.values.max_abs_diff(&m(&[&[3.0, 0.0], &[0.0, 0.0]])) < 1e-14);

    assert!(project_psd(&GramMatrix::raw(m(&[&[1.0, 2.0], &[0.0, 1.0]]))).is_err());
}

#[test]
fn projection_of_an_estimated_gram() {
    let sets = gaussian_sets(12, 100, 6);
    let raw = build_gram(&sets, &gauss(DistanceKind::Hellinger, Width::MedianScaled(2.0)), &cfg()).unwrap();
    let p = project_psd(&symmetrize(&raw)).unwrap();
    assert!(p.symmetric && p.psd_projected);
    let e = eigh(&p.values).unwrap();
    assert!(*e.values.last().unwrap() >= -1e-10 * e.values[0]);
    for i in 0..12 {
        for j in 0..12 {
            assert_eq!(p.values[(i, j)], p.values[(j, i)]);
        }
    }
}

#[test]
fn gaussian_gram_is_translation_invariant() {
    let sets = gaussian_sets(5, 120, 7);
    let moved: Vec<SampleSet> = sets
        .iter()
        .map(|s| {
            s.map_points(|p| {
                p[0] += 3.0;
                p[1] -= 1.5;
            })
            .unwrap()
        })
        .collect();
    for distance in [DistanceKind::L2, DistanceKind::Hellinger, DistanceKind::RenyiSq { alpha: 0.8 }] {
        let k = gauss(distance, Width::Fixed(0.7));
        let a = build_gram(&sets, &k, &cfg()).unwrap();
        let b = build_gram(&moved, &k, &cfg()).unwrap();
        assert!(a.values.max_abs_diff(&b.values) < 1e-10);
    }
}

#[test]
fn inductive_mode_projects_only_the_training_block() {
    let sets = gaussian_sets(10, 100, 8);
    let kernel = gauss(DistanceKind::Hellinger, Width::MedianScaled(1.0));
    let base = pairwise_estimates(&sets, kernel.base(), &cfg()).unwrap();
    let train: Vec<usize> = (0..7).collect();
    let ind = ModeGram::build(&base, &kernel, None, &train, ProjectionMode::Inductive).unwrap();
    let sigma = kernel.resolve_sigma(&base, Some(&train)).unwrap();
    let raw = symmetrize(&kernel.apply(&base, sigma));
    let block = ind.block(&train);
    let e = eigh(&block.values).unwrap();
    assert!(*e.values.last().unwrap() >= -1e-10 * e.values[0]);
    for i in 7..10 {
        for j in 0..10 {
            assert_eq!(ind.values[(i, j)], raw.values[(i, j)]);
        }
    }

    let tr = ModeGram::build(&base, &kernel, None, &train, ProjectionMode::Transductive).unwrap();
    let e = eigh(&tr.values).unwrap();
    assert!(*e.values.last().unwrap() >= -1e-10 * e.values[0]);
}

#[test]
fn gram_csv_and_sidecar() {
    let sets = gaussian_sets(3, 60, 9);
    let kernel = KernelSpec::Linear;
    let g = project_psd(&symmetrize(&build_gram(&sets, &kernel, &cfg()).unwrap())).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let side = GramSidecar {
        kernel,
        sigma: None,
        k: 5,
        mode: ProjectionMode::Transductive,
        min_eigenvalue_before: g.min_eigenvalue_before,
        set_ids: sets.iter().map(|s| s.id().to_string()).collect(),
    };
    write_gram(&g, &side, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r, g.values.row(i));
    }
    let back: GramSidecar = serde_json::from_str(&fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
    assert_eq!(back, side);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_idempotent_and_symmetrize_is_exact(seed in any::<u64>(), n in 1usize..9) {
        let a = random_symmetric(&mut rng(seed), n);
        let noisy = Matrix::from_fn(n, n, |i, j| a[(i, j)] + if i < j { 0.25 } else { 0.0 });
        let s1 = symmetrize(&GramMatrix::raw(noisy));
        let s2 = symmetrize(&s1);
        prop_assert_eq!(&s1.values, &s2.values);
        let p1 = project_psd(&s1).unwrap();
        let p2 = project_psd(&p1).unwrap();
        prop_assert!(p1.values.max_abs_diff(&p2.values) <= 1e-10);
    }
}
