use distkern::{knn_cross, knn_within, Backend, SampleSet};
use proptest::prelude::*;

fn line(id: &str, xs: &[f64]) -> SampleSet {
    SampleSet::new(id, 1, xs.to_vec()).unwrap()
}

const BACKENDS: [Backend; 3] = [Backend::Brute, Backend::KdTree, Backend::Auto];

#[test]
fn within_on_three_points() {
    let s = line("s", &[0.0, 1.0, 3.0]);
    for b in BACKENDS {
        assert_eq!(knn_within(&s, 1, b).unwrap(), vec![1.0, 1.0, 2.0]);
        assert_eq!(knn_within(&s, 2, b).unwrap(), vec![3.0, 2.0, 3.0]);
        assert!(knn_within(&s, 3, b).is_err());
    }
}

#[test]
fn cross_on_a_single_query() {
    let q = line("q", &[0.0]);
    let t = line("t", &[1.0, 2.0, 4.0]);
    for b in BACKENDS {
        assert_eq!(knn_cross(&q, &t, 2, b).unwrap(), vec![2.0]);
        assert!(knn_cross(&q, &t, 4, b).is_err());
    }
}

#[test]
fn cross_with_itself_matches_each_point() {
    let s = line("s", &[0.3, -1.0, 7.5, 2.0]);
    for b in BACKENDS {
        assert_eq!(knn_cross(&s, &s, 1, b).unwrap(), vec![0.0; 4]);
    }
}

#[test]
fn dimension_mismatch_is_rejected() {
    let a = SampleSet::new("a", 2, vec![0.0; 4]).unwrap();
    let b = SampleSet::new("b", 3, vec![0.0; 6]).unwrap();
    assert!(knn_cross(&a, &b, 1, Backend::Brute).is_err());
}

#[test]
fn duplicates_give_zero_within_distances() {
    let s = line("s", &[1.0, 1.0, 5.0]);
    assert_eq!(knn_within(&s, 1, Backend::KdTree).unwrap(), vec![0.0, 0.0, 4.0]);
}

#[test]
fn tree_equals_brute_on_random_3d_points() {
    let pts: Vec<f64> = (0..600u64)
        .map(|i| ((i.wrapping_mul(2654435761) % 1000) as f64 / 1000.0).sin())
        .collect();
    let s = SampleSet::new("r", 3, pts).unwrap();
    assert_eq!(
        knn_within(&s, 5, Backend::Brute).unwrap(),
        knn_within(&s, 5, Backend::KdTree).unwrap()
    );
}

fn points(d: usize, max_n: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1..max_n).prop_flat_map(move |n| {
        (Just(n), prop::collection::vec(-10.0f64..10.0, n * d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn backends_agree(
        d in 1usize..5,
        k in 1usize..6,
        seed_q in points(4, 80),
        seed_t in points(4, 80),
    ) {
        // reuse the 4-d draws at the requested dimension
        let q: Vec<f64> = seed_q.1.iter().copied().take(seed_q.0 * d).collect();
        let t: Vec<f64> = seed_t.1.iter().copied().take(seed_t.0 * d).collect();
        let q = SampleSet::new("q", d, q).unwrap();
        let t = SampleSet::new("t", d, t).unwrap();
        if t.len() >= k {
            let brute = knn_cross(&q, &t, k, Backend::Brute).unwrap();
            let tree = knn_cross(&q, &t, k, Backend::KdTree).unwrap();
            for (a, b) in brute.iter().zip(&tree) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
        if q.len() > k {
            let brute = knn_within(&q, k, Backend::Brute).unwrap();
            let tree = knn_within(&q, k, Backend::KdTree).unwrap();
            for (a, b) in brute.iter().zip(&tree) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn distances_grow_with_k((n, pts) in points(2, 60)) {
        let s = SampleSet::new("s", 2, pts).unwrap();
        let mut prev = vec![0.0; n];
        for k in 1..n.min(6) {
            let cur = knn_within(&s, k, Backend::KdTree).unwrap();
            for (p, c) in prev.iter().zip(&cur) {
                prop_assert!(c >= p);
            }
            prev = cur;
        }
    }

    #[test]
    fn permuting_queries_permutes_output(
        (n, pts) in points(3, 50),
        rot in 0usize..50,
    ) {
        let target = SampleSet::new("t", 3, pts.iter().map(|v| v * 0.7 + 1.0).collect()).unwrap();
        let q = SampleSet::new("q", 3, pts.clone()).unwrap();
        let r = rot % n;
        let mut shifted = pts[r * 3..].to_vec();
        shifted.extend_from_slice(&pts[..r * 3]);
        let qs = SampleSet::new("q", 3, shifted).unwrap();
        let k = 1.max(target.len().min(3));
        let a = knn_cross(&q, &target, k, Backend::KdTree).unwrap();
        let b = knn_cross(&qs, &target, k, Backend::KdTree).unwrap();
        for i in 0..n {
            prop_assert_eq!(a[(i + r) % n], b[i]);
        }
        if n > 2 {
            let a = knn_within(&q, 2, Backend::KdTree).unwrap();
            let b = knn_within(&qs, 2, Backend::KdTree).unwrap();
            for i in 0..n {
                prop_assert_eq!(a[(i + r) % n], b[i]);
            }
        }
    }
}
