//! Oracles shared by the integration tests. Nothing here calls into the
//! solvers under test.

#![allow(dead_code)]

use distkern::Matrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `A Aᵀ / r` for a random `n × r` Gaussian-ish `A`.
pub fn random_psd(rng: &mut impl Rng, n: usize, r: usize) -> Matrix {
    let a: Vec<f64> = (0..n * r).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Matrix::from_fn(n, n, |i, j| {
        (0..r).map(|k| a[i * r + k] * a[j * r + k]).sum::<f64>() / r as f64
    })
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

pub fn frobenius_distance(a: &Matrix, b: &Matrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Largest eigenvalue bound: the maximum absolute row sum.
fn row_sum_bound(q: &Matrix) -> f64 {
    (0..q.rows())
        .map(|i| q.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Euclidean projection of `z` onto `{lo ≤ x ≤ hi, aᵀx = b}` with
/// `a_i ∈ {±1}`, by bisection on the multiplier.
pub fn project_box_hyperplane(z: &[f64], a: &[f64], b: f64, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    let at = |lambda: f64| -> Vec<f64> {
        z.iter()
            .zip(a)
            .zip(lo.iter().zip(hi))
            .map(|((&zi, &ai), (&l, &h))| (zi + lambda * ai).clamp(l, h))
            .collect()
    };
    let dot = |x: &[f64]| x.iter().zip(a).map(|(x, a)| x * a).sum::<f64>();
    // aᵀx(λ) is non-decreasing in λ
    let (mut l, mut h) = (-1.0, 1.0);
    while dot(&at(l)) > b {
        l *= 2.0;
    }
    while dot(&at(h)) < b {
        h *= 2.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (l + h);
        if dot(&at(m)) < b {
            l = m;
        } else {
            h = m;
        }
    }
    at(0.5 * (l + h))
}

/// `½ xᵀQx + pᵀx`.
pub fn quadratic(q: &Matrix, p: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    let mut f = 0.0;
    for i in 0..n {
        let qi: f64 = (0..n).map(|j| q[(i, j)] * x[j]).sum();
        f += x[i] * (0.5 * qi + p[i]);
    }
    f
}

/// Minimizes `½ xᵀQx + pᵀx` over `{lo ≤ x ≤ hi, aᵀx = b}` by accelerated
/// projected gradient. Returns the minimizer and its objective.
pub fn qp_oracle(q: &Matrix, p: &[f64], a: &[f64], b: f64, lo: &[f64], hi: &[f64]) -> (Vec<f64>, f64) {
    let n = p.len();
    let step = 1.0 / row_sum_bound(q).max(1e-12);
    let mut x = project_box_hyperplane(&vec![0.0; n], a, b, lo, hi);
    let mut y = x.clone();
    let mut t = 1.0_f64;
    let mut best = (x.clone(), quadratic(q, p, &x));
    for it in 0..200_000 {
        let grad: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| q[(i, j)] * y[j]).sum::<f64>() + p[i])
            .collect();
        let z: Vec<f64> = y.iter().zip(&grad).map(|(yi, gi)| yi - step * gi).collect();
        let next = project_box_hyperplane(&z, a, b, lo, hi);
        let f = quadratic(q, p, &next);
        if f < best.1 {
            best = (next.clone(), f);
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let moved: f64 = next.iter().zip(&x).map(|(u, v)| (u - v).abs()).sum();
        y = next
            .iter()
            .zip(&x)
            .map(|(u, v)| u + (t - 1.0) / t_next * (u - v))
            .collect();
        x = next;
        t = t_next;
        // restart momentum periodically; it keeps FISTA monotone enough here
        if it % 500 == 499 {
            y = x.clone();
            t = 1.0;
        }
        if moved < 1e-15 && it > 1000 {
            break;
        }
    }
    best
}

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

pub fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean).powi(2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// Rényi-α divergence between two 1-d densities by quadrature.
pub fn renyi_by_quadrature(p: impl Fn(f64) -> f64, q: impl Fn(f64) -> f64, alpha: f64, lo: f64, hi: f64) -> f64 {
    let integral = simpson(|x| p(x).powf(alpha) * q(x).powf(1.0 - alpha), lo, hi, 200_000);
    integral.ln() / (alpha - 1.0)
}
