use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramMatrix;

use super::smo::QpProblem;
use super::{check_row, require_psd, SUPPORT_THRESHOLD};

/// ε-insensitive support vector regression over a precomputed Gram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    /// `α_i - α_i*` ∈ [-C, C].
    pub dual_diff: Vec<f64>,
    pub bias: f64,
    pub epsilon: f64,
    pub c: f64,
    pub support_indices: Vec<usize>,
    /// `½ δᵀGδ + ε Σ(α + α*) - Σ z_i δ_i` with `δ = α - α*`.
    pub objective: f64,
    pub kkt_gap: f64,
    pub iterations: usize,
}

impl SvrModel {
    pub fn predict(&self, kernel_row: &[f64]) -> Result<f64> {
        check_row(kernel_row, self.dual_diff.len())?;
        let s: f64 = self
            .support_indices
            .iter()
            .map(|&i| self.dual_diff[i] * kernel_row[i])
            .sum();
        Ok(s + self.bias)
    }
}

/// Trains ε-SVR with the usual 2T-variable dual: variables `α` carry
/// `y = +1`, `p = ε - z`, variables `α*` carry `y = -1`, `p = ε + z`.
pub fn train_svr(gram: &GramMatrix, targets: &[f64], c: f64, epsilon: f64) -> Result<SvrModel> {
    require_psd(gram)?;
    let t = gram.len();
    if targets.len() != t {
        return Err(Error::Shape(format!("{} targets for a {t}x{t} Gram", targets.len())));
    }
    if targets.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidParameter("targets must be finite".into()));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("C must be > 0, got {c}")));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("ε must be >= 0, got {epsilon}")));
    }

    let mut y = vec![1.0; t];
    y.extend(std::iter::repeat(-1.0).take(t));
    let mut p: Vec<f64> = targets.iter().map(|z| epsilon - z).collect();
    p.extend(targets.iter().map(|z| epsilon + z));
    let problem = QpProblem {
        kernel: &gram.values,
        index: (0..t).chain(0..t).collect(),
        y,
        p,
        upper: vec![c; 2 * t],
    };
    let sol = problem.solve(vec![0.0; 2 * t])?;
    let dual_diff: Vec<f64> = (0..t).map(|i| sol.beta[i] - sol.beta[t + i]).collect();
    let support_indices = (0..t)
        .filter(|&i| dual_diff[i].abs() > SUPPORT_THRESHOLD)
        .collect();
    Ok(SvrModel {
        dual_diff,
        bias: -sol.rho,
        epsilon,
        c,
        support_indices,
        objective: sol.objective,
        kkt_gap: sol.gap,
        iterations: sol.iterations,
    })
}

pub fn predict_svr(model: &SvrModel, kernel_row: &[f64]) -> Result<f64> {
    model.predict(kernel_row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn constant_targets() {
        let g = GramMatrix::trusted_psd(Matrix::from_fn(4, 4, |i, j| {
            (-0.3 * (i as f64 - j as f64).powi(2)).exp()
        }))
        .unwrap();
        for eps in [0.0, 0.01, 0.5] {
            let m = train_svr(&g, &[3.0; 4], 1.0, eps).unwrap();
            assert!(m.dual_diff.iter().all(|&d| d == 0.0));
            assert!((m.bias - 3.0).abs() < 1e-12);
            for i in 0..4 {
                assert!((m.predict(g.values.row(i)).unwrap() - 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn interpolates_with_large_c() {
        let g = GramMatrix::trusted_psd(Matrix::from_fn(5, 5, |i, j| {
            (-0.5 * (i as f64 - j as f64).powi(2)).exp()
        }))
        .unwrap();
        let z = [0.3, -1.0, 2.0, 0.7, 0.0];
        let eps = 1e-3;
        let m = train_svr(&g, &z, 1e4, eps).unwrap();
        for i in 0..5 {
            let pred = m.predict(g.values.row(i)).unwrap();
            assert!((pred - z[i]).abs() <= eps + 1e-6, "{pred} vs {}", z[i]);
        }
        let s: f64 = m.dual_diff.iter().sum();
        assert!(s.abs() <= 1e-8 * 1e4 * 5.0);
    }
}
