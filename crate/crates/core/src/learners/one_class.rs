use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramMatrix;

use super::smo::QpProblem;
use super::{check_row, require_psd, SUPPORT_THRESHOLD};

/// ν one-class SVM over a precomputed Gram matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneClassModel {
    /// α_i ∈ [0, 1/(νT)], summing to one.
    pub dual_coeffs: Vec<f64>,
    /// Offset subtracted from `Σ α_i K_i`.
    pub bias: f64,
    pub nu: f64,
    pub support_indices: Vec<usize>,
    /// `½ αᵀGα`
    pub objective: f64,
    pub kkt_gap: f64,
    pub iterations: usize,
}

/// Solves `min ½ αᵀGα` s.t. `0 ≤ α_i ≤ 1/(νT)`, `Σ α_i = 1`.
///
/// The offset is the `⌈νT⌉`-th smallest training score `Σ_j α_j G_ij`, so
/// that point sits exactly on the boundary.
pub fn train_one_class(gram: &GramMatrix, nu: f64) -> Result<OneClassModel> {
    require_psd(gram)?;
    let t = gram.len();
    if t < 2 {
        return Err(Error::Dataset("one-class SVM needs at least two sets".into()));
    }
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::InvalidParameter(format!("ν must lie in (0, 1], got {nu}")));
    }
    let upper = 1.0 / (nu * t as f64);

    // feasible start: fill the first variables to the bound
    let mut init = vec![0.0; t];
    let mut left = 1.0;
    for a in init.iter_mut() {
        if left <= 0.0 {
            break;
        }
        *a = upper.min(left);
        left -= *a;
    }

    let problem = QpProblem {
        kernel: &gram.values,
        index: (0..t).collect(),
        y: vec![1.0; t],
        p: vec![0.0; t],
        upper: vec![upper; t],
    };
    let sol = problem.solve(init)?;
    let alpha = sol.beta;

    let mut scores: Vec<f64> = sol.grad.clone();
    scores.sort_by(f64::total_cmp);
    let q = ((nu * t as f64).ceil() as usize).clamp(1, t);
    let bias = scores[q - 1];

    let support_indices = (0..t).filter(|&i| alpha[i] > SUPPORT_THRESHOLD).collect();
    Ok(OneClassModel {
        dual_coeffs: alpha,
        bias,
        nu,
        support_indices,
        objective: sol.objective,
        kkt_gap: sol.gap,
        iterations: sol.iterations,
    })
}

/// `Σ α_i K_i - offset`: positive inside the learned region, negative
/// outside.
pub fn score_one_class(model: &OneClassModel, kernel_row: &[f64]) -> Result<f64> {
    check_row(kernel_row, model.dual_coeffs.len())?;
    let s: f64 = model
        .dual_coeffs
        .iter()
        .zip(kernel_row)
        .map(|(a, k)| a * k)
        .sum();
    Ok(s - model.bias)
}
