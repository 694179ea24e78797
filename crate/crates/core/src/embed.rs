//! Reconstruction weights between distributions and locally linear
//! embedding, both computed from a Gram matrix alone.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::linalg::{eigh, solve, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LleConfig {
    /// Neighbors per distribution (κ).
    pub kappa: usize,
    pub out_dim: usize,
    /// Ridge added to the local system, relative to its trace.
    pub regularization: f64,
}

impl Default for LleConfig {
    fn default() -> Self {
        LleConfig {
            kappa: 5,
            out_dim: 2,
            regularization: 1e-3,
        }
    }
}

impl LleConfig {
    pub fn validate(&self, t: usize) -> Result<()> {
        if self.kappa == 0 || self.kappa >= t {
            return Err(Error::InvalidParameter(format!(
                "kappa must lie in 1..{t}, got {}",
                self.kappa
            )));
        }
        if self.out_dim == 0 || self.out_dim >= t {
            return Err(Error::InvalidParameter(format!(
                "out_dim must lie in 1..{t}, got {}",
                self.out_dim
            )));
        }
        if !(self.regularization >= 0.0) {
            return Err(Error::InvalidParameter("regularization must be >= 0".into()));
        }
        Ok(())
    }
}

/// Sparse reconstruction weights: row `i` holds `(j, W_ij)` for the κ
/// neighbors of `i`, in order of increasing kernel distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LleWeights {
    pub n: usize,
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl LleWeights {
    pub fn dense(&self) -> Matrix {
        let mut w = Matrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                w[(i, j)] = v;
            }
        }
        w
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    /// `T × out_dim` coordinates, one row per distribution.
    pub coords: Matrix,
    /// Eigenvalues of `(I-W)ᵀ(I-W)` belonging to the kept columns.
    pub eigenvalues: Vec<f64>,
}

/// Squared feature-space distances `G_ii + G_jj - 2 G_ij`, clamped at zero.
pub fn kernel_distances(gram: &GramMatrix) -> Matrix {
    let g = &gram.values;
    let n = gram.len();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (g[(i, i)] + g[(j, j)] - 2.0 * g[(i, j)]).max(0.0)
        }
    })
}

/// Weights reconstructing `φ(p_i)` from its κ nearest candidates.
///
/// Minimizes `‖φ(p_i) - Σ_j w_j φ(p_j)‖²` subject to `Σ w_j = 1`, which
/// reduces to `C w = 1` (then normalized) with the local Gram
/// `C_jk = G_ii - G_ij - G_ik + G_jk` plus a ridge of `reg·tr(C)/κ`.
pub fn row_weights(
    gram: &GramMatrix,
    i: usize,
    candidates: &[usize],
    cfg: &LleConfig,
) -> Result<Vec<(usize, f64)>> {
    let g = &gram.values;
    let mut cand: Vec<(f64, usize)> = candidates
        .iter()
        .filter(|&&j| j != i)
        .map(|&j| ((g[(i, i)] + g[(j, j)] - 2.0 * g[(i, j)]).max(0.0), j))
        .collect();
    if cand.len() < cfg.kappa {
        return Err(Error::InvalidParameter(format!(
            "kappa {} exceeds the {} available neighbors",
            cfg.kappa,
            cand.len()
        )));
    }
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let nb: Vec<usize> = cand[..cfg.kappa].iter().map(|c| c.1).collect();
    if nb.len() == 1 {
        return Ok(vec![(nb[0], 1.0)]);
    }

    let k = nb.len();
    let mut c = Matrix::from_fn(k, k, |a, b| {
        let (j, l) = (nb[a], nb[b]);
        g[(i, i)] - g[(i, j)] - g[(i, l)] + g[(j, l)]
    });
    let trace: f64 = (0..k).map(|a| c[(a, a)]).sum();
    let ridge = cfg.regularization * trace / k as f64;
    for a in 0..k {
        c[(a, a)] += ridge;
    }
    let w = solve(&c, &vec![1.0; k]).map_err(|_| {
        Error::InvalidParameter(format!("local system of distribution {i} is singular"))
    })?;
    let sum: f64 = w.iter().sum();
    if !(sum.abs() > 0.0) || !sum.is_finite() {
        return Err(Error::Singular);
    }
    Ok(nb.into_iter().zip(w.into_iter().map(|v| v / sum)).collect())
}

/// Reconstruction weights for every distribution from its κ nearest
/// neighbors in kernel distance.
pub fn reconstruction_weights(gram: &GramMatrix, cfg: &LleConfig) -> Result<LleWeights> {
    let t = gram.len();
    if cfg.kappa == 0 || cfg.kappa >= t {
        return Err(Error::InvalidParameter(format!(
            "kappa must lie in 1..{t}, got {}",
            cfg.kappa
        )));
    }
    if !gram.symmetric {
        return Err(Error::NotSymmetric {
            asymmetry: gram.values.max_asymmetry(),
        });
    }
    let all: Vec<usize> = (0..t).collect();
    let rows = (0..t)
        .into_par_iter()
        .map(|i| row_weights(gram, i, &all, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(LleWeights { n: t, rows })
}

/// Coordinates from the bottom eigenvectors of `M = (I-W)ᵀ(I-W)`, skipping
/// the constant one, scaled by `√T`.
pub fn embed(weights: &LleWeights, out_dim: usize) -> Result<Embedding> {
    let t = weights.n;
    if out_dim == 0 || out_dim + 1 > t {
        return Err(Error::InvalidParameter(format!(
            "cannot embed {t} distributions into {out_dim} dimensions"
        )));
    }
    let mut a = Matrix::identity(t);
    for (i, row) in weights.rows.iter().enumerate() {
        for &(j, v) in row {
            a[(i, j)] -= v;
        }
    }
    let m = a.transpose().matmul(&a)?;
    // M·1 = 0, so adding s·11ᵀ/T moves the constant eigenvector to the top of
    // the spectrum; otherwise near-zero eigenvalues mix with it in Jacobi
    let shift = (0..t).map(|i| m[(i, i)]).sum::<f64>().max(1.0);
    let m = Matrix::from_fn(t, t, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]) + shift / t as f64);
    let eig = eigh(&m)?;

    let mut coords = Matrix::zeros(t, out_dim);
    let mut eigenvalues = Vec::with_capacity(out_dim);
    let scale = (t as f64).sqrt();
    for c in 0..out_dim {
        // eigenvalues come in descending order
        let col = t - 1 - c;
        eigenvalues.push(eig.values[col]);
        let v: Vec<f64> = (0..t).map(|r| eig.vectors[(r, col)]).collect();
        let pivot = v
            .iter()
            .copied()
            .fold(0.0_f64, |best, x| if x.abs() > best.abs() { x } else { best });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        for r in 0..t {
            coords[(r, c)] = sign * scale * v[r];
        }
    }
    Ok(Embedding {
        coords,
        eigenvalues,
    })
}

/// Reconstruction weights of one held-out distribution from the training
/// distributions: `gram` covers the training sets plus the query at index
/// `query`, and only `train` indices are used as neighbors.
pub fn drdr_weights(
    gram: &GramMatrix,
    query: usize,
    train: &[usize],
    cfg: &LleConfig,
) -> Result<Vec<(usize, f64)>> {
    if query >= gram.len() {
        return Err(Error::Shape(format!("query index {query} out of range")));
    }
    row_weights(gram, query, train, cfg)
}
