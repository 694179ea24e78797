//! Sequential minimal optimization for the dual problems
//!
//! ```text
//! min_β  ½ βᵀQβ + pᵀβ   s.t.  yᵀβ = Δ,  0 ≤ β_t ≤ U_t,   y_t ∈ {+1, -1}
//! ```
//!
//! with `Q_st = y_s y_t K[idx_s, idx_t]` over a precomputed kernel matrix.
//! The first working index is the maximal violator, the second is chosen by
//! second-order gain; no shrinking.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const SMO_TOLERANCE: f64 = 1e-6;
pub const SMO_MAX_ITER: usize = 1_000_000;
const TAU: f64 = 1e-12;

pub(crate) struct QpProblem<'a> {
    pub kernel: &'a Matrix,
    /// Variable `t` uses kernel row/column `index[t]`.
    pub index: Vec<usize>,
    pub y: Vec<f64>,
    pub p: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug)]
pub(crate) struct QpSolution {
    pub beta: Vec<f64>,
    pub grad: Vec<f64>,
    pub objective: f64,
    /// Offset ρ of the decision function `Σ y_t β_t K(·) - ρ`, as the mean
    /// of `y_t ∇_t` over free variables.
    pub rho: f64,
    pub gap: f64,
    pub iterations: usize,
}

impl QpProblem<'_> {
    #[inline]
    fn q(&self, s: usize, t: usize) -> f64 {
        self.y[s] * self.y[t] * self.kernel[(self.index[s], self.index[t])]
    }

    fn len(&self) -> usize {
        self.y.len()
    }

    #[inline]
    fn in_up(&self, t: usize, b: f64) -> bool {
        if self.y[t] > 0.0 {
            b < self.upper[t]
        } else {
            b > 0.0
        }
    }

    #[inline]
    fn in_low(&self, t: usize, b: f64) -> bool {
        if self.y[t] > 0.0 {
            b > 0.0
        } else {
            b < self.upper[t]
        }
    }

    /// Working pair and the current gap `m(β) - M(β)`.
    ///
    /// `i` is the maximal violator in `I_up`; `j` is the member of `I_low`
    /// giving the largest second-order decrease with `i`. The gap is the
    /// maximal-violating-pair gap either way.
    fn select(&self, beta: &[f64], grad: &[f64]) -> (Option<usize>, Option<usize>, f64) {
        let mut gmax = f64::NEG_INFINITY;
        let mut i = None;
        for t in 0..self.len() {
            let yg = -self.y[t] * grad[t];
            if self.in_up(t, beta[t]) && yg > gmax {
                gmax = yg;
                i = Some(t);
            }
        }
        let Some(ii) = i else {
            return (None, None, f64::NEG_INFINITY);
        };
        let kii = self.kernel[(self.index[ii], self.index[ii])];
        let mut gmax2 = f64::NEG_INFINITY;
        let mut best = f64::INFINITY;
        let mut j = None;
        for t in 0..self.len() {
            if !self.in_low(t, beta[t]) {
                continue;
            }
            let yg = self.y[t] * grad[t];
            if yg > gmax2 {
                gmax2 = yg;
            }
            let b = gmax + yg;
            if b > 0.0 {
                let ktt = self.kernel[(self.index[t], self.index[t])];
                let kit = self.kernel[(self.index[ii], self.index[t])];
                let mut a = kii + ktt - 2.0 * kit;
                if a <= 0.0 {
                    a = TAU;
                }
                let gain = -(b * b) / a;
                if gain < best {
                    best = gain;
                    j = Some(t);
                }
            }
        }
        (i, j, gmax + gmax2)
    }

    pub fn objective(&self, beta: &[f64]) -> f64 {
        let mut f = 0.0;
        for s in 0..self.len() {
            if beta[s] == 0.0 {
                continue;
            }
            let mut qb = 0.0;
            for t in 0..self.len() {
                if beta[t] != 0.0 {
                    qb += self.q(s, t) * beta[t];
                }
            }
            f += beta[s] * (0.5 * qb + self.p[s]);
        }
        f
    }

    /// Runs SMO from the feasible starting point `beta`.
    pub fn solve(&self, mut beta: Vec<f64>) -> Result<QpSolution> {
        let l = self.len();
        let mut grad = self.p.clone();
        for t in 0..l {
            if beta[t] != 0.0 {
                for s in 0..l {
                    grad[s] += self.q(s, t) * beta[t];
                }
            }
        }

        let mut iterations = 0;
        let gap = loop {
            let (i, j, gap) = self.select(&beta, &grad);
            let (i, j) = match (i, j) {
                (Some(i), Some(j)) if gap >= SMO_TOLERANCE => (i, j),
                _ => break gap.max(0.0),
            };
            if iterations == SMO_MAX_ITER {
                return Err(Error::SmoNonConvergence { iterations, gap });
            }
            iterations += 1;

            let (old_i, old_j) = (beta[i], beta[j]);
            let (ci, cj) = (self.upper[i], self.upper[j]);
            let (qii, qjj, qij) = (self.q(i, i), self.q(j, j), self.q(i, j));
            if self.y[i] != self.y[j] {
                let mut quad = qii + qjj + 2.0 * qij;
                if quad <= 0.0 {
                    quad = TAU;
                }
                let delta = (-grad[i] - grad[j]) / quad;
                let diff = beta[i] - beta[j];
                beta[i] += delta;
                beta[j] += delta;
                if diff > 0.0 {
                    if beta[j] < 0.0 {
                        beta[j] = 0.0;
                        beta[i] = diff;
                    }
                } else if beta[i] < 0.0 {
                    beta[i] = 0.0;
                    beta[j] = -diff;
                }
                if diff > ci - cj {
                    if beta[i] > ci {
                        beta[i] = ci;
                        beta[j] = ci - diff;
                    }
                } else if beta[j] > cj {
                    beta[j] = cj;
                    beta[i] = cj + diff;
                }
            } else {
                let mut quad = qii + qjj - 2.0 * qij;
                if quad <= 0.0 {
                    quad = TAU;
                }
                let delta = (grad[i] - grad[j]) / quad;
                let sum = beta[i] + beta[j];
                beta[i] -= delta;
                beta[j] += delta;
                if sum > ci {
                    if beta[i] > ci {
                        beta[i] = ci;
                        beta[j] = sum - ci;
                    }
                } else if beta[j] < 0.0 {
                    beta[j] = 0.0;
                    beta[i] = sum;
                }
                if sum > cj {
                    if beta[j] > cj {
                        beta[j] = cj;
                        beta[i] = sum - cj;
                    }
                } else if beta[i] < 0.0 {
                    beta[i] = 0.0;
                    beta[j] = sum;
                }
            }

            let (di, dj) = (beta[i] - old_i, beta[j] - old_j);
            for s in 0..l {
                grad[s] += self.q(s, i) * di + self.q(s, j) * dj;
            }
        };

        let rho = self.rho(&beta, &grad);
        let objective = self.objective(&beta);
        Ok(QpSolution {
            beta,
            grad,
            objective,
            rho,
            gap,
            iterations,
        })
    }

    fn rho(&self, beta: &[f64], grad: &[f64]) -> f64 {
        let mut ub = f64::INFINITY;
        let mut lb = f64::NEG_INFINITY;
        let mut free_sum = 0.0;
        let mut free = 0usize;
        for t in 0..self.len() {
            let yg = self.y[t] * grad[t];
            let at_upper = beta[t] >= self.upper[t];
            let at_lower = beta[t] <= 0.0;
            if at_upper {
                if self.y[t] < 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else if at_lower {
                if self.y[t] > 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else {
                free += 1;
                free_sum += yg;
            }
        }
        if free > 0 {
            free_sum / free as f64
        } else {
            0.5 * (ub + lb)
        }
    }
}
