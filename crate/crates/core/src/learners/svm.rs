use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramMatrix;

use super::smo::QpProblem;
use super::{check_row, require_psd, SUPPORT_THRESHOLD};

/// Soft-margin SVM trained on a precomputed Gram matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// α_i ∈ [0, C], one per training set.
    pub dual_coeffs: Vec<f64>,
    /// ±1 training labels.
    pub labels: Vec<f64>,
    pub bias: f64,
    pub support_indices: Vec<usize>,
    pub c: f64,
    /// `½ αᵀ(yyᵀ∘G)α - Σα`, the negated dual of the margin problem.
    pub objective: f64,
    pub kkt_gap: f64,
    pub iterations: usize,
}

impl SvmModel {
    pub fn decision_value(&self, kernel_row: &[f64]) -> Result<f64> {
        check_row(kernel_row, self.dual_coeffs.len())?;
        let s: f64 = self
            .support_indices
            .iter()
            .map(|&i| self.dual_coeffs[i] * self.labels[i] * kernel_row[i])
            .sum();
        Ok(s + self.bias)
    }
}

/// Solves the soft-margin dual
/// `max Σα - ½ Σ α_i α_j y_i y_j G_ij` s.t. `Σ α_i y_i = 0`, `0 ≤ α_i ≤ C`.
///
/// The bias is the mean of `y_j - Σ_i y_i α_i G_ij` over all `α_j > 1e-8`.
pub fn train_binary_svm(gram: &GramMatrix, labels: &[f64], c: f64) -> Result<SvmModel> {
    require_psd(gram)?;
    let t = gram.len();
    if labels.len() != t {
        return Err(Error::Shape(format!("{} labels for a {t}x{t} Gram", labels.len())));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("C must be > 0, got {c}")));
    }
    if labels.iter().any(|&y| y != 1.0 && y != -1.0) {
        return Err(Error::InvalidParameter("binary labels must be +1 or -1".into()));
    }
    if !labels.contains(&1.0) || !labels.contains(&-1.0) {
        return Err(Error::Dataset("binary SVM needs both classes".into()));
    }

    let problem = QpProblem {
        kernel: &gram.values,
        index: (0..t).collect(),
        y: labels.to_vec(),
        p: vec![-1.0; t],
        upper: vec![c; t],
    };
    let sol = problem.solve(vec![0.0; t])?;
    let alpha = sol.beta;

    let support_indices: Vec<usize> = (0..t).filter(|&i| alpha[i] > SUPPORT_THRESHOLD).collect();
    let bias = if support_indices.is_empty() {
        -sol.rho
    } else {
        // y_j - Σ_i y_i α_i G_ij = -y_j ∇_j
        support_indices
            .iter()
            .map(|&j| -labels[j] * sol.grad[j])
            .sum::<f64>()
            / support_indices.len() as f64
    };
    Ok(SvmModel {
        dual_coeffs: alpha,
        labels: labels.to_vec(),
        bias,
        support_indices,
        c,
        objective: sol.objective,
        kkt_gap: sol.gap,
        iterations: sol.iterations,
    })
}

/// `(sign(f), f)` with `f = Σ α_i y_i K_i + b`; a zero decision value is
/// labelled +1.
pub fn predict_binary(model: &SvmModel, kernel_row: &[f64]) -> Result<(f64, f64)> {
    let f = model.decision_value(kernel_row)?;
    Ok((if f >= 0.0 { 1.0 } else { -1.0 }, f))
}

/// Binary model for one unordered class pair: `classes.0` is the +1 side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseSvm {
    pub classes: (usize, usize),
    /// Training-set indices (into the full Gram) the model was fit on.
    pub members: Vec<usize>,
    pub model: SvmModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MulticlassSvm {
    pub n_classes: usize,
    pub n_train: usize,
    pub models: Vec<PairwiseSvm>,
}

/// One binary SVM per unordered class pair, each on the Gram sub-block of
/// that pair's members.
pub fn train_multiclass(gram: &GramMatrix, class_labels: &[usize], c: f64) -> Result<MulticlassSvm> {
    let t = gram.len();
    if class_labels.len() != t {
        return Err(Error::Shape(format!(
            "{} labels for a {t}x{t} Gram",
            class_labels.len()
        )));
    }
    let r = class_labels.iter().max().map_or(0, |m| m + 1);
    if r < 2 {
        return Err(Error::Dataset("need at least two classes".into()));
    }
    let mut members = vec![Vec::new(); r];
    for (i, &cl) in class_labels.iter().enumerate() {
        members[cl].push(i);
    }
    if let Some(empty) = members.iter().position(Vec::is_empty) {
        return Err(Error::Dataset(format!("class {empty} has no training sets")));
    }
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|a| ((a + 1)..r).map(move |b| (a, b)))
        .collect();
    let models = pairs
        .par_iter()
        .map(|&(a, b)| {
            let idx: Vec<usize> = members[a].iter().chain(&members[b]).copied().collect();
            let y: Vec<f64> = idx
                .iter()
                .map(|&i| if class_labels[i] == a { 1.0 } else { -1.0 })
                .collect();
            let model = train_binary_svm(&gram.principal(&idx), &y, c)?;
            Ok(PairwiseSvm {
                classes: (a, b),
                members: idx,
                model,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MulticlassSvm {
        n_classes: r,
        n_train: t,
        models,
    })
}

/// Majority vote over the pairwise models; ties go to the smallest class.
///
/// `kernel_row[i]` is the kernel value between the test set and training
/// set `i` of the Gram the models were trained on.
pub fn predict_multiclass(model: &MulticlassSvm, kernel_row: &[f64]) -> Result<usize> {
    check_row(kernel_row, model.n_train)?;
    let mut votes = vec![0usize; model.n_classes];
    let mut sub = Vec::new();
    for pm in &model.models {
        sub.clear();
        sub.extend(pm.members.iter().map(|&i| kernel_row[i]));
        let (label, _) = predict_binary(&pm.model, &sub)?;
        votes[if label > 0.0 { pm.classes.0 } else { pm.classes.1 }] += 1;
    }
    let best = votes.iter().copied().max().unwrap_or(0);
    Ok(votes.iter().position(|&v| v == best).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn psd(rows: &[&[f64]]) -> GramMatrix {
        let m = Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        GramMatrix::trusted_psd(m).unwrap()
    }

    #[test]
    fn identity_two_points() {
        let g = psd(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let m = train_binary_svm(&g, &[1.0, -1.0], 10.0).unwrap();
        assert!((m.dual_coeffs[0] - 1.0).abs() < 1e-9);
        assert!((m.dual_coeffs[1] - 1.0).abs() < 1e-9);
        assert!(m.bias.abs() < 1e-9);
    }

    #[test]
    fn rejects_single_class_and_unprojected() {
        let g = psd(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(train_binary_svm(&g, &[1.0, 1.0], 1.0).is_err());
        let raw = GramMatrix::raw(g.values.clone());
        assert!(train_binary_svm(&raw, &[1.0, -1.0], 1.0).is_err());
    }

    #[test]
    fn prediction_tie_and_zero_row() {
        let m = SvmModel {
            dual_coeffs: vec![0.0, 0.0],
            labels: vec![1.0, -1.0],
            bias: 0.5,
            support_indices: vec![],
            c: 1.0,
            objective: 0.0,
            kkt_gap: 0.0,
            iterations: 0,
        };
        assert_eq!(predict_binary(&m, &[0.0, 0.0]).unwrap(), (1.0, 0.5));
        let zero = SvmModel { bias: 0.0, ..m };
        assert_eq!(predict_binary(&zero, &[3.0, 1.0]).unwrap().0, 1.0);
        assert!(predict_binary(&zero, &[1.0]).is_err());
    }

    #[test]
    fn multiclass_counts_and_cycle_tie() {
        let n = 8;
        let g = GramMatrix::trusted_psd(Matrix::identity(n)).unwrap();
        let labels = [0, 0, 1, 1, 2, 2, 3, 3];
        let mc = train_multiclass(&g, &labels, 1.0).unwrap();
        assert_eq!(mc.models.len(), 6);
        let two = train_multiclass(&g.principal(&[0, 1, 2, 3]), &[0, 0, 1, 1], 1.0).unwrap();
        assert_eq!(two.models.len(), 1);

        // three models voting in a cycle: 0 beats 1, 1 beats 2, 2 beats 0
        let stub = |bias: f64| SvmModel {
            dual_coeffs: vec![0.0],
            labels: vec![1.0],
            bias,
            support_indices: vec![],
            c: 1.0,
            objective: 0.0,
            kkt_gap: 0.0,
            iterations: 0,
        };
        let cyc = MulticlassSvm {
            n_classes: 3,
            n_train: 1,
            models: vec![
                PairwiseSvm { classes: (0, 1), members: vec![0], model: stub(1.0) },
                PairwiseSvm { classes: (1, 2), members: vec![0], model: stub(1.0) },
                PairwiseSvm { classes: (0, 2), members: vec![0], model: stub(-1.0) },
            ],
        };
        assert_eq!(predict_multiclass(&cyc, &[0.0]).unwrap(), 0);
        let all_two = MulticlassSvm {
            models: vec![
                PairwiseSvm { classes: (0, 2), members: vec![0], model: stub(-1.0) },
                PairwiseSvm { classes: (1, 2), members: vec![0], model: stub(-1.0) },
            ],
            ..cyc
        };
        assert_eq!(predict_multiclass(&all_two, &[0.0]).unwrap(), 2);
    }

    #[test]
    fn empty_class_is_rejected() {
        let g = GramMatrix::trusted_psd(Matrix::identity(3)).unwrap();
        assert!(train_multiclass(&g, &[0, 0, 2], 1.0).is_err());
    }
}
