//! Kernel machines over precomputed Gram matrices, all solved by SMO.

mod one_class;
mod smo;
mod svm;
mod svr;

pub use one_class::{score_one_class, train_one_class, OneClassModel};
pub use smo::{SMO_MAX_ITER, SMO_TOLERANCE};
pub use svm::{
    predict_binary, predict_multiclass, train_binary_svm, train_multiclass, MulticlassSvm,
    PairwiseSvm, SvmModel,
};
pub use svr::{predict_svr, train_svr, SvrModel};

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gram::GramMatrix;

/// Dual coefficients above this count as nonzero.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;

fn require_psd(gram: &GramMatrix) -> Result<()> {
    if !gram.symmetric || !gram.psd_projected {
        return Err(Error::InvalidParameter(
            "learners need a symmetrized, PSD-projected Gram matrix".into(),
        ));
    }
    Ok(())
}

fn check_row(row: &[f64], expected: usize) -> Result<()> {
    if row.len() != expected {
        return Err(Error::Shape(format!(
            "kernel row has {} entries, model was trained on {expected} sets",
            row.len()
        )));
    }
    Ok(())
}

/// SHA-256 over the training-set ids, in training order.
pub fn training_hash<S: AsRef<str>>(ids: &[S]) -> String {
    let mut h = Sha256::new();
    for id in ids {
        h.update(id.as_ref().as_bytes());
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// A trained model with what is needed to predict again later: the kernel
/// it was trained under and the ids of its training sets, in the order the
/// model's coefficients refer to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavedModel<M> {
    pub kernel: String,
    pub sigma: Option<f64>,
    pub train_ids: Vec<String>,
    pub training_hash: String,
    pub model: M,
}

impl<M: Serialize + DeserializeOwned> SavedModel<M> {
    pub fn new(kernel: impl Into<String>, sigma: Option<f64>, train_ids: Vec<String>, model: M) -> Self {
        SavedModel {
            kernel: kernel.into(),
            sigma,
            training_hash: training_hash(&train_ids),
            train_ids,
            model,
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?).map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Reads a model back, rejecting files whose hash does not match the
    /// listed training ids.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: Self = serde_json::from_str(&text)?;
        if training_hash(&m.train_ids) != m.training_hash {
            return Err(Error::Config(format!(
                "{}: training hash does not match the listed training ids",
                path.display()
            )));
        }
        Ok(m)
    }
}
