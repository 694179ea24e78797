//! Kernels between sample sets, estimated nonparametrically.
//!
//! Each input is a *sample set*: a finite group of i.i.d. vectors drawn from
//! an unknown density. The crate estimates functionals
//! `D_{α,β}(p‖q) = ∫ p^α q^β p` from k-nearest-neighbor distances, composes
//! them into linear, polynomial and Gaussian kernels (over L2, Hellinger and
//! Rényi distances), projects the resulting Gram matrices onto the PSD cone,
//! and runs kernel machines over them:
//!
//! - [`learners`]: soft-margin SVM with pairwise multiclass voting,
//!   ν one-class SVM, ε-SVR, all solved by SMO on a precomputed Gram.
//! - [`embed`]: reconstruction weights and locally linear embedding of
//!   distributions.
//! - [`pipeline`]: the end-to-end classification, regression, anomaly and
//!   embedding runs with grid-search tuning and JSON reports.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod divergence;
pub mod embed;
pub mod error;
pub mod gram;
pub mod learners;
pub mod linalg;
pub mod neighbors;
pub mod pipeline;
pub mod presets;
pub mod sampleset;
pub mod special;
pub mod synth;

pub mod cli;

pub use divergence::{
    correction_constant, estimate_d, renyi_divergence, squared_distance, unit_ball_volume,
    DistanceKind, DivergenceSpec,
};
pub use error::{Error, Result};
pub use gram::{build_gram, project_psd, symmetrize, GramMatrix, KernelSpec, Width};
pub use linalg::{eigh, Matrix};
pub use neighbors::{knn_cross, knn_within, Backend, NeighborConfig};
pub use sampleset::{load_dataset, split_folds, Dataset, Label, Partition, SampleSet};
