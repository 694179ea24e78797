//! Gram matrices over sample sets: pairwise estimation, symmetrization and
//! projection onto the PSD cone.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergence::{DistanceKind, DivergenceSpec, PairNeighbors, DISTANCE_FLOOR};
use crate::error::{Error, Result};
use crate::linalg::{eigh, Matrix};
use crate::neighbors::{check_cross, NeighborConfig, NeighborIndex};
use crate::sampleset::SampleSet;

/// Width σ of a Gaussian kernel `exp(-μ²/(2σ²))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Width {
    Fixed(f64),
    /// `factor` times the median of the nonzero off-diagonal squared
    /// distances.
    MedianScaled(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `∫ p q = D_{0,1}`
    Linear,
    /// `(c + D_{0,1})^degree`
    Polynomial { c: f64, degree: u32 },
    /// `exp(-μ²(p,q) / (2σ²))` for one of the estimated squared distances.
    Gaussian { distance: DistanceKind, width: Width },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Polynomial { c, degree } => {
                if !(c >= 0.0) || degree == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "polynomial kernel needs c >= 0 and degree >= 1, got c={c}, degree={degree}"
                    )));
                }
                Ok(())
            }
            KernelSpec::Gaussian { distance, width } => {
                if let DistanceKind::RenyiSq { alpha } = distance {
                    DistanceKind::renyi(alpha)?;
                }
                let w = match width {
                    Width::Fixed(s) | Width::MedianScaled(s) => s,
                };
                if !(w > 0.0) || !w.is_finite() {
                    return Err(Error::InvalidParameter(format!("kernel width must be > 0, got {w}")));
                }
                Ok(())
            }
        }
    }

    /// The pairwise quantity the kernel is computed from.
    pub fn base(&self) -> BaseKind {
        match *self {
            KernelSpec::Linear | KernelSpec::Polynomial { .. } => BaseKind::InnerProduct,
            KernelSpec::Gaussian { distance, .. } => BaseKind::SquaredDistance(distance),
        }
    }

    /// Same kernel with the width replaced.
    pub fn with_width(&self, width: Width) -> KernelSpec {
        match *self {
            KernelSpec::Gaussian { distance, .. } => KernelSpec::Gaussian { distance, width },
            other => other,
        }
    }

    /// Resolves the Gaussian width against the base estimates restricted to
    /// `subset` (all sets when `None`). `None` for non-Gaussian kernels.
    pub fn resolve_sigma(&self, base: &PairwiseEstimates, subset: Option<&[usize]>) -> Result<Option<f64>> {
        match *self {
            KernelSpec::Gaussian { width, .. } => match width {
                Width::Fixed(s) => Ok(Some(s)),
                Width::MedianScaled(f) => Ok(Some(f * base.positive_offdiag_median(subset)?)),
            },
            _ => Ok(None),
        }
    }

    /// Kernel value from one base estimate.
    pub fn evaluate(&self, base_value: f64, sigma: Option<f64>) -> f64 {
        match *self {
            KernelSpec::Linear => base_value,
            KernelSpec::Polynomial { c, degree } => (c + base_value).powi(degree as i32),
            KernelSpec::Gaussian { .. } => {
                let s = sigma.expect("gaussian kernel needs a resolved width");
                (-0.5 * base_value / (s * s)).exp()
            }
        }
    }

    /// Raw (unsymmetrized) kernel matrix from base estimates.
    pub fn apply(&self, base: &PairwiseEstimates, sigma: Option<f64>) -> GramMatrix {
        let v = &base.values;
        GramMatrix::raw(Matrix::from_fn(v.rows(), v.cols(), |i, j| {
            self.evaluate(v[(i, j)], sigma)
        }))
    }

    pub fn label(&self) -> String {
        match self {
            KernelSpec::Linear => "linear".into(),
            KernelSpec::Polynomial { c, degree } => format!("poly(c={c},s={degree})"),
            KernelSpec::Gaussian { distance, .. } => format!("gauss-{}", distance.label()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BaseKind {
    /// `D̂_{0,1}(x_i‖x_j)`
    InnerProduct,
    SquaredDistance(DistanceKind),
}

/// Pairwise base estimates for every ordered pair of sets. Entry `(i, j)`
/// is computed from the neighbors of set `i`'s points in set `j`, so the
/// matrix is in general not symmetric.
#[derive(Clone, Debug)]
pub struct PairwiseEstimates {
    pub kind: BaseKind,
    pub values: Matrix,
    /// Total number of floored zero distances across all cells.
    pub clamped: usize,
}

impl PairwiseEstimates {
    /// Median of the strictly positive off-diagonal entries.
    pub fn positive_offdiag_median(&self, subset: Option<&[usize]>) -> Result<f64> {
        let all: Vec<usize>;
        let idx = match subset {
            Some(s) => s,
            None => {
                all = (0..self.values.rows()).collect();
                &all
            }
        };
        let mut vals: Vec<f64> = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                let v = self.values[(i, j)];
                if i != j && v > 0.0 {
                    vals.push(v);
                }
            }
        }
        if vals.is_empty() {
            return Err(Error::InvalidParameter(
                "no positive off-diagonal distances to scale the kernel width by".into(),
            ));
        }
        vals.sort_by(f64::total_cmp);
        let h = vals.len() / 2;
        Ok(if vals.len() % 2 == 1 {
            vals[h]
        } else {
            0.5 * (vals[h - 1] + vals[h])
        })
    }
}

/// Estimates the base quantity for every ordered pair `(i, j)`, including
/// `i == j`. Cells are evaluated in parallel on the current rayon pool;
/// each cell is independent so the result does not depend on the pool size.
pub fn pairwise_estimates(sets: &[SampleSet], kind: BaseKind, cfg: &NeighborConfig) -> Result<PairwiseEstimates> {
    if sets.len() < 2 {
        return Err(Error::InvalidParameter("need at least two sample sets".into()));
    }
    let terms: Vec<DivergenceSpec> = match kind {
        BaseKind::InnerProduct => vec![DivergenceSpec::new(0.0, 1.0)],
        BaseKind::SquaredDistance(d) => d.terms(),
    };
    for t in &terms {
        t.validate(cfg.k)?;
        if !t.is_consistent_for(cfg.k) {
            log::warn!(
                "k={} does not satisfy k > 2 max(|α|,|β|) + 1 for α={}, β={}",
                cfg.k,
                t.alpha,
                t.beta
            );
        }
    }
    for s in sets {
        check_cross(&sets[0], s, cfg.k)?;
        if s.len() <= cfg.k {
            return Err(Error::TooFewPoints {
                set: s.id().to_string(),
                points: s.len(),
                required: cfg.k + 1,
            });
        }
    }

    let t = sets.len();
    // each index answers the queries of every set, so that is the work the
    // auto backend weighs
    let total_queries: usize = sets.iter().map(SampleSet::len).sum();
    let indices: Vec<NeighborIndex> = sets
        .par_iter()
        .map(|s| NeighborIndex::build(s, cfg.backend, total_queries))
        .collect();
    let rhos: Vec<Vec<f64>> = sets
        .par_iter()
        .zip(indices.par_iter())
        .map(|(s, idx)| idx.within(s, cfg.k))
        .collect::<Result<_>>()?;

    let cells: Vec<(f64, usize)> = (0..t * t)
        .into_par_iter()
        .map(|cell| {
            let (i, j) = (cell / t, cell % t);
            let pair = PairNeighbors {
                rho: rhos[i].clone(),
                nu: indices[j].cross(&sets[i], cfg.k)?,
                m: sets[j].len(),
                d: sets[i].dim(),
                k: cfg.k,
            };
            let mut clamped = 0;
            let mut vals = Vec::with_capacity(terms.len());
            for &s in &terms {
                let e = pair.estimate(s).map_err(|e| Error::Estimation {
                    i,
                    j,
                    message: e.to_string(),
                })?;
                clamped += e.clamped;
                vals.push(e.value);
            }
            let v = match kind {
                BaseKind::InnerProduct => vals[0],
                BaseKind::SquaredDistance(d) => d.compose(&vals),
            };
            if !v.is_finite() {
                return Err(Error::Estimation {
                    i,
                    j,
                    message: format!("non-finite value {v}"),
                });
            }
            Ok((v, clamped))
        })
        .collect::<Result<_>>()?;

    let clamped = cells.iter().map(|c| c.1).sum();
    if clamped > 0 {
        log::warn!("{clamped} zero neighbor distances floored at {DISTANCE_FLOOR:e}");
    }
    let values = Matrix::from_vec(t, t, cells.into_iter().map(|c| c.0).collect())?;
    Ok(PairwiseEstimates { kind, values, clamped })
}

/// Square matrix of kernel estimates plus bookkeeping about what has been
/// done to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub values: Matrix,
    pub symmetric: bool,
    pub psd_projected: bool,
    /// Smallest eigenvalue seen by the PSD projection, before clipping.
    pub min_eigenvalue_before: Option<f64>,
}

impl GramMatrix {
    pub fn raw(values: Matrix) -> Self {
        GramMatrix {
            values,
            symmetric: false,
            psd_projected: false,
            min_eigenvalue_before: None,
        }
    }

    /// Wraps a matrix the caller vouches is symmetric PSD (checked for
    /// symmetry only).
    pub fn trusted_psd(values: Matrix) -> Result<Self> {
        let g = symmetrize(&GramMatrix::raw(values));
        Ok(GramMatrix {
            psd_projected: true,
            ..g
        })
    }

    pub fn len(&self) -> usize {
        self.values.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Principal sub-matrix on `idx`, keeping the flags.
    pub fn principal(&self, idx: &[usize]) -> GramMatrix {
        GramMatrix {
            values: self.values.select(idx, idx),
            ..self.clone()
        }
    }
}

/// Kernel estimates for every ordered pair of sets (not yet symmetrized or
/// projected). A median-scaled width is resolved over all pairs.
pub fn build_gram(sets: &[SampleSet], spec: &KernelSpec, cfg: &NeighborConfig) -> Result<GramMatrix> {
    spec.validate()?;
    let base = pairwise_estimates(sets, spec.base(), cfg)?;
    let sigma = spec.resolve_sigma(&base, None)?;
    Ok(spec.apply(&base, sigma))
}

/// `(G + Gᵀ) / 2`.
pub fn symmetrize(g: &GramMatrix) -> GramMatrix {
    let v = &g.values;
    let n = v.rows();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = v[(i, i)];
        for j in (i + 1)..n {
            let s = 0.5 * (v[(i, j)] + v[(j, i)]);
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    GramMatrix {
        values: out,
        symmetric: true,
        psd_projected: g.psd_projected,
        min_eigenvalue_before: g.min_eigenvalue_before,
    }
}

/// Nearest symmetric PSD matrix in Frobenius norm: eigendecompose and zero
/// the negative eigenvalues.
pub fn project_psd(g: &GramMatrix) -> Result<GramMatrix> {
    if !g.symmetric {
        return Err(Error::NotSymmetric {
            asymmetry: g.values.max_asymmetry(),
        });
    }
    let eig = eigh(&g.values)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    let values = eig.reconstruct_with(|l| l.max(0.0));
    Ok(GramMatrix {
        values,
        symmetric: true,
        psd_projected: true,
        min_eigenvalue_before: Some(min),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionMode {
    /// Project the joint train+test Gram matrix.
    #[default]
    Transductive,
    /// Project the training block only; test rows stay unprojected.
    Inductive,
}

impl std::str::FromStr for ProjectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transductive" => Ok(ProjectionMode::Transductive),
            "inductive" => Ok(ProjectionMode::Inductive),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Metadata written next to a Gram CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramSidecar {
    pub kernel: KernelSpec,
    pub sigma: Option<f64>,
    pub k: usize,
    pub mode: ProjectionMode,
    pub min_eigenvalue_before: Option<f64>,
    pub set_ids: Vec<String>,
}

/// Writes the full matrix row-major as CSV plus a JSON sidecar at
/// `<path>.json`.
pub fn write_gram(g: &GramMatrix, sidecar: &GramSidecar, csv_path: &Path) -> Result<()> {
    let mut out = String::new();
    for i in 0..g.len() {
        let row: Vec<String> = g.values.row(i).iter().map(f64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(csv_path, out).map_err(|e| Error::io(csv_path, e))?;
    let side = csv_path.with_extension("json");
    fs::write(&side, serde_json::to_string_pretty(sidecar)?).map_err(|e| Error::io(&side, e))
}
