//! Exact kth-nearest-neighbor distances within one sample set and from one
//! set into another.

mod kdtree;

pub use kdtree::KdTree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampleset::SampleSet;

/// Above this many distance evaluations (`n * m`) the `Auto` backend
/// switches from brute force to a kd-tree.
pub const AUTO_TREE_MIN_WORK: f64 = 1e6;
/// `Auto` never uses the tree beyond this dimension.
pub const AUTO_TREE_MAX_DIM: usize = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Brute,
    KdTree,
    #[default]
    Auto,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Backend::Brute),
            "kdtree" => Ok(Backend::KdTree),
            "auto" => Ok(Backend::Auto),
            other => Err(Error::Config(format!("unknown neighbor backend `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborConfig {
    pub k: usize,
    pub backend: Backend,
}

impl Default for NeighborConfig {
    fn default() -> Self {
        NeighborConfig {
            k: 5,
            backend: Backend::Auto,
        }
    }
}

impl NeighborConfig {
    pub fn new(k: usize, backend: Backend) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        Ok(NeighborConfig { k, backend })
    }
}

#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let t = x - y;
        acc += t * t;
    }
    acc
}

/// The `k` smallest values offered so far, kept sorted.
pub(crate) struct KBest {
    k: usize,
    vals: Vec<f64>,
}

impl KBest {
    pub(crate) fn new(k: usize) -> Self {
        KBest {
            k,
            vals: Vec::with_capacity(k + 1),
        }
    }

    #[inline]
    pub(crate) fn worst(&self) -> f64 {
        if self.vals.len() < self.k {
            f64::INFINITY
        } else {
            self.vals[self.k - 1]
        }
    }

    #[inline]
    pub(crate) fn offer(&mut self, v: f64) {
        if v >= self.worst() {
            return;
        }
        let pos = self.vals.partition_point(|&x| x <= v);
        self.vals.insert(pos, v);
        self.vals.truncate(self.k);
    }

    pub(crate) fn kth(&self) -> f64 {
        self.vals[self.k - 1]
    }
}

/// A target set prepared for repeated kth-neighbor queries.
pub enum NeighborIndex<'a> {
    Brute(&'a SampleSet),
    Tree(KdTree),
}

impl<'a> NeighborIndex<'a> {
    /// Chooses the backend for a target queried `expected_queries` times.
    pub fn build(target: &'a SampleSet, backend: Backend, expected_queries: usize) -> Self {
        let use_tree = match backend {
            Backend::Brute => false,
            Backend::KdTree => true,
            Backend::Auto => {
                target.dim() <= AUTO_TREE_MAX_DIM
                    && (target.len() as f64) * (expected_queries as f64) > AUTO_TREE_MIN_WORK
            }
        };
        if use_tree {
            NeighborIndex::Tree(KdTree::new(target))
        } else {
            NeighborIndex::Brute(target)
        }
    }

    pub fn len(&self) -> usize {
        match self {
            NeighborIndex::Brute(s) => s.len(),
            NeighborIndex::Tree(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn kth_sq_dist(&self, query: &[f64], k: usize, exclude: Option<usize>) -> f64 {
        match self {
            NeighborIndex::Brute(set) => {
                let mut best = KBest::new(k);
                for (i, p) in set.rows().enumerate() {
                    if Some(i) != exclude {
                        best.offer(sq_dist(query, p));
                    }
                }
                best.kth()
            }
            NeighborIndex::Tree(tree) => tree.kth_sq_dist(query, k, exclude),
        }
    }

    /// kth-NN distance of every point of the indexed set among the other
    /// points of the same set.
    pub fn within(&self, set: &SampleSet, k: usize) -> Result<Vec<f64>> {
        check_within(set, k)?;
        Ok((0..set.len())
            .map(|i| self.kth_sq_dist(set.point(i), k, Some(i)).sqrt())
            .collect())
    }

    /// kth-NN distance of every query point into the indexed set. A query
    /// point that also appears in the target is not excluded.
    pub fn cross(&self, query: &SampleSet, k: usize) -> Result<Vec<f64>> {
        Ok(query
            .rows()
            .map(|p| self.kth_sq_dist(p, k, None).sqrt())
            .collect())
    }
}

fn check_within(set: &SampleSet, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if set.len() <= k {
        return Err(Error::TooFewPoints {
            set: set.id().to_string(),
            points: set.len(),
            required: k + 1,
        });
    }
    Ok(())
}

pub(crate) fn check_cross(query: &SampleSet, target: &SampleSet, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if query.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            set: target.id().to_string(),
            expected: query.dim(),
            found: target.dim(),
        });
    }
    if target.len() < k {
        return Err(Error::TooFewPoints {
            set: target.id().to_string(),
            points: target.len(),
            required: k,
        });
    }
    Ok(())
}

/// Distance from each point of `set` to its kth nearest neighbor among the
/// remaining `n - 1` points.
pub fn knn_within(set: &SampleSet, k: usize, backend: Backend) -> Result<Vec<f64>> {
    check_within(set, k)?;
    NeighborIndex::build(set, backend, set.len()).within(set, k)
}

/// Distance from each point of `query` to its kth nearest neighbor in
/// `target`.
pub fn knn_cross(query: &SampleSet, target: &SampleSet, k: usize, backend: Backend) -> Result<Vec<f64>> {
    check_cross(query, target, k)?;
    NeighborIndex::build(target, backend, query.len()).cross(query, k)
}
