//! The k-NN estimator of `D_{α,β}(p‖q) = ∫ p^α q^β p` and the divergences
//! and squared distances composed from it.
//!
//! With `ρ_k(i)` the distance from `x_i` to its kth neighbor among the
//! other `n - 1` points of `x`, and `ν_k(i)` the distance to its kth
//! neighbor in `y` (`m` points), the estimate is
//!
//! ```text
//! D̂ = B / (n (n-1)^α m^β) · Σ_i ρ_k(i)^(-dα) ν_k(i)^(-dβ)
//! B = c̄_d^(-α-β) Γ(k)² / (Γ(k-α) Γ(k-β))
//! ```
//!
//! where `c̄_d` is the volume of the unit ball in `d` dimensions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neighbors::{check_cross, NeighborConfig, NeighborIndex};
use crate::sampleset::SampleSet;
use crate::special::ln_gamma;

/// Distances below this are raised to it before being exponentiated.
pub const DISTANCE_FLOOR: f64 = 1e-12;
/// Lower bound applied to `D̂` inside the Rényi logarithm.
pub const RENYI_LOG_FLOOR: f64 = 1e-300;
/// α used for the KL proxy.
pub const KL_ALPHA: f64 = 0.99;

/// Exponents `(α, β)` of one `D_{α,β}` functional.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl DivergenceSpec {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        DivergenceSpec { alpha, beta }
    }

    /// The Gamma arguments `k - α`, `k - β` must be positive.
    pub fn validate(&self, k: usize) -> Result<()> {
        let k = k as f64;
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidParameter("α and β must be finite".into()));
        }
        if k <= self.alpha || k <= self.beta {
            return Err(Error::InvalidParameter(format!(
                "need k > α and k > β, got k={k}, α={}, β={}",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }

    /// Whether `k > 2 max(|α|, |β|) + 1`, the condition under which the
    /// estimator is L2 consistent.
    pub fn is_consistent_for(&self, k: usize) -> bool {
        k as f64 > 2.0 * self.alpha.abs().max(self.beta.abs()) + 1.0
    }
}

/// Squared distance composed from `D_{α,β}` terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceKind {
    /// `∫(p-q)² = D_{1,0} - 2 D_{0,1} + D_{-1,2}`
    L2,
    /// `1 - ∫√(pq) = 1 - D_{-1/2,1/2}`
    Hellinger,
    /// Squared Rényi-α divergence `(log D_{α-1,1-α} / (α-1))²`.
    RenyiSq { alpha: f64 },
    /// Squared Rényi divergence at α = 0.99.
    KlSq,
}

impl DistanceKind {
    pub fn renyi(alpha: f64) -> Result<Self> {
        if alpha == 1.0 || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Rényi order must be finite and != 1, got {alpha}"
            )));
        }
        Ok(DistanceKind::RenyiSq { alpha })
    }

    /// The `D_{α,β}` terms this distance needs.
    pub fn terms(&self) -> Vec<DivergenceSpec> {
        match *self {
            DistanceKind::L2 => vec![
                DivergenceSpec::new(1.0, 0.0),
                DivergenceSpec::new(0.0, 1.0),
                DivergenceSpec::new(-1.0, 2.0),
            ],
            DistanceKind::Hellinger => vec![DivergenceSpec::new(-0.5, 0.5)],
            DistanceKind::RenyiSq { alpha } => vec![DivergenceSpec::new(alpha - 1.0, 1.0 - alpha)],
            DistanceKind::KlSq => vec![DivergenceSpec::new(KL_ALPHA - 1.0, 1.0 - KL_ALPHA)],
        }
    }

    /// Combines estimates of [`terms`](Self::terms) (same order) into the
    /// squared distance, clamping out-of-range compositions.
    pub fn compose(&self, d: &[f64]) -> f64 {
        match *self {
            DistanceKind::L2 => (d[0] - 2.0 * d[1] + d[2]).max(0.0),
            DistanceKind::Hellinger => (1.0 - d[0]).clamp(0.0, 1.0),
            DistanceKind::RenyiSq { alpha } => renyi_sq(d[0], alpha),
            DistanceKind::KlSq => renyi_sq(d[0], KL_ALPHA),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DistanceKind::L2 => "l2".into(),
            DistanceKind::Hellinger => "hellinger".into(),
            DistanceKind::RenyiSq { alpha } => format!("renyi-{alpha}"),
            DistanceKind::KlSq => "kl".into(),
        }
    }
}

fn renyi_sq(d: f64, alpha: f64) -> f64 {
    let r = d.max(RENYI_LOG_FLOOR).ln() / (alpha - 1.0);
    r * r
}

/// Volume of the unit ball in `d` dimensions, `π^(d/2) / Γ(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() - ln_gamma(h + 1.0)).exp()
}

fn ln_correction_constant(k: usize, d: usize, alpha: f64, beta: f64) -> Result<f64> {
    DivergenceSpec::new(alpha, beta).validate(k)?;
    if d == 0 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    let kf = k as f64;
    let ln_ball = unit_ball_volume(d).ln();
    let lg = ln_gamma(kf);
    Ok(-(alpha + beta) * ln_ball + 2.0 * lg - ln_gamma(kf - alpha) - ln_gamma(kf - beta))
}

/// `B_{k,d,α,β} = c̄_d^(-α-β) Γ(k)² / (Γ(k-α) Γ(k-β))`.
pub fn correction_constant(k: usize, d: usize, alpha: f64, beta: f64) -> Result<f64> {
    ln_correction_constant(k, d, alpha, beta).map(f64::exp)
}

/// A `D̂_{α,β}` value together with the number of neighbor distances that
/// had to be floored at [`DISTANCE_FLOOR`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub clamped: usize,
}

/// `D̂_{α,β}` from precomputed neighbor distances.
///
/// `rho` holds the within-set kth-NN distances of the `n` points of `x`,
/// `nu` their kth-NN distances into `y`, which has `m` points.
pub fn estimate_from_distances(
    rho: &[f64],
    nu: &[f64],
    m: usize,
    d: usize,
    spec: DivergenceSpec,
    k: usize,
) -> Result<Estimate> {
    let n = rho.len();
    if nu.len() != n {
        return Err(Error::Shape(format!("{} ρ values but {} ν values", n, nu.len())));
    }
    if n < 2 || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "estimator needs n >= 2 and m >= 1, got n={n}, m={m}"
        )));
    }
    let ln_b = ln_correction_constant(k, d, spec.alpha, spec.beta)?;
    let (ea, eb) = (-(d as f64) * spec.alpha, -(d as f64) * spec.beta);

    let mut clamped = 0;
    let mut floor = |r: f64, e: f64| {
        if r < DISTANCE_FLOOR {
            if e != 0.0 {
                clamped += 1;
            }
            DISTANCE_FLOOR
        } else {
            r
        }
    };
    let mut logs = Vec::with_capacity(n);
    for (&r, &v) in rho.iter().zip(nu) {
        let mut t = 0.0;
        if ea != 0.0 {
            t += ea * floor(r, ea).ln();
        }
        if eb != 0.0 {
            t += eb * floor(v, eb).ln();
        }
        logs.push(t);
    }
    let shift = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|t| (t - shift).exp()).sum();
    let mean = sum / n as f64;
    let scale = shift - spec.alpha * ((n - 1) as f64).ln() - spec.beta * (m as f64).ln();
    let value = ln_b.exp() * scale.exp() * mean;
    if !value.is_finite() {
        return Err(Error::NonFiniteEstimate { value });
    }
    Ok(Estimate { value, clamped })
}

/// Neighbor distances for one ordered pair of sets, reusable across every
/// `(α, β)` that shares `k`.
#[derive(Clone, Debug)]
pub struct PairNeighbors {
    pub rho: Vec<f64>,
    pub nu: Vec<f64>,
    pub m: usize,
    pub d: usize,
    pub k: usize,
}

impl PairNeighbors {
    pub fn compute(x: &SampleSet, y: &SampleSet, cfg: &NeighborConfig) -> Result<Self> {
        check_cross(x, y, cfg.k)?;
        let rho = NeighborIndex::build(x, cfg.backend, x.len()).within(x, cfg.k)?;
        let nu = NeighborIndex::build(y, cfg.backend, x.len()).cross(x, cfg.k)?;
        Ok(PairNeighbors {
            rho,
            nu,
            m: y.len(),
            d: x.dim(),
            k: cfg.k,
        })
    }

    pub fn estimate(&self, spec: DivergenceSpec) -> Result<Estimate> {
        estimate_from_distances(&self.rho, &self.nu, self.m, self.d, spec, self.k)
    }

    pub fn squared_distance(&self, kind: DistanceKind) -> Result<f64> {
        let terms = kind
            .terms()
            .into_iter()
            .map(|s| self.estimate(s).map(|e| e.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(kind.compose(&terms))
    }
}

fn warn_if_inconsistent(spec: DivergenceSpec, k: usize) {
    if !spec.is_consistent_for(k) {
        log::warn!(
            "k={k} does not satisfy k > 2 max(|α|,|β|) + 1 for α={}, β={}",
            spec.alpha,
            spec.beta
        );
    }
}

/// `D̂_{α,β}(x‖y)` with `cfg.k` neighbors.
pub fn estimate_d(x: &SampleSet, y: &SampleSet, spec: DivergenceSpec, cfg: &NeighborConfig) -> Result<f64> {
    spec.validate(cfg.k)?;
    warn_if_inconsistent(spec, cfg.k);
    let pair = PairNeighbors::compute(x, y, cfg)?;
    let est = pair.estimate(spec)?;
    if est.clamped > 0 {
        log::warn!(
            "{} zero neighbor distances floored at {DISTANCE_FLOOR:e} estimating D({}‖{})",
            est.clamped,
            x.id(),
            y.id()
        );
    }
    Ok(est.value)
}

/// Estimated squared distance between the distributions behind `x` and `y`.
pub fn squared_distance(x: &SampleSet, y: &SampleSet, kind: DistanceKind, cfg: &NeighborConfig) -> Result<f64> {
    for s in kind.terms() {
        s.validate(cfg.k)?;
        warn_if_inconsistent(s, cfg.k);
    }
    PairNeighbors::compute(x, y, cfg)?.squared_distance(kind)
}

/// Estimated Rényi-α divergence `log D̂_{α-1,1-α} / (α - 1)`.
pub fn renyi_divergence(x: &SampleSet, y: &SampleSet, alpha: f64, cfg: &NeighborConfig) -> Result<f64> {
    DistanceKind::renyi(alpha)?;
    let d = estimate_d(x, y, DivergenceSpec::new(alpha - 1.0, 1.0 - alpha), cfg)?;
    Ok(d.max(RENYI_LOG_FLOOR).ln() / (alpha - 1.0))
}
