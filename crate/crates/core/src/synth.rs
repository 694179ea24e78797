//! Seeded generators for synthetic sample sets, and closed-form values of
//! the functionals the experiments learn.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded per set through
//! [`derive_seed`], so a dataset is identical whether its sets are drawn
//! serially or in parallel. Standard normals use the Box–Muller transform:
//! for `u1 = 1 - U₁ ∈ (0, 1]`, `u2 = U₂ ∈ [0, 1)`,
//! `z₀ = √(-2 ln u1) cos(2π u2)`, `z₁ = √(-2 ln u1) sin(2π u2)`, both used.

use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_psd, eigh, solve, Matrix};
use crate::sampleset::{Dataset, Label, Partition, SampleSet};

/// SplitMix64 mix of `(seed, stream)`; used to give every generated set its
/// own independent seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fills `out` with independent standard normals via Box–Muller.
pub fn fill_standard_normal(rng: &mut impl Rng, out: &mut [f64]) {
    let mut chunks = out.chunks_mut(2);
    for pair in &mut chunks {
        let u1 = 1.0 - rng.gen::<f64>();
        let u2 = rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        pair[0] = r * c;
        if pair.len() > 1 {
            pair[1] = r * s;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Gaussian { mean: Vec<f64>, cov: Vec<Vec<f64>> },
    /// Zero-mean Gaussian with covariance `R(angle) Σ R(angle)ᵀ`.
    RotatedGaussian { base_cov: [[f64; 2]; 2], angle: f64 },
    Beta { a: f64, b: f64 },
    /// Independent uniform coordinates on the box `[lo, hi)`.
    Uniform { lo: Vec<f64>, hi: Vec<f64> },
    GaussianMixture {
        components: Vec<GaussianComponent>,
        weights: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n_points: usize,
    pub seed: u64,
}

/// Precomputed sampler: Cholesky factors are built once per family.
enum Sampler {
    Gaussian { mean: Vec<f64>, chol: Matrix },
    Beta(rand_distr::Beta<f64>),
    Uniform { lo: Vec<f64>, hi: Vec<f64> },
    Mixture { parts: Vec<(Vec<f64>, Matrix)>, cumulative: Vec<f64> },
}

fn cov_matrix(mean: &[f64], cov: &[Vec<f64>]) -> Result<Matrix> {
    let m = Matrix::from_rows(cov)?;
    if !m.is_square() || m.rows() != mean.len() || mean.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "covariance must be {0}x{0} to match the mean",
            mean.len()
        )));
    }
    if m.max_asymmetry() > 1e-12 * (1.0 + m.frobenius_norm()) {
        return Err(Error::InvalidParameter("covariance matrix is not symmetric".into()));
    }
    Ok(m)
}

/// `R(θ) Σ R(θ)ᵀ` for a 2×2 `Σ`.
pub fn rotated_cov(base_cov: [[f64; 2]; 2], angle: f64) -> [[f64; 2]; 2] {
    let (s, c) = angle.sin_cos();
    let r = [[c, -s], [s, c]];
    let mut rs = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            rs[i][j] = r[i][0] * base_cov[0][j] + r[i][1] * base_cov[1][j];
        }
    }
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = rs[i][0] * r[j][0] + rs[i][1] * r[j][1];
        }
    }
    m
}

impl Family {
    pub fn dim(&self) -> usize {
        match self {
            Family::Gaussian { mean, .. } => mean.len(),
            Family::RotatedGaussian { .. } => 2,
            Family::Beta { .. } => 1,
            Family::Uniform { lo, .. } => lo.len(),
            Family::GaussianMixture { components, .. } => {
                components.first().map_or(0, |c| c.mean.len())
            }
        }
    }

    fn sampler(&self) -> Result<Sampler> {
        match self {
            Family::Gaussian { mean, cov } => Ok(Sampler::Gaussian {
                mean: mean.clone(),
                chol: cholesky_psd(&cov_matrix(mean, cov)?)?,
            }),
            Family::RotatedGaussian { base_cov, angle } => {
                let m = rotated_cov(*base_cov, *angle);
                Family::Gaussian {
                    mean: vec![0.0; 2],
                    cov: vec![m[0].to_vec(), m[1].to_vec()],
                }
                .sampler()
            }
            Family::Beta { a, b } => {
                if !(*a > 0.0 && *b > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "Beta parameters must be > 0, got a={a}, b={b}"
                    )));
                }
                rand_distr::Beta::new(*a, *b)
                    .map(Sampler::Beta)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))
            }
            Family::Uniform { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() || lo.iter().zip(hi).any(|(l, h)| !(l < h)) {
                    return Err(Error::InvalidParameter(
                        "uniform box needs lo < hi in every coordinate".into(),
                    ));
                }
                Ok(Sampler::Uniform {
                    lo: lo.clone(),
                    hi: hi.clone(),
                })
            }
            Family::GaussianMixture {
                components,
                weights,
            } => {
                if components.is_empty() || components.len() != weights.len() {
                    return Err(Error::InvalidParameter(
                        "mixture needs one weight per component".into(),
                    ));
                }
                let total: f64 = weights.iter().sum();
                if weights.iter().any(|&w| !(w >= 0.0)) || (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidParameter(format!(
                        "mixture weights must be non-negative and sum to 1, got {total}"
                    )));
                }
                let d = components[0].mean.len();
                let mut parts = Vec::with_capacity(components.len());
                for c in components {
                    if c.mean.len() != d {
                        return Err(Error::InvalidParameter(
                            "mixture components differ in dimension".into(),
                        ));
                    }
                    parts.push((c.mean.clone(), cholesky_psd(&cov_matrix(&c.mean, &c.cov)?)?));
                }
                let cumulative = weights
                    .iter()
                    .scan(0.0, |acc, w| {
                        *acc += w;
                        Some(*acc)
                    })
                    .collect();
                Ok(Sampler::Mixture { parts, cumulative })
            }
        }
    }
}

fn gaussian_point(rng: &mut ChaCha8Rng, mean: &[f64], chol: &Matrix, z: &mut [f64], out: &mut [f64]) {
    fill_standard_normal(rng, z);
    for (i, o) in out.iter_mut().enumerate() {
        let row = chol.row(i);
        *o = mean[i] + row[..=i].iter().zip(&z[..=i]).map(|(l, zz)| l * zz).sum::<f64>();
    }
}

impl Sampler {
    fn draw(&self, rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<f64> {
        let mut points = vec![0.0; n * d];
        match self {
            Sampler::Gaussian { mean, chol } => {
                // one batch of normals, consumed d at a time
                let mut z = vec![0.0; n * d];
                fill_standard_normal(rng, &mut z);
                for (p, zz) in points.chunks_mut(d).zip(z.chunks(d)) {
                    for (i, o) in p.iter_mut().enumerate() {
                        let row = chol.row(i);
                        *o = mean[i] + row[..=i].iter().zip(&zz[..=i]).map(|(l, v)| l * v).sum::<f64>();
                    }
                }
            }
            Sampler::Beta(beta) => {
                for v in points.iter_mut() {
                    *v = beta.sample(rng);
                }
            }
            Sampler::Uniform { lo, hi } => {
                for p in points.chunks_mut(d) {
                    for i in 0..d {
                        p[i] = lo[i] + (hi[i] - lo[i]) * rng.gen::<f64>();
                    }
                }
            }
            Sampler::Mixture { parts, cumulative } => {
                let mut z = vec![0.0; d];
                for p in points.chunks_mut(d) {
                    let u = rng.gen::<f64>() * cumulative[cumulative.len() - 1];
                    let c = cumulative.iter().position(|&cw| u < cw).unwrap_or(parts.len() - 1);
                    gaussian_point(rng, &parts[c].0, &parts[c].1, &mut z, p);
                }
            }
        }
        points
    }
}

/// Draws `n_points` i.i.d. points; the same spec always gives the same set.
pub fn sample(spec: &GeneratorSpec) -> Result<SampleSet> {
    sample_family(&spec.family, spec.n_points, spec.seed, format!("set-{}", spec.seed))
}

pub fn sample_family(family: &Family, n: usize, seed: u64, id: impl Into<String>) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("n_points must be positive".into()));
    }
    let d = family.dim();
    let sampler = family.sampler()?;
    let mut rng = rng_from_seed(seed);
    SampleSet::new(id, d, sampler.draw(&mut rng, n, d))
}

/// `2(b-a)√(a+b+1) / ((a+b+2)√(ab))`
pub fn beta_skewness(a: f64, b: f64) -> f64 {
    2.0 * (b - a) * (a + b + 1.0).sqrt() / ((a + b + 2.0) * (a * b).sqrt())
}

/// `½ ln(2πe M₁₁)` with `M = R(angle) Σ R(angle)ᵀ`.
pub fn rotated_gaussian_marginal_entropy(base_cov: [[f64; 2]; 2], angle: f64) -> Result<f64> {
    let m11 = rotated_cov(base_cov, angle)[0][0];
    if !(m11 > 0.0) {
        return Err(Error::InvalidParameter(format!("marginal variance must be > 0, got {m11}")));
    }
    Ok(0.5 * (2.0 * PI * E * m11).ln())
}

fn log_det_pd(m: &Matrix) -> Result<f64> {
    let eig = eigh(m)?;
    if eig.values.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidParameter("covariance is not positive definite".into()));
    }
    Ok(eig.values.iter().map(|l| l.ln()).sum())
}

/// Closed-form Rényi-α divergence `ln(∫ p^α q^{1-α}) / (α - 1)` between
/// `p = N(μ_p, Σ_p)` and `q = N(μ_q, Σ_q)`:
///
/// ```text
/// α/2 · δᵀ Σ_α⁻¹ δ - ln(|Σ_α| / (|Σ_p|^{1-α} |Σ_q|^α)) / (2(α-1)),
/// Σ_α = α Σ_q + (1-α) Σ_p,  δ = μ_p - μ_q.
/// ```
pub fn gaussian_renyi_divergence(
    p: (&[f64], &[Vec<f64>]),
    q: (&[f64], &[Vec<f64>]),
    alpha: f64,
) -> Result<f64> {
    if alpha == 1.0 || !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!("Rényi order must be in (0,1)∪(1,∞), got {alpha}")));
    }
    let sp = cov_matrix(p.0, p.1)?;
    let sq = cov_matrix(q.0, q.1)?;
    if p.0.len() != q.0.len() {
        return Err(Error::InvalidParameter("Gaussians differ in dimension".into()));
    }
    let n = p.0.len();
    let sa = Matrix::from_fn(n, n, |i, j| alpha * sq[(i, j)] + (1.0 - alpha) * sp[(i, j)]);
    let ld_a = log_det_pd(&sa)
        .map_err(|_| Error::InvalidParameter("interpolated covariance is indefinite".into()))?;
    let delta: Vec<f64> = p.0.iter().zip(q.0).map(|(a, b)| a - b).collect();
    let x = solve(&sa, &delta)?;
    let quad: f64 = delta.iter().zip(&x).map(|(a, b)| a * b).sum();
    let ld_p = log_det_pd(&sp)?;
    let ld_q = log_det_pd(&sq)?;
    Ok(0.5 * alpha * quad - (ld_a - (1.0 - alpha) * ld_p - alpha * ld_q) / (2.0 * (alpha - 1.0)))
}

/// Generates one set per family in parallel, set `i` seeded with
/// `derive_seed(seed, i)`.
pub fn sample_many(families: &[Family], n_points: usize, seed: u64, prefix: &str) -> Result<Vec<SampleSet>> {
    let width = families.len().max(1).to_string().len();
    families
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            sample_family(
                f,
                n_points,
                derive_seed(seed, i as u64),
                format!("{prefix}{i:0width$}"),
            )
        })
        .collect()
}

/// Synthetic experiment datasets. All are pure functions of their
/// arguments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    /// `Beta(a, b)` sets with `a ~ U[a_lo, a_hi]`, target = skewness.
    BetaSkewness {
        n_sets: usize,
        n_train: usize,
        n_points: usize,
        a_range: (f64, f64),
        b: f64,
    },
    /// Rotated zero-mean Gaussians with angle `iπ/n_angles`, `i` uniform on
    /// `1..=n_angles`; target = entropy of the first marginal.
    GaussEntropy {
        n_sets: usize,
        n_train: usize,
        n_points: usize,
        base_cov: [[f64; 2]; 2],
        n_angles: usize,
    },
    /// Rotated Gaussians at angles `i * step`, `i = 0..n_sets`; unlabeled.
    RotatedGaussians {
        n_sets: usize,
        n_points: usize,
        base_cov: [[f64; 2]; 2],
        step: f64,
    },
    /// Classes of Gaussian mixtures; each set draws its component means
    /// jittered by `N(0, jitter² I)`.
    MixtureClasses {
        sets_per_class: usize,
        n_points: usize,
        classes: Vec<Vec<GaussianComponent>>,
        jitter: f64,
    },
    /// Gaussian sets `N(mean_c, I)`, one class per mean.
    GaussianClasses {
        sets_per_class: usize,
        n_points: usize,
        means: Vec<Vec<f64>>,
    },
    /// `n_sets - n_outliers` sets from `N(0, I)` then `n_outliers` from
    /// `N(shift·1, I)`; a random `n_train` of them form the training part.
    PlantedOutlier {
        n_sets: usize,
        n_outliers: usize,
        n_train: usize,
        n_points: usize,
        dim: usize,
        shift: f64,
    },
}

fn identity_cov(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Generated dataset plus the per-set parameter that produced each set
/// (the drawn `a`, the angle, ...), when there is one.
#[derive(Clone, Debug)]
pub struct Generated {
    pub dataset: Dataset,
    pub parameters: Option<Vec<f64>>,
}

impl DatasetSpec {
    pub fn generate(&self, seed: u64) -> Result<Generated> {
        // set i uses derive_seed(seed, i); per-dataset choices use their own stream
        let mut meta = rng_from_seed(derive_seed(seed, u64::MAX));
        match self {
            DatasetSpec::BetaSkewness {
                n_sets,
                n_train,
                n_points,
                a_range,
                b,
            } => {
                let a: Vec<f64> = (0..*n_sets)
                    .map(|_| a_range.0 + (a_range.1 - a_range.0) * meta.gen::<f64>())
                    .collect();
                let fams: Vec<Family> = a.iter().map(|&a| Family::Beta { a, b: *b }).collect();
                let sets = sample_many(&fams, *n_points, seed, "beta-")?;
                let labels = a.iter().map(|&a| Label::Number(beta_skewness(a, *b))).collect();
                Ok(Generated {
                    dataset: Dataset::new(sets, Some(labels), Some(first_n_train(*n_sets, *n_train)?))?,
                    parameters: Some(a),
                })
            }
            DatasetSpec::GaussEntropy {
                n_sets,
                n_train,
                n_points,
                base_cov,
                n_angles,
            } => {
                if *n_angles == 0 {
                    return Err(Error::InvalidParameter("n_angles must be positive".into()));
                }
                let angles: Vec<f64> = (0..*n_sets)
                    .map(|_| meta.gen_range(1..=*n_angles) as f64 * PI / *n_angles as f64)
                    .collect();
                let fams: Vec<Family> = angles
                    .iter()
                    .map(|&angle| Family::RotatedGaussian {
                        base_cov: *base_cov,
                        angle,
                    })
                    .collect();
                let sets = sample_many(&fams, *n_points, seed, "rot-")?;
                let labels = angles
                    .iter()
                    .map(|&a| rotated_gaussian_marginal_entropy(*base_cov, a).map(Label::Number))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Generated {
                    dataset: Dataset::new(sets, Some(labels), Some(first_n_train(*n_sets, *n_train)?))?,
                    parameters: Some(angles),
                })
            }
            DatasetSpec::RotatedGaussians {
                n_sets,
                n_points,
                base_cov,
                step,
            } => {
                let angles: Vec<f64> = (0..*n_sets).map(|i| i as f64 * step).collect();
                let fams: Vec<Family> = angles
                    .iter()
                    .map(|&angle| Family::RotatedGaussian {
                        base_cov: *base_cov,
                        angle,
                    })
                    .collect();
                let sets = sample_many(&fams, *n_points, seed, "rot-")?;
                Ok(Generated {
                    dataset: Dataset::new(sets, None, None)?,
                    parameters: Some(angles),
                })
            }
            DatasetSpec::MixtureClasses {
                sets_per_class,
                n_points,
                classes,
                jitter,
            } => {
                let mut fams = Vec::new();
                let mut labels = Vec::new();
                for (c, comps) in classes.iter().enumerate() {
                    for _ in 0..*sets_per_class {
                        let components = comps
                            .iter()
                            .map(|comp| {
                                let mut z = vec![0.0; comp.mean.len()];
                                fill_standard_normal(&mut meta, &mut z);
                                GaussianComponent {
                                    mean: comp.mean.iter().zip(&z).map(|(m, e)| m + jitter * e).collect(),
                                    cov: comp.cov.clone(),
                                }
                            })
                            .collect::<Vec<_>>();
                        let w = 1.0 / components.len() as f64;
                        let weights = vec![w; components.len()];
                        fams.push(Family::GaussianMixture { components, weights });
                        labels.push(Label::Number(c as f64));
                    }
                }
                let sets = sample_many(&fams, *n_points, seed, "mix-")?;
                Ok(Generated {
                    dataset: Dataset::new(sets, Some(labels), None)?,
                    parameters: None,
                })
            }
            DatasetSpec::GaussianClasses {
                sets_per_class,
                n_points,
                means,
            } => {
                let mut fams = Vec::new();
                let mut labels = Vec::new();
                for (c, mean) in means.iter().enumerate() {
                    for _ in 0..*sets_per_class {
                        fams.push(Family::Gaussian {
                            mean: mean.clone(),
                            cov: identity_cov(mean.len()),
                        });
                        labels.push(Label::Number(c as f64));
                    }
                }
                let sets = sample_many(&fams, *n_points, seed, "gauss-")?;
                Ok(Generated {
                    dataset: Dataset::new(sets, Some(labels), None)?,
                    parameters: None,
                })
            }
            DatasetSpec::PlantedOutlier {
                n_sets,
                n_outliers,
                n_train,
                n_points,
                dim,
                shift,
            } => {
                if n_outliers > n_sets || n_train > n_sets {
                    return Err(Error::InvalidParameter(
                        "n_outliers and n_train must not exceed n_sets".into(),
                    ));
                }
                let fams: Vec<Family> = (0..*n_sets)
                    .map(|i| Family::Gaussian {
                        mean: vec![if i + n_outliers >= *n_sets { *shift } else { 0.0 }; *dim],
                        cov: identity_cov(*dim),
                    })
                    .collect();
                let sets = sample_many(&fams, *n_points, seed, "set-")?;
                let mut order: Vec<usize> = (0..*n_sets).collect();
                rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut meta);
                let mut partition = vec![Partition::Test; *n_sets];
                for &i in &order[..*n_train] {
                    partition[i] = Partition::Train;
                }
                let shifts = (0..*n_sets)
                    .map(|i| if i + n_outliers >= *n_sets { *shift } else { 0.0 })
                    .collect();
                Ok(Generated {
                    dataset: Dataset::new(sets, None, Some(partition))?,
                    parameters: Some(shifts),
                })
            }
        }
    }
}

fn first_n_train(n: usize, n_train: usize) -> Result<Vec<Partition>> {
    if n_train > n {
        return Err(Error::InvalidParameter(format!("n_train {n_train} exceeds {n} sets")));
    }
    Ok((0..n)
        .map(|i| if i < n_train { Partition::Train } else { Partition::Test })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skewness_values() {
        assert_eq!(beta_skewness(3.0, 3.0), 0.0);
        assert_eq!(beta_skewness(7.5, 7.5), 0.0);
        assert!((beta_skewness(20.0, 3.0) + 0.8601395235657991).abs() < 1e-14);
    }

    #[test]
    fn marginal_entropy_cases() {
        let s = [[9.0, 0.0], [0.0, 1.0]];
        let h0 = rotated_gaussian_marginal_entropy(s, 0.0).unwrap();
        assert!((h0 - 0.5 * (18.0 * PI * E).ln()).abs() < 1e-14);
        let h1 = rotated_gaussian_marginal_entropy(s, PI / 2.0).unwrap();
        assert!((h1 - 0.5 * (2.0 * PI * E).ln()).abs() < 1e-14);
        let v = 1.0 / (2.0 * PI * E);
        let unit = rotated_gaussian_marginal_entropy([[v, 0.0], [0.0, 1.0]], 0.0).unwrap();
        assert!(unit.abs() < 1e-15);
        assert!(rotated_gaussian_marginal_entropy([[0.0, 0.0], [0.0, 1.0]], 0.0).is_err());
    }

    #[test]
    fn renyi_closed_form() {
        let one = vec![vec![1.0]];
        let d = gaussian_renyi_divergence((&[0.0], &one), (&[1.0], &one), 0.5).unwrap();
        assert!((d - 0.25).abs() < 1e-14);
        assert_eq!(gaussian_renyi_divergence((&[0.3], &one), (&[0.3], &one), 0.7).unwrap(), 0.0);
        let wide = vec![vec![4.0]];
        let a = gaussian_renyi_divergence((&[0.0], &one), (&[2.0], &wide), 0.5).unwrap();
        let b = gaussian_renyi_divergence((&[2.0], &wide), (&[0.0], &one), 0.5).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn same_seed_same_set() {
        let spec = GeneratorSpec {
            family: Family::Beta { a: 2.0, b: 3.0 },
            n_points: 100,
            seed: 7,
        };
        let a = sample(&spec).unwrap();
        assert_eq!(a, sample(&spec).unwrap());
        assert!(a.points().iter().all(|&x| x > 0.0 && x < 1.0));
        let other = sample(&GeneratorSpec { seed: 8, ..spec }).unwrap();
        assert_ne!(a.points(), other.points());
    }

    #[test]
    fn odd_normal_count() {
        let mut rng = rng_from_seed(1);
        let mut z = [0.0; 3];
        fill_standard_normal(&mut rng, &mut z);
        assert!(z.iter().all(|v| v.is_finite() && *v != 0.0));
    }

    #[test]
    fn rejects_bad_mixture_weights() {
        let comp = GaussianComponent {
            mean: vec![0.0],
            cov: vec![vec![1.0]],
        };
        let fam = Family::GaussianMixture {
            components: vec![comp.clone(), comp],
            weights: vec![0.5, 0.6],
        };
        assert!(sample_family(&fam, 10, 0, "x").is_err());
    }
}
