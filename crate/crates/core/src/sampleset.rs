//! Sample sets, labelled collections of them, and the manifest/CSV format
//! they live in on disk.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One group of `n` points in `d` dimensions, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    id: String,
    n: usize,
    d: usize,
    points: Vec<f64>,
}

impl SampleSet {
    /// Builds a set from row-major data. Rejects empty sets and non-finite
    /// coordinates.
    pub fn new(id: impl Into<String>, d: usize, points: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if d == 0 {
            return Err(Error::InvalidParameter(format!("set `{id}` has d=0")));
        }
        if points.len() % d != 0 {
            return Err(Error::Shape(format!(
                "set `{id}`: {} values is not a multiple of d={d}",
                points.len()
            )));
        }
        let n = points.len() / d;
        if n == 0 {
            return Err(Error::TooFewPoints {
                set: id,
                points: 0,
                required: 1,
            });
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                set: id,
                row: pos / d + 1,
                column: pos % d + 1,
            });
        }
        Ok(SampleSet { id, n, d, points })
    }

    pub fn from_rows(id: impl Into<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let id = id.into();
        let d = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                set: id,
                expected: d,
                found: bad.len(),
            });
        }
        SampleSet::new(id, d, rows.concat())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.d)
    }

    /// Same points, new id.
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Applies `f` to every coordinate vector in place.
    pub fn map_points(&self, mut f: impl FnMut(&mut [f64])) -> Result<Self> {
        let mut points = self.points.clone();
        for row in points.chunks_exact_mut(self.d) {
            f(row);
        }
        SampleSet::new(self.id.clone(), self.d, points)
    }
}

/// A per-set label as it appears in the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Number(f64),
    Text(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    #[default]
    Train,
    Test,
}

/// Ordered collection of sample sets sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    sets: Vec<SampleSet>,
    labels: Option<Vec<Label>>,
    partition: Vec<Partition>,
}

impl Dataset {
    pub fn new(
        sets: Vec<SampleSet>,
        labels: Option<Vec<Label>>,
        partition: Option<Vec<Partition>>,
    ) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Dataset("no sample sets".into()));
        }
        let d = sets[0].dim();
        let mut seen = HashSet::new();
        for s in &sets {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    set: s.id().to_string(),
                    expected: d,
                    found: s.dim(),
                });
            }
            if !seen.insert(s.id().to_string()) {
                return Err(Error::Dataset(format!("duplicate set id `{}`", s.id())));
            }
        }
        if let Some(l) = &labels {
            if l.len() != sets.len() {
                return Err(Error::Dataset(format!(
                    "{} labels for {} sets",
                    l.len(),
                    sets.len()
                )));
            }
        }
        let partition = partition.unwrap_or_else(|| vec![Partition::Train; sets.len()]);
        if partition.len() != sets.len() {
            return Err(Error::Dataset("partition length differs from set count".into()));
        }
        Ok(Dataset {
            sets,
            labels,
            partition,
        })
    }

    pub fn sets(&self) -> &[SampleSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.sets[0].dim()
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn partition(&self) -> &[Partition] {
        &self.partition
    }

    pub fn indices_in(&self, part: Partition) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.partition[i] == part).collect()
    }

    /// Labels interpreted as classes `{0..r-1}`.
    ///
    /// Text labels are mapped to class indices in sorted order; numeric
    /// labels must already be the integers `0..r-1` with every class used.
    pub fn class_labels(&self) -> Result<Vec<usize>> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::Dataset("dataset has no labels".into()))?;
        if labels.iter().all(|l| matches!(l, Label::Text(_))) {
            let names: BTreeMap<&str, usize> = labels
                .iter()
                .filter_map(|l| match l {
                    Label::Text(s) => Some(s.as_str()),
                    Label::Number(_) => None,
                })
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect();
            return Ok(labels
                .iter()
                .map(|l| match l {
                    Label::Text(s) => names[s.as_str()],
                    Label::Number(_) => unreachable!(),
                })
                .collect());
        }
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            match l {
                Label::Number(v) if *v >= 0.0 && v.fract() == 0.0 && *v < 1e9 => {
                    out.push(*v as usize)
                }
                other => {
                    return Err(Error::Dataset(format!(
                        "label {other:?} is not a class index"
                    )))
                }
            }
        }
        let r = out.iter().max().map_or(0, |m| m + 1);
        let mut present = vec![false; r];
        for &c in &out {
            present[c] = true;
        }
        if let Some(missing) = present.iter().position(|p| !p) {
            return Err(Error::Dataset(format!(
                "class labels are not contiguous: class {missing} is empty"
            )));
        }
        Ok(out)
    }

    /// Labels interpreted as real-valued regression targets.
    pub fn targets(&self) -> Result<Vec<f64>> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::Dataset("dataset has no labels".into()))?;
        labels
            .iter()
            .map(|l| match l {
                Label::Number(v) if v.is_finite() => Ok(*v),
                other => Err(Error::Dataset(format!("label {other:?} is not a real target"))),
            })
            .collect()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    groups: Vec<ManifestEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestEntry {
    file: String,
    #[serde(default)]
    label: Option<Label>,
    #[serde(default)]
    partition: Option<Partition>,
}

/// Reads a JSON manifest and the CSV groups it references. Relative file
/// paths are resolved against the manifest's directory.
pub fn load_dataset(manifest_path: impl AsRef<Path>) -> Result<Dataset> {
    let manifest_path = manifest_path.as_ref();
    let text = fs::read_to_string(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Manifest {
        path: manifest_path.to_path_buf(),
        message: e.to_string(),
    })?;
    if manifest.groups.is_empty() {
        return Err(Error::Manifest {
            path: manifest_path.to_path_buf(),
            message: "no groups".into(),
        });
    }
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    let labelled = manifest.groups.iter().filter(|g| g.label.is_some()).count();
    if labelled != 0 && labelled != manifest.groups.len() {
        return Err(Error::Manifest {
            path: manifest_path.to_path_buf(),
            message: "labels must be given for every group or for none".into(),
        });
    }

    let mut sets = Vec::with_capacity(manifest.groups.len());
    let mut labels = Vec::new();
    let mut partition = Vec::new();
    for entry in manifest.groups {
        let path: PathBuf = base.join(&entry.file);
        let id = Path::new(&entry.file)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| entry.file.clone());
        sets.push(read_group_csv(&path, &id)?);
        if let Some(l) = entry.label {
            labels.push(l);
        }
        partition.push(entry.partition.unwrap_or_default());
    }
    let labels = (labelled != 0).then_some(labels);
    Dataset::new(sets, labels, Some(partition))
}

/// Reads one headerless CSV of points.
pub fn read_group_csv(path: &Path, id: &str) -> Result<SampleSet> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut d = None;
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv {
            set: id.to_string(),
            row: row + 1,
            message: e.to_string(),
        })?;
        let width = *d.get_or_insert(record.len());
        if record.len() != width {
            return Err(Error::Csv {
                set: id.to_string(),
                row: row + 1,
                message: format!("expected {width} columns, found {}", record.len()),
            });
        }
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Csv {
                set: id.to_string(),
                row: row + 1,
                message: format!("cannot parse `{field}` as a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    set: id.to_string(),
                    row: row + 1,
                    column: col + 1,
                });
            }
            points.push(v);
        }
    }
    SampleSet::new(id, d.unwrap_or(1), points)
}

/// Writes `dataset` as `<dir>/<id>.csv` files plus `<dir>/manifest.json`.
/// Returns the manifest path.
pub fn write_dataset(dataset: &Dataset, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut groups = Vec::with_capacity(dataset.len());
    for (i, set) in dataset.sets().iter().enumerate() {
        let file = format!("{}.csv", set.id());
        write_group_csv(set, &dir.join(&file))?;
        groups.push(ManifestEntry {
            file,
            label: dataset.labels().map(|l| l[i].clone()),
            partition: Some(dataset.partition()[i]),
        });
    }
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&Manifest { groups })?;
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

pub fn write_group_csv(set: &SampleSet, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(set.points().len() * 20);
    for row in set.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            // shortest representation that parses back to the same bits
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// A (train, test) pair of index lists.
pub type Fold = (Vec<usize>, Vec<usize>);

/// Seeded k-fold split of `0..n`, stratified by `strata` when given.
///
/// Members of each stratum are shuffled, the strata are concatenated in
/// stratum order, and the resulting sequence is dealt round-robin to the
/// folds, so fold sizes differ by at most one and every stratum is spread
/// as evenly as possible.
pub fn split_indices(
    n: usize,
    strata: Option<&[usize]>,
    n_folds: usize,
    seed: u64,
) -> Result<Vec<Fold>> {
    if n_folds < 2 {
        return Err(Error::InvalidParameter(format!("n_folds must be >= 2, got {n_folds}")));
    }
    if n_folds > n {
        return Err(Error::Dataset(format!(
            "cannot split {n} sets into {n_folds} folds"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(n);
    match strata {
        Some(s) => {
            if s.len() != n {
                return Err(Error::Shape("strata length differs from set count".into()));
            }
            let r = s.iter().max().map_or(0, |m| m + 1);
            for class in 0..r {
                let mut members: Vec<usize> = (0..n).filter(|&i| s[i] == class).collect();
                if members.is_empty() {
                    continue;
                }
                if members.len() < n_folds {
                    return Err(Error::Dataset(format!(
                        "class {class} has {} sets, fewer than {n_folds} folds",
                        members.len()
                    )));
                }
                members.shuffle(&mut rng);
                order.extend(members);
            }
        }
        None => {
            order.extend(0..n);
            order.shuffle(&mut rng);
        }
    }
    let mut assignment = vec![0usize; n];
    for (pos, &idx) in order.iter().enumerate() {
        assignment[idx] = pos % n_folds;
    }
    Ok((0..n_folds)
        .map(|f| {
            let test: Vec<usize> = (0..n).filter(|&i| assignment[i] == f).collect();
            let train: Vec<usize> = (0..n).filter(|&i| assignment[i] != f).collect();
            (train, test)
        })
        .collect())
}

/// k-fold split of a dataset; stratified when its labels are classes.
pub fn split_folds(dataset: &Dataset, n_folds: usize, seed: u64) -> Result<Vec<Fold>> {
    let classes = dataset.class_labels().ok();
    split_indices(dataset.len(), classes.as_deref(), n_folds, seed)
}
