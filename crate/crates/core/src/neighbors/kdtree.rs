use crate::sampleset::SampleSet;

use super::{sq_dist, KBest};

const LEAF_SIZE: usize = 12;

#[derive(Clone, Debug)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        dim: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Static kd-tree over one sample set, used for exact kth-neighbor
/// distance queries.
///
/// Points are copied into tree order so that leaves are contiguous in
/// memory; `ids` maps tree slots back to the original point index.
#[derive(Clone, Debug)]
pub struct KdTree {
    d: usize,
    data: Vec<f64>,
    ids: Vec<usize>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn new(set: &SampleSet) -> Self {
        let d = set.dim();
        let mut ids: Vec<usize> = (0..set.len()).collect();
        let mut nodes = Vec::with_capacity(2 * set.len() / LEAF_SIZE + 1);
        build(set, &mut ids, 0, set.len(), &mut nodes);
        let mut data = Vec::with_capacity(set.points().len());
        for &i in &ids {
            data.extend_from_slice(set.point(i));
        }
        KdTree {
            d,
            data,
            ids,
            nodes,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Squared distance from `query` to its kth nearest point, skipping the
    /// point with original index `exclude`.
    pub(crate) fn kth_sq_dist(&self, query: &[f64], k: usize, exclude: Option<usize>) -> f64 {
        let mut best = KBest::new(k);
        self.search(0, query, exclude, &mut best);
        best.kth()
    }

    fn search(&self, node: usize, query: &[f64], exclude: Option<usize>, best: &mut KBest) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for slot in start..end {
                    if Some(self.ids[slot]) == exclude {
                        continue;
                    }
                    let p = &self.data[slot * self.d..(slot + 1) * self.d];
                    best.offer(sq_dist(query, p));
                }
            }
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = query[dim] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, query, exclude, best);
                if diff * diff < best.worst() {
                    self.search(far, query, exclude, best);
                }
            }
        }
    }
}

fn build(set: &SampleSet, ids: &mut [usize], start: usize, end: usize, nodes: &mut Vec<Node>) -> usize {
    let me = nodes.len();
    if end - start <= LEAF_SIZE {
        nodes.push(Node::Leaf { start, end });
        return me;
    }
    let d = set.dim();
    let slice = &mut ids[start..end];
    let mut dim = 0;
    let mut widest = -1.0;
    for c in 0..d {
        let (lo, hi) = slice.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            let v = set.point(i)[c];
            (lo.min(v), hi.max(v))
        });
        if hi - lo > widest {
            widest = hi - lo;
            dim = c;
        }
    }
    if widest <= 0.0 {
        // all points coincide; splitting cannot separate them
        nodes.push(Node::Leaf { start, end });
        return me;
    }
    let mid = slice.len() / 2;
    slice.select_nth_unstable_by(mid, |&a, &b| {
        set.point(a)[dim].total_cmp(&set.point(b)[dim])
    });
    let value = set.point(slice[mid])[dim];
    nodes.push(Node::Leaf { start, end });
    let left = build(set, ids, start, start + mid, nodes);
    let right = build(set, ids, start + mid, end, nodes);
    nodes[me] = Node::Split {
        dim,
        value,
        left,
        right,
    };
    me
}
