//! K-d tree over a [`Dataset`] with exact k-nearest-neighbour queries.
//!
//! Every internal node stores one point: the lower median of its region along
//! the dimension of largest variance. The remaining points of the region go
//! left when their coordinate is `<=` the median value and right otherwise.
//! A region of one point is a leaf.
//!
//! Queries are exact under a total order on candidates: distance first, then
//! point index. Every distance evaluated during a query is reported to a
//! [`DistanceSource`], which is how the sparse distance matrix gets filled.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use crate::sparse::SparseDistanceMatrix;
use crate::{Dataset, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub dim: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub point: usize,
    /// `None` for leaves.
    pub split: Option<Split>,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// The `k` nearest neighbours of `owner`, ascending by `(distance, index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet {
    pub owner: usize,
    pub neighbors: Vec<Neighbor>,
}

impl NeighborSet {
    /// Distance to the k-th neighbour.
    pub fn radius(&self) -> f64 {
        self.neighbors.last().map_or(0.0, |n| n.distance)
    }

    pub fn k(&self) -> usize {
        self.neighbors.len()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.neighbors.iter().map(|n| n.index)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.neighbors.iter().any(|n| n.index == index)
    }
}

/// Where a query obtains distances from, and where it reports them.
pub trait DistanceSource {
    fn distance(&mut self, data: &Dataset, i: usize, j: usize) -> f64;
}

impl DistanceSource for SparseDistanceMatrix {
    #[inline]
    fn distance(&mut self, data: &Dataset, i: usize, j: usize) -> f64 {
        self.get_or_compute(data, i, j)
    }
}

/// Computes every distance and keeps a log of `(other, distance)` pairs.
#[derive(Debug, Default)]
pub struct DistanceLog(pub Vec<(usize, f64)>);

impl DistanceSource for DistanceLog {
    #[inline]
    fn distance(&mut self, data: &Dataset, i: usize, j: usize) -> f64 {
        let d = data.distance(i, j);
        self.0.push((j, d));
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryOptions {
    /// Skip subtrees whose splitting plane is farther than the current k-th
    /// best distance. Turning this off visits every node.
    pub prune: bool,
}

impl Default for QueryOptions {
    fn default() -> Self {
        Self { prune: true }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    distance: f64,
    index: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.index.cmp(&other.index))
    }
}

#[derive(Debug, Clone)]
pub struct KdTree<'a> {
    data: &'a Dataset,
    nodes: Vec<Node>,
}

/// Parent node id and whether the child hangs on its left.
type ParentLink = (usize, bool);

impl<'a> KdTree<'a> {
    pub fn build(data: &'a Dataset) -> Self {
        let n = data.len();
        let mut nodes: Vec<Node> = Vec::with_capacity(n);
        // (points of the region, parent node, is left child)
        let mut stack: Vec<(Vec<usize>, Option<ParentLink>)> = vec![((0..n).collect(), None)];
        while let Some((mut region, parent)) = stack.pop() {
            let id = nodes.len();
            if let Some((p, left)) = parent {
                if left {
                    nodes[p].left = Some(id);
                } else {
                    nodes[p].right = Some(id);
                }
            }
            if region.len() == 1 {
                nodes.push(Node {
                    point: region[0],
                    split: None,
                    left: None,
                    right: None,
                });
                continue;
            }
            let dim = max_variance_dim(data, &region);
            region.sort_unstable_by(|&a, &b| {
                data.point(a)[dim]
                    .total_cmp(&data.point(b)[dim])
                    .then(a.cmp(&b))
            });
            let pivot = (region.len() - 1) / 2;
            let point = region[pivot];
            let value = data.point(point)[dim];
            let (left, right): (Vec<usize>, Vec<usize>) = region
                .iter()
                .enumerate()
                .filter(|&(pos, _)| pos != pivot)
                .map(|(_, &i)| i)
                .partition(|&i| data.point(i)[dim] <= value);
            nodes.push(Node {
                point,
                split: Some(Split { dim, value }),
                left: None,
                right: None,
            });
            if !right.is_empty() {
                stack.push((right, Some((id, false))));
            }
            if !left.is_empty() {
                stack.push((left, Some((id, true))));
            }
        }
        Self { data, nodes }
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(0usize, 1usize)];
        while let Some((id, d)) = stack.pop() {
            best = best.max(d);
            let node = &self.nodes[id];
            stack.extend(node.left.iter().chain(&node.right).map(|&c| (c, d + 1)));
        }
        best
    }

    /// Indented text rendering, one node per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(0usize, 0usize, "root")];
        while let Some((id, depth, side)) = stack.pop() {
            let node = &self.nodes[id];
            let _ = write!(
                out,
                "{:indent$}{side} #{}",
                "",
                node.point,
                indent = depth * 2
            );
            if let Some(s) = node.split {
                let _ = write!(out, " x[{}] <= {:?}", s.dim, s.value);
            }
            out.push('\n');
            if let Some(r) = node.right {
                stack.push((r, depth + 1, "R"));
            }
            if let Some(l) = node.left {
                stack.push((l, depth + 1, "L"));
            }
        }
        out
    }

    fn check_k(&self, k: usize) -> Result<()> {
        let max = self.data.len().saturating_sub(1);
        if k == 0 || k > max {
            return Err(Error::KOutOfRange { k, max });
        }
        Ok(())
    }

    /// Exact k nearest neighbours of `target` (itself excluded). Distances are
    /// read from and recorded into `cache`.
    pub fn knn_query(
        &self,
        target: usize,
        k: usize,
        cache: &mut SparseDistanceMatrix,
    ) -> Result<NeighborSet> {
        self.knn_query_with(target, k, QueryOptions::default(), cache)
    }

    pub fn knn_query_with<S: DistanceSource>(
        &self,
        target: usize,
        k: usize,
        options: QueryOptions,
        source: &mut S,
    ) -> Result<NeighborSet> {
        self.check_k(k)?;
        if target >= self.data.len() {
            return Err(Error::IndexOutOfRange {
                index: target,
                n: self.data.len(),
            });
        }
        let query = self.data.point(target);
        let mut best: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        // (node, distance from the query to the plane that separated it)
        let mut stack: Vec<(usize, f64)> = vec![(0, 0.0)];
        while let Some((id, bound)) = stack.pop() {
            // strict comparison: a point exactly at the k-th distance can
            // still win on the index tie-break
            if options.prune
                && best.len() == k
                && bound > best.peek().map_or(f64::INFINITY, |c| c.distance)
            {
                continue;
            }
            let node = &self.nodes[id];
            if node.point != target {
                let cand = Candidate {
                    distance: source.distance(self.data, target, node.point),
                    index: node.point,
                };
                if best.len() < k {
                    best.push(cand);
                } else if cand < *best.peek().expect("heap is full") {
                    best.pop();
                    best.push(cand);
                }
            }
            let Some(split) = node.split else { continue };
            let diff = query[split.dim] - split.value;
            let (near, far) = if diff <= 0.0 {
                (node.left, node.right)
            } else {
                (node.right, node.left)
            };
            if let Some(f) = far {
                stack.push((f, bound.max(diff.abs())));
            }
            if let Some(nr) = near {
                stack.push((nr, bound));
            }
        }
        let neighbors = best
            .into_sorted_vec()
            .into_iter()
            .map(|c| Neighbor {
                index: c.index,
                distance: c.distance,
            })
            .collect();
        Ok(NeighborSet {
            owner: target,
            neighbors,
        })
    }

    /// Neighbour sets for every point, plus the sparse matrix of every
    /// distance evaluated along the way. Queries run in parallel when the
    /// `parallel` feature is enabled; the output does not depend on it.
    pub fn knn_all(&self, k: usize) -> Result<(Vec<NeighborSet>, SparseDistanceMatrix)> {
        self.check_k(k)?;
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            let logged: Vec<(NeighborSet, DistanceLog)> = (0..self.data.len())
                .into_par_iter()
                .map(|i| {
                    let mut log = DistanceLog::default();
                    let set = self
                        .knn_query_with(i, k, QueryOptions::default(), &mut log)
                        .expect("k and index validated");
                    (set, log)
                })
                .collect();
            Ok(merge_logs(self.data.len(), k, logged))
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.knn_all_sequential(k)
        }
    }

    /// Single-threaded [`KdTree::knn_all`] that consults the cache before
    /// every distance computation.
    pub fn knn_all_sequential(&self, k: usize) -> Result<(Vec<NeighborSet>, SparseDistanceMatrix)> {
        self.check_k(k)?;
        let n = self.data.len();
        let mut cache = SparseDistanceMatrix::with_capacity(n * (k + 8));
        let sets = (0..n)
            .map(|i| self.knn_query(i, k, &mut cache))
            .collect::<Result<Vec<_>>>()?;
        Ok((sets, cache))
    }
}

#[cfg(feature = "parallel")]
fn merge_logs(
    n: usize,
    k: usize,
    logged: Vec<(NeighborSet, DistanceLog)>,
) -> (Vec<NeighborSet>, SparseDistanceMatrix) {
    let mut cache = SparseDistanceMatrix::with_capacity(n * (k + 8));
    let mut sets = Vec::with_capacity(n);
    for (set, log) in logged {
        for (j, d) in log.0 {
            cache.insert(set.owner, j, d);
        }
        sets.push(set);
    }
    (sets, cache)
}

/// Split dimension for a region: largest population variance, lowest index on
/// ties.
fn max_variance_dim(data: &Dataset, region: &[usize]) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (h, var) in region_variances(data, region).into_iter().enumerate() {
        if var > best.1 {
            best = (h, var);
        }
    }
    best.0
}

/// Dimension variances of a point subset, exposed for invariant checks.
pub fn region_variances(data: &Dataset, region: &[usize]) -> Vec<f64> {
    let count = region.len() as f64;
    (0..data.dim())
        .map(|h| {
            let mean = region.iter().map(|&i| data.point(i)[h]).sum::<f64>() / count;
            region
                .iter()
                .map(|&i| {
                    let d = data.point(i)[h] - mean;
                    d * d
                })
                .sum::<f64>()
                / count
        })
        .collect()
}
