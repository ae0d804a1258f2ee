//! Relative separation through the neighbourhood/denser-set intersection.
//!
//! For a point `i` let `B(i)` be the points ahead of it in the density order.
//! If any of its k nearest neighbours lies in `B(i)`, the nearest such
//! neighbour is also the nearest point of `B(i)`: every point outside the
//! neighbourhood is at least as far as the k-th neighbour, and the neighbour
//! tie-break by index carries over. Those distances are already cached, so
//! the branch costs no evaluations. Only points without such a neighbour scan
//! `B(i)`, reusing cached distances where possible.

use super::density::Density;
use crate::kdtree::NeighborSet;
use crate::sparse::SparseDistanceMatrix;
use crate::Dataset;

#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub delta: Vec<f64>,
    /// Nearest point of higher density; `None` only for the densest point.
    pub nhd: Vec<Option<usize>>,
    /// Points that needed the fallback scan, in density order. Always starts
    /// with the densest point.
    pub fallback: Vec<usize>,
    /// Distances computed by the fallback scans.
    pub evaluations: u64,
}

pub fn separation(
    density: &Density,
    neighbors: &[NeighborSet],
    cache: &mut SparseDistanceMatrix,
    data: &Dataset,
) -> Separation {
    let n = density.order.len();
    let rank = density.ranks();
    let before = cache.evaluations();
    let mut delta = vec![0.0; n];
    let mut nhd = vec![None; n];
    let mut fallback = Vec::new();

    let top = density.order[0];
    fallback.push(top);
    delta[top] = (0..n)
        .filter(|&j| j != top)
        .map(|j| cache.get_or_compute(data, top, j))
        .fold(0.0, f64::max);

    for (r, &i) in density.order.iter().enumerate().skip(1) {
        // neighbours are sorted by (distance, index): the first one ahead of
        // `i` in density order is the answer
        if let Some(hit) = neighbors[i].neighbors.iter().find(|nb| rank[nb.index] < r) {
            delta[i] = hit.distance;
            nhd[i] = Some(hit.index);
            continue;
        }
        fallback.push(i);
        let mut best = (f64::INFINITY, usize::MAX);
        for &j in &density.order[..r] {
            let d = cache.get_or_compute(data, i, j);
            if d < best.0 || (d == best.0 && j < best.1) {
                best = (d, j);
            }
        }
        delta[i] = best.0;
        nhd[i] = Some(best.1);
    }

    Separation {
        delta,
        nhd,
        fallback,
        evaluations: cache.evaluations() - before,
    }
}
