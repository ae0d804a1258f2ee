//! Symmetric cache of the pairwise distances that were actually evaluated.

use rustc_hash::FxHashMap;

use crate::Dataset;

#[inline]
fn key(i: usize, j: usize) -> u64 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    ((lo as u64) << 32) | hi as u64
}

/// Sparse symmetric distance matrix keyed by unordered point pairs.
///
/// `evaluations` counts every distance the owner had to compute, i.e. every
/// insertion of a previously absent pair. The diagonal is implicit and never
/// stored.
#[derive(Debug, Clone, Default)]
pub struct SparseDistanceMatrix {
    entries: FxHashMap<u64, f64>,
    evaluations: u64,
}

impl SparseDistanceMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            entries: FxHashMap::with_capacity_and_hasher(capacity, Default::default()),
            evaluations: 0,
        }
    }

    /// `Some(0.0)` on the diagonal, `None` for pairs never evaluated.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        if i == j {
            return Some(0.0);
        }
        self.entries.get(&key(i, j)).copied()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i == j || self.entries.contains_key(&key(i, j))
    }

    /// Records an evaluated distance. Returns `true` if the pair was new, in
    /// which case the evaluation counter is incremented. Re-inserting a known
    /// pair keeps the stored value.
    pub fn insert(&mut self, i: usize, j: usize, distance: f64) -> bool {
        if i == j {
            return false;
        }
        match self.entries.entry(key(i, j)) {
            std::collections::hash_map::Entry::Occupied(_) => false,
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(distance);
                self.evaluations += 1;
                true
            }
        }
    }

    /// Cached value if present, otherwise computes, stores and counts it.
    #[inline]
    pub fn get_or_compute(&mut self, data: &Dataset, i: usize, j: usize) -> f64 {
        if let Some(d) = self.get(i, j) {
            return d;
        }
        let d = data.distance(i, j);
        self.insert(i, j, d);
        d
    }

    /// Number of stored off-diagonal pairs.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Stored pairs as `(i, j, distance)` with `i < j`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .map(|(&k, &d)| ((k >> 32) as usize, (k & 0xffff_ffff) as usize, d))
            .collect();
        out.sort_unstable_by_key(|&(i, j, _)| (i, j));
        out
    }

    /// Stored pairs touching point `i`, as `(other, distance)` sorted by `other`.
    pub fn row(&self, i: usize) -> Vec<(usize, f64)> {
        let mut out: Vec<_> = self
            .pairs()
            .into_iter()
            .filter_map(|(a, b, d)| match (a == i, b == i) {
                (true, _) => Some((b, d)),
                (_, true) => Some((a, d)),
                _ => None,
            })
            .collect();
        out.sort_unstable_by_key(|&(j, _)| j);
        out
    }

    /// Fraction of the `n(n-1)/2` off-diagonal pairs that are stored.
    pub fn density(&self, n: usize) -> f64 {
        let full = full_pair_count(n);
        if full == 0 {
            0.0
        } else {
            self.len() as f64 / full as f64
        }
    }
}

pub fn full_pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}
