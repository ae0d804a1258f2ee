//! Full-matrix reference implementations.
//!
//! Nothing here touches the k-d tree or the sparse search: every quantity is
//! read off the complete pairwise distance matrix by direct scans. These are
//! the oracles the accelerated pipeline is checked against, and the
//! classic cut-off-density clustering used for comparison.

use web_time::Instant;

use crate::dpc::{ClusteringResult, Counters, DpcProfile, PhaseTimings, Warning};
use crate::kdtree::{Neighbor, NeighborSet};
use crate::sparse::full_pair_count;
use crate::{Dataset, Error, Result};

/// All pairwise distances, stored as the strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct FullDistanceMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl FullDistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        // row i of the strict upper triangle starts after rows 0..i
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.upper[self.offset(i, j)],
            std::cmp::Ordering::Greater => self.upper[self.offset(j, i)],
        }
    }

    /// Number of stored off-diagonal distances.
    pub fn pair_count(&self) -> usize {
        self.upper.len()
    }

    /// All off-diagonal distances, unsorted.
    pub fn distances(&self) -> &[f64] {
        &self.upper
    }
}

pub fn full_matrix(data: &Dataset) -> FullDistanceMatrix {
    let n = data.len();
    let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            upper.push(data.distance(i, j));
        }
    }
    FullDistanceMatrix { n, upper }
}

/// Exact k nearest neighbours of `i` by scanning its matrix row. Ties on
/// distance go to the lower index.
pub fn brute_knn(m: &FullDistanceMatrix, i: usize, k: usize) -> Result<NeighborSet> {
    let n = m.n();
    if k == 0 || k + 1 > n {
        return Err(Error::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let mut row: Vec<(f64, usize)> = (0..n)
        .filter(|&j| j != i)
        .map(|j| (m.get(i, j), j))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < row.len() {
        row.select_nth_unstable_by(k - 1, cmp);
        row.truncate(k);
    }
    row.sort_unstable_by(cmp);
    Ok(NeighborSet {
        owner: i,
        neighbors: row
            .into_iter()
            .map(|(distance, index)| Neighbor { index, distance })
            .collect(),
    })
}

/// Cut-off distance at which `percent` of all pairs are closer, the usual
/// rule of thumb for choosing `dc`.
pub fn dc_from_percent(m: &FullDistanceMatrix, percent: f64) -> f64 {
    let mut d = m.distances().to_vec();
    if d.is_empty() {
        return 0.0;
    }
    d.sort_unstable_by(f64::total_cmp);
    let pos = ((percent / 100.0) * d.len() as f64).round() as usize;
    d[pos.min(d.len() - 1)]
}

struct Ranked {
    rho_order: Vec<usize>,
    delta: Vec<f64>,
    nhd: Vec<Option<usize>>,
    gamma: Vec<f64>,
    gamma_order: Vec<usize>,
}

/// Separation by definition: nearest point ahead in density order, or the
/// farthest point for the densest one.
fn rank_by_full_scan(m: &FullDistanceMatrix, rho: &[f64]) -> Ranked {
    let n = rho.len();
    let mut rho_order: Vec<usize> = (0..n).collect();
    rho_order.sort_by(|&a, &b| rho[b].total_cmp(&rho[a]).then(a.cmp(&b)));
    let mut delta = vec![0.0; n];
    let mut nhd = vec![None; n];
    for (r, &i) in rho_order.iter().enumerate() {
        if r == 0 {
            delta[i] = (0..n)
                .filter(|&j| j != i)
                .map(|j| m.get(i, j))
                .fold(0.0, f64::max);
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for &j in &rho_order[..r] {
            let d = m.get(i, j);
            let better = match best {
                None => true,
                Some((bd, bj)) => d < bd || (d == bd && j < bj),
            };
            if better {
                best = Some((d, j));
            }
        }
        let (d, j) = best.expect("non-densest point has a denser point");
        delta[i] = d;
        nhd[i] = Some(j);
    }
    let gamma: Vec<f64> = (0..n)
        .map(|i| {
            if rho[i].is_infinite() {
                f64::INFINITY
            } else {
                rho[i] * delta[i]
            }
        })
        .collect();
    let mut gamma_order: Vec<usize> = (0..n).collect();
    gamma_order.sort_by(|&a, &b| gamma[b].total_cmp(&gamma[a]).then(a.cmp(&b)));
    Ranked {
        rho_order,
        delta,
        nhd,
        gamma,
        gamma_order,
    }
}

/// Labels each point with the centre at the end of its link chain.
fn follow_links(
    m: &FullDistanceMatrix,
    nhd: &[Option<usize>],
    centers: &[usize],
) -> (Vec<usize>, bool) {
    let n = nhd.len();
    let mut labels: Vec<Option<usize>> = vec![None; n];
    for (id, &c) in centers.iter().enumerate() {
        labels[c] = Some(id);
    }
    let mut reassigned = false;
    for start in 0..n {
        let mut path = Vec::new();
        let mut cur = start;
        let label = loop {
            if let Some(l) = labels[cur] {
                break l;
            }
            path.push(cur);
            match nhd[cur] {
                Some(next) => cur = next,
                None => {
                    // densest point without centre status: nearest centre
                    reassigned = true;
                    let id = centers
                        .iter()
                        .enumerate()
                        .fold((f64::INFINITY, 0), |best, (id, &c)| {
                            let d = m.get(cur, c);
                            if d < best.0 {
                                (d, id)
                            } else {
                                best
                            }
                        })
                        .1;
                    break id;
                }
            }
        };
        for p in path {
            labels[p] = Some(label);
        }
    }
    (
        labels
            .into_iter()
            .map(|l| l.expect("every point labelled"))
            .collect(),
        reassigned,
    )
}

/// Classic density peaks clustering: density is the number of points closer
/// than `dc`, and the `n_centers` largest decision values become centres.
pub fn dpc_original(data: &Dataset, dc: f64, n_centers: usize) -> Result<ClusteringResult> {
    let n = data.len();
    if dc.is_nan() || dc <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "dc must be positive, got {dc}"
        )));
    }
    if n_centers == 0 || n_centers > n {
        return Err(Error::InvalidParameter(format!(
            "n_centers must be in 1..={n}, got {n_centers}"
        )));
    }
    let start = Instant::now();
    let m = full_matrix(data);
    let rho: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && m.get(i, j) < dc).count() as f64)
        .collect();
    let ranked = rank_by_full_scan(&m, &rho);
    let centers = ranked.gamma_order[..n_centers].to_vec();
    let (labels, reassigned) = follow_links(&m, &ranked.nhd, &centers);
    let mut warnings = Vec::new();
    if reassigned {
        warnings.push(Warning::DensestReassigned);
    }
    Ok(ClusteringResult {
        candidate_centers: centers.clone(),
        centers,
        labels,
        m_p: n_centers,
        profile: DpcProfile {
            rho,
            rho_order: ranked.rho_order,
            delta: ranked.delta,
            nhd: ranked.nhd,
            gamma: ranked.gamma,
            gamma_order: ranked.gamma_order,
        },
        mutation: None,
        rho_threshold: f64::NAN,
        delta_threshold: f64::NAN,
        warnings,
        counters: full_counters(n),
        timings: PhaseTimings {
            density: start.elapsed(),
            ..Default::default()
        },
    })
}

fn full_counters(n: usize) -> Counters {
    Counters {
        knn_evaluations: full_pair_count(n),
        n,
        ..Default::default()
    }
}

/// The mutation-point rule written out term by term. Returns `(m_p, flat or
/// small-input fallback used)`.
fn reference_mutation_point(sorted: &[f64]) -> (usize, Option<crate::dpc::MutationFallback>) {
    use crate::dpc::MutationFallback;
    let n = sorted.len();
    let s = (1..=n).take_while(|r| r * r <= n).last().unwrap_or(0);
    if s < 4 {
        return (2, Some(MutationFallback::SmallInput));
    }
    // 1-based rank access
    let g = |r: usize| sorted[r - 1];
    let mut g_max = f64::NEG_INFINITY;
    let mut g_min = f64::INFINITY;
    for r in 2..=s {
        g_max = g_max.max(g(r));
        g_min = g_min.min(g(r));
    }
    let spread = g_max - g_min;
    if !(spread > 0.0 && spread.is_finite()) {
        return (s - 2, Some(MutationFallback::FlatWindow));
    }
    let mut mu = vec![0.0; s + 1];
    for (i, slot) in mu.iter_mut().enumerate().take(s).skip(2) {
        *slot = g(i) - g(i + 1);
    }
    let mut best = f64::NEG_INFINITY;
    let mut arg = None;
    for i in 2..=s - 2 {
        let xi = mu[i] - mu[i + 1];
        let score = ((i as f64 + 1.0) / i as f64).powi(2) * xi / spread;
        if score >= best {
            best = score;
            arg = Some(i);
        }
    }
    match arg {
        Some(i) => (i, None),
        None => (s - 2, Some(MutationFallback::FlatWindow)),
    }
}

/// The full pipeline evaluated from the complete distance matrix: brute-force
/// neighbours, separation by definition, then centre detection and link
/// assignment. Must agree exactly with [`crate::run_sktdpc`].
pub fn sktdpc_reference(data: &Dataset, k: usize) -> Result<ClusteringResult> {
    let n = data.len();
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    let mut timings = PhaseTimings::default();
    let t = Instant::now();
    let m = full_matrix(data);
    timings.build = t.elapsed();

    let t = Instant::now();
    let neighbors = (0..n)
        .map(|i| brute_knn(&m, i, k))
        .collect::<Result<Vec<_>>>()?;
    timings.knn = t.elapsed();

    let t = Instant::now();
    let mut warnings = Vec::new();
    let rho: Vec<f64> = neighbors
        .iter()
        .map(|s| {
            let sum: f64 = s.neighbors.iter().map(|nb| nb.distance).sum();
            if sum == 0.0 {
                f64::INFINITY
            } else {
                1.0 / sum
            }
        })
        .collect();
    let coincident = rho.iter().filter(|r| r.is_infinite()).count();
    if coincident > 0 {
        warnings.push(Warning::CoincidentPoints(coincident));
    }
    timings.density = t.elapsed();

    let t = Instant::now();
    let ranked = rank_by_full_scan(&m, &rho);
    timings.separation = t.elapsed();

    let t = Instant::now();
    let sorted: Vec<f64> = ranked
        .gamma_order
        .iter()
        .map(|&i| ranked.gamma[i])
        .collect();
    let (m_p, fallback) = reference_mutation_point(&sorted);
    if let Some(f) = fallback {
        warnings.push(Warning::Mutation(f));
    }
    let top = (1..=n).take_while(|r| r * r <= n).last().unwrap_or(1);
    let rho_bar = ranked.gamma_order[..top]
        .iter()
        .map(|&i| rho[i])
        .sum::<f64>()
        / top as f64;
    let delta_bar = ranked.gamma_order[..top]
        .iter()
        .map(|&i| ranked.delta[i])
        .sum::<f64>()
        / top as f64;
    let candidates: Vec<usize> = ranked.gamma_order[..m_p.min(n)].to_vec();
    let mut centers: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&i| rho[i] > rho_bar && ranked.delta[i] > delta_bar)
        .collect();
    if centers.is_empty() {
        warnings.push(Warning::EmptyCenterFilter);
        centers.push(ranked.gamma_order[0]);
    }
    timings.centers = t.elapsed();

    let t = Instant::now();
    let (labels, reassigned) = follow_links(&m, &ranked.nhd, &centers);
    if reassigned {
        warnings.push(Warning::DensestReassigned);
    }
    timings.assign = t.elapsed();

    Ok(ClusteringResult {
        centers,
        labels,
        m_p,
        candidate_centers: candidates,
        profile: DpcProfile {
            rho,
            rho_order: ranked.rho_order,
            delta: ranked.delta,
            nhd: ranked.nhd,
            gamma: ranked.gamma,
            gamma_order: ranked.gamma_order,
        },
        mutation: None,
        rho_threshold: rho_bar,
        delta_threshold: delta_bar,
        warnings,
        counters: full_counters(n),
        timings,
    })
}
