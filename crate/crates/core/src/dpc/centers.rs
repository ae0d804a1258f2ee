//! Decision values and automatic centre selection.

use super::density::descending_order;

/// `gamma[i] = rho[i] * delta[i]` and the descending order of `gamma`.
///
/// An infinite density yields an infinite decision value even when the
/// separation is zero.
pub fn decision_values(rho: &[f64], delta: &[f64]) -> (Vec<f64>, Vec<usize>) {
    assert_eq!(rho.len(), delta.len(), "rho and delta differ in length");
    let gamma: Vec<f64> = rho
        .iter()
        .zip(delta)
        .map(|(&r, &d)| {
            if r.is_infinite() {
                f64::INFINITY
            } else {
                r * d
            }
        })
        .collect();
    let order = descending_order(&gamma);
    (gamma, order)
}

/// Why the mutation point did not come from a regular score maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationFallback {
    /// Fewer than 16 points: the scoring window is empty.
    SmallInput,
    /// All decision values in the window are equal (or not finite).
    FlatWindow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MutationPoint {
    /// 1-based rank in the sorted decision values; candidates are ranks
    /// `1..=m_p`.
    pub m_p: usize,
    /// `floor(sqrt(n))`, the last rank inspected.
    pub window_end: usize,
    /// `(rank, score)` for every scored rank.
    pub scores: Vec<(usize, f64)>,
    pub fallback: Option<MutationFallback>,
}

pub(crate) fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Locates the mutation point in the descending decision values `sorted`
/// (`sorted[0]` is rank 1).
///
/// With `s = floor(sqrt(n))`, first differences `mu_i = g_i - g_{i+1}` and
/// second differences `xi_i = mu_i - mu_{i+1}` are taken over ranks
/// `2..=s`. Rank `i` in `2..=s-2` scores `((i+1)/i)^2 * xi_i / (g_max - g_min)`
/// with the extremes taken over ranks `2..=s`; the largest best-scoring rank
/// wins.
pub fn mutation_point(sorted: &[f64]) -> MutationPoint {
    let n = sorted.len();
    let s = isqrt(n);
    if s < 4 {
        return MutationPoint {
            m_p: 2,
            window_end: s,
            scores: Vec::new(),
            fallback: Some(MutationFallback::SmallInput),
        };
    }
    let g = |rank: usize| sorted[rank - 1];
    let window = &sorted[1..s];
    let g_max = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let g_min = window.iter().copied().fold(f64::INFINITY, f64::min);
    let range = g_max - g_min;
    let flat = MutationPoint {
        m_p: s - 2,
        window_end: s,
        scores: Vec::new(),
        fallback: Some(MutationFallback::FlatWindow),
    };
    if !(range.is_finite() && range > 0.0) {
        return flat;
    }

    let mu = |i: usize| g(i) - g(i + 1);
    let scores: Vec<(usize, f64)> = (2..=s - 2)
        .map(|i| {
            let xi = mu(i) - mu(i + 1);
            let w = (i + 1) as f64 / i as f64;
            (i, w * w * xi / range)
        })
        .collect();
    let best = scores
        .iter()
        .map(|&(_, v)| v)
        .filter(|v| !v.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    match scores.iter().rev().find(|&&(_, v)| v == best) {
        Some(&(m_p, _)) => MutationPoint {
            m_p,
            window_end: s,
            scores,
            fallback: None,
        },
        None => flat,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterSelection {
    /// Points at decision-value ranks `1..=m_p`.
    pub candidates: Vec<usize>,
    /// Candidates above both thresholds, in decision-value order.
    pub centers: Vec<usize>,
    pub rho_threshold: f64,
    pub delta_threshold: f64,
    /// The filter rejected every candidate and the rank-1 point was kept.
    pub emptied: bool,
}

/// Drops pseudo-centres: a candidate survives only if both its density and
/// separation exceed their means over the top `floor(sqrt(n))` points by
/// decision value.
pub fn select_centers(
    rho: &[f64],
    delta: &[f64],
    gamma_order: &[usize],
    m_p: usize,
) -> CenterSelection {
    let n = gamma_order.len();
    let top = isqrt(n).max(1);
    let mean = |v: &[f64]| gamma_order[..top].iter().map(|&i| v[i]).sum::<f64>() / top as f64;
    let rho_threshold = mean(rho);
    let delta_threshold = mean(delta);
    let candidates: Vec<usize> = gamma_order[..m_p.clamp(1, n)].to_vec();
    let mut centers: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&i| rho[i] > rho_threshold && delta[i] > delta_threshold)
        .collect();
    let emptied = centers.is_empty();
    if emptied {
        centers.push(gamma_order[0]);
    }
    CenterSelection {
        candidates,
        centers,
        rho_threshold,
        delta_threshold,
        emptied,
    }
}
