//! The clustering pipeline and its individual phases.

pub mod assign;
pub mod centers;
pub mod density;
pub mod separation;

use std::time::Duration;

use web_time::Instant;

pub use assign::{assign, Assignment};
pub use centers::{
    decision_values, mutation_point, select_centers, CenterSelection, MutationFallback,
    MutationPoint,
};
pub use density::{local_density, Density};
pub use separation::{separation, Separation};

use crate::sparse::full_pair_count;
use crate::{Dataset, Error, KdTree, Result};

/// Per-point quantities computed before centre selection.
#[derive(Debug, Clone, PartialEq)]
pub struct DpcProfile {
    pub rho: Vec<f64>,
    pub rho_order: Vec<usize>,
    pub delta: Vec<f64>,
    pub nhd: Vec<Option<usize>>,
    pub gamma: Vec<f64>,
    pub gamma_order: Vec<usize>,
}

impl DpcProfile {
    /// Decision values in descending order.
    pub fn sorted_gamma(&self) -> Vec<f64> {
        self.gamma_order.iter().map(|&i| self.gamma[i]).collect()
    }
}

/// Conditions worth surfacing that did not stop the run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// Points whose neighbours all coincide with them (infinite density).
    CoincidentPoints(usize),
    Mutation(MutationFallback),
    /// No candidate passed the pseudo-centre filter.
    EmptyCenterFilter,
    /// The densest point was not a centre.
    DensestReassigned,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    /// Distances evaluated while searching neighbours.
    pub knn_evaluations: u64,
    /// Distances evaluated by separation fallback scans.
    pub separation_evaluations: u64,
    /// Distances evaluated while assigning a non-centre densest point.
    pub assign_evaluations: u64,
    /// Points whose separation came from the neighbour intersection.
    pub intersection_points: usize,
    /// Points whose separation needed a fallback scan.
    pub fallback_points: usize,
    pub n: usize,
}

impl Counters {
    pub fn total_evaluations(&self) -> u64 {
        self.knn_evaluations + self.separation_evaluations + self.assign_evaluations
    }

    pub fn full_pairs(&self) -> u64 {
        full_pair_count(self.n)
    }

    /// Evaluations relative to the full pairwise matrix.
    pub fn ratio(&self) -> f64 {
        let full = self.full_pairs();
        if full == 0 {
            0.0
        } else {
            self.total_evaluations() as f64 / full as f64
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub build: Duration,
    pub knn: Duration,
    pub density: Duration,
    pub separation: Duration,
    pub centers: Duration,
    pub assign: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.build + self.knn + self.density + self.separation + self.centers + self.assign
    }

    /// `(phase name, duration)` in pipeline order.
    pub fn phases(&self) -> [(&'static str, Duration); 6] {
        [
            ("build", self.build),
            ("knn", self.knn),
            ("density", self.density),
            ("separation", self.separation),
            ("centers", self.centers),
            ("assign", self.assign),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    /// Centre point indices; centre `p` carries label `p`.
    pub centers: Vec<usize>,
    pub labels: Vec<usize>,
    pub m_p: usize,
    pub candidate_centers: Vec<usize>,
    pub profile: DpcProfile,
    pub mutation: Option<MutationPoint>,
    pub rho_threshold: f64,
    pub delta_threshold: f64,
    pub warnings: Vec<Warning>,
    pub counters: Counters,
    pub timings: PhaseTimings,
}

impl ClusteringResult {
    pub fn cluster_count(&self) -> usize {
        self.centers.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SktdpcOptions {
    pub k: usize,
    /// Run neighbour queries on the rayon pool (needs the `parallel`
    /// feature). Results are identical either way.
    pub parallel: bool,
}

impl SktdpcOptions {
    pub fn new(k: usize) -> Self {
        Self { k, parallel: true }
    }
}

pub fn run_sktdpc(data: &Dataset, k: usize) -> Result<ClusteringResult> {
    run_sktdpc_with(data, &SktdpcOptions::new(k))
}

pub fn run_sktdpc_with(data: &Dataset, options: &SktdpcOptions) -> Result<ClusteringResult> {
    let n = data.len();
    let k = options.k;
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    let mut timings = PhaseTimings::default();
    let mut warnings = Vec::new();

    let t = Instant::now();
    let tree = KdTree::build(data);
    timings.build = t.elapsed();

    let t = Instant::now();
    let (neighbors, mut cache) = if options.parallel {
        tree.knn_all(k)?
    } else {
        tree.knn_all_sequential(k)?
    };
    timings.knn = t.elapsed();
    let knn_evaluations = cache.evaluations();

    let t = Instant::now();
    let density = local_density(&neighbors)?;
    timings.density = t.elapsed();
    if !density.coincident.is_empty() {
        warnings.push(Warning::CoincidentPoints(density.coincident.len()));
    }

    let t = Instant::now();
    let sep = separation(&density, &neighbors, &mut cache, data);
    timings.separation = t.elapsed();

    let t = Instant::now();
    let (gamma, gamma_order) = decision_values(&density.rho, &sep.delta);
    let profile = DpcProfile {
        rho: density.rho,
        rho_order: density.order,
        delta: sep.delta,
        nhd: sep.nhd,
        gamma,
        gamma_order,
    };
    let mutation = mutation_point(&profile.sorted_gamma());
    if let Some(f) = mutation.fallback {
        warnings.push(Warning::Mutation(f));
    }
    let selection = select_centers(
        &profile.rho,
        &profile.delta,
        &profile.gamma_order,
        mutation.m_p,
    );
    if selection.emptied {
        warnings.push(Warning::EmptyCenterFilter);
    }
    timings.centers = t.elapsed();

    let t = Instant::now();
    let before = cache.evaluations();
    let assignment = assign(
        &profile.rho_order,
        &profile.nhd,
        &selection.centers,
        |i, j| cache.get_or_compute(data, i, j),
    );
    if assignment.densest_reassigned {
        warnings.push(Warning::DensestReassigned);
    }
    let assign_evaluations = cache.evaluations() - before;
    timings.assign = t.elapsed();

    let counters = Counters {
        knn_evaluations,
        separation_evaluations: sep.evaluations,
        assign_evaluations,
        intersection_points: n - sep.fallback.len(),
        fallback_points: sep.fallback.len(),
        n,
    };
    Ok(ClusteringResult {
        centers: selection.centers,
        labels: assignment.labels,
        m_p: mutation.m_p,
        candidate_centers: selection.candidates,
        profile,
        mutation: Some(mutation),
        rho_threshold: selection.rho_threshold,
        delta_threshold: selection.delta_threshold,
        warnings,
        counters,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_take_the_small_input_path() {
        let data = Dataset::from_rows("two", &[vec![0.0, 0.0], vec![1.0, 1.0]], None).unwrap();
        let r = run_sktdpc(&data, 1).unwrap();
        assert_eq!(r.m_p, 2);
        assert!(r
            .warnings
            .contains(&Warning::Mutation(MutationFallback::SmallInput)));
        assert!(!r.centers.is_empty());
        assert_eq!(r.labels.len(), 2);
        assert!(r.counters.total_evaluations() <= 1);
    }

    #[test]
    fn k_must_be_below_n() {
        let data = Dataset::from_rows("two", &[vec![0.0], vec![1.0]], None).unwrap();
        assert!(matches!(
            run_sktdpc(&data, 0),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(
            run_sktdpc(&data, 2),
            Err(Error::KOutOfRange { .. })
        ));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let data = crate::dataset::generate_uniform(400, 3, 5).unwrap();
        let a = run_sktdpc_with(
            &data,
            &SktdpcOptions {
                k: 6,
                parallel: true,
            },
        )
        .unwrap();
        let b = run_sktdpc_with(
            &data,
            &SktdpcOptions {
                k: 6,
                parallel: false,
            },
        )
        .unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.profile, b.profile);
        assert_eq!(a.counters, b.counters);
    }
}
