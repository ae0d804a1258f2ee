//! Seeded synthetic fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::Dataset;
use crate::{Error, Result};

/// Isotropic Gaussian blobs.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub centers: Vec<Vec<f64>>,
    /// Standard deviation per blob; a single value applies to every blob.
    pub spreads: Vec<f64>,
    pub points_per_cluster: usize,
    pub seed: u64,
}

/// Samples `points_per_cluster` points around each centre, blob by blob.
/// Labels are the generating blob index.
pub fn generate_gaussian_blobs(spec: &BlobSpec) -> Result<Dataset> {
    let dim = spec.centers.first().map_or(0, Vec::len);
    if dim == 0 {
        return Err(Error::InvalidParameter(
            "at least one non-empty centre is required".into(),
        ));
    }
    if spec.centers.iter().any(|c| c.len() != dim) {
        return Err(Error::InvalidParameter(
            "centres differ in dimension".into(),
        ));
    }
    if spec.spreads.len() != 1 && spec.spreads.len() != spec.centers.len() {
        return Err(Error::InvalidParameter(format!(
            "{} spreads for {} centres",
            spec.spreads.len(),
            spec.centers.len()
        )));
    }
    if spec.spreads.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::InvalidParameter("spread must be positive".into()));
    }
    if spec.points_per_cluster == 0 {
        return Err(Error::InvalidParameter(
            "points_per_cluster must be positive".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coords = Vec::with_capacity(spec.centers.len() * spec.points_per_cluster * dim);
    let mut labels = Vec::with_capacity(spec.centers.len() * spec.points_per_cluster);
    for (c, center) in spec.centers.iter().enumerate() {
        let spread = spec.spreads[c.min(spec.spreads.len() - 1)];
        let noise = Normal::new(0.0, spread).expect("validated spread");
        for _ in 0..spec.points_per_cluster {
            coords.extend(center.iter().map(|m| m + noise.sample(&mut rng)));
            labels.push(c);
        }
    }
    Dataset::from_flat(
        format!("blobs-{}x{}", spec.centers.len(), spec.points_per_cluster),
        dim,
        coords,
        Some(labels),
    )
}

/// `n` points uniform on the unit hypercube, unlabeled.
pub fn generate_uniform(n: usize, dim: usize, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
    Dataset::from_flat(format!("uniform-{n}x{dim}"), dim, coords, None)
}

/// One member of the seeded random-blob corpus used for oracle comparisons:
/// 20..=500 points in 2..=4 dimensions from 2..=5 blobs of random spread,
/// plus a neighbourhood size in 3..=10. Every fourth case rounds coordinates
/// to one decimal so exact ties and duplicates occur.
pub fn corpus_case(seed: u64) -> (Dataset, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
    let clusters = rng.gen_range(2..=5);
    let dim = rng.gen_range(2..=4);
    let n = rng.gen_range(20..=500);
    let k = rng.gen_range(3..=10);
    let centers: Vec<Vec<f64>> = (0..clusters)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..10.0)).collect())
        .collect();
    let spreads: Vec<f64> = (0..clusters).map(|_| rng.gen_range(0.3..1.5)).collect();
    let mut coords = Vec::with_capacity(n * dim);
    let mut labels = Vec::with_capacity(n);
    let round = seed % 4 == 0;
    for i in 0..n {
        let c = i % clusters;
        let noise = Normal::new(0.0, spreads[c]).expect("positive spread");
        for m in &centers[c] {
            let v = m + noise.sample(&mut rng);
            coords.push(if round { (v * 10.0).round() / 10.0 } else { v });
        }
        labels.push(c);
    }
    let data = Dataset::from_flat(format!("corpus-{seed}"), dim, coords, Some(labels))
        .expect("finite generated coordinates");
    (data, k)
}

/// `n` points in fifteen 2-D Gaussian blobs on a jittered 5x3 grid, sizes as
/// equal as possible. Used for the timing and evaluation-count comparisons.
pub fn fifteen_blobs(n: usize, seed: u64) -> Result<Dataset> {
    if n < 15 {
        return Err(Error::InvalidParameter(format!(
            "need at least 15 points, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<(f64, f64)> = (0..15)
        .map(|c| {
            let (gx, gy) = ((c % 5) as f64, (c / 5) as f64);
            (
                gx * 10.0 + rng.gen_range(-1.5..1.5),
                gy * 10.0 + rng.gen_range(-1.5..1.5),
            )
        })
        .collect();
    let noise = Normal::new(0.0, 1.2).expect("positive spread");
    let mut coords = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    for (c, &(cx, cy)) in centers.iter().enumerate() {
        let size = n / 15 + usize::from(c < n % 15);
        for _ in 0..size {
            coords.push(cx + noise.sample(&mut rng));
            coords.push(cy + noise.sample(&mut rng));
            labels.push(c);
        }
    }
    Dataset::from_flat(format!("fifteen-blobs-{n}"), 2, coords, Some(labels))
}
