//! Principal component projection backed by a cyclic Jacobi eigensolver.

use super::Dataset;
use crate::{Error, Result};

/// Eigen-decomposition of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[c]` is the unit eigenvector paired with `values[c]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 100;
const REL_TOL: f64 = 1e-12;

/// Cyclic Jacobi rotations on a row-major `n x n` symmetric matrix.
///
/// Stops once the off-diagonal Frobenius norm falls below `1e-12` times the
/// Frobenius norm of the input. Each eigenvector's largest-magnitude entry is
/// made positive so the output is deterministic.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> SymmetricEigen {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[p * n + q] * a[p * n + q];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off(&a) > REL_TOL * norm {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y * n + y].total_cmp(&a[x * n + x]).then(x.cmp(&y)));
    let values = order.iter().map(|&c| a[c * n + c]).collect();
    let vectors = order
        .iter()
        .map(|&c| {
            let mut col: Vec<f64> = (0..n).map(|r| v[r * n + c]).collect();
            let lead =
                col.iter().enumerate().fold(
                    0,
                    |best, (i, x)| if x.abs() > col[best].abs() { i } else { best },
                );
            if col[lead] < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            col
        })
        .collect();
    SymmetricEigen {
        values,
        vectors,
        sweeps,
    }
}

/// Projects mean-centred data onto the `target_dim` leading principal axes of
/// the sample covariance matrix. Labels are kept.
pub fn pca_reduce(data: &Dataset, target_dim: usize) -> Result<Dataset> {
    let dim = data.dim();
    if target_dim == 0 || target_dim > dim {
        return Err(Error::DimensionOutOfRange {
            target: target_dim,
            dim,
        });
    }
    let n = data.len();
    let mut mean = vec![0.0; dim];
    for p in data.points() {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
    let mut cov = vec![0.0; dim * dim];
    for p in data.points() {
        for r in 0..dim {
            let dr = p[r] - mean[r];
            for c in r..dim {
                cov[r * dim + c] += dr * (p[c] - mean[c]);
            }
        }
    }
    for r in 0..dim {
        for c in r..dim {
            cov[r * dim + c] /= denom;
            cov[c * dim + r] = cov[r * dim + c];
        }
    }

    let eig = jacobi_eigen(&cov, dim);
    let axes = &eig.vectors[..target_dim];
    let mut coords = Vec::with_capacity(n * target_dim);
    for p in data.points() {
        for axis in axes {
            coords.push(
                p.iter()
                    .zip(&mean)
                    .zip(axis)
                    .map(|((x, m), a)| (x - m) * a)
                    .sum(),
            );
        }
    }
    let labels = data.labels().map(<[usize]>::to_vec);
    let out = Dataset::from_flat(
        format!("{}-pca{target_dim}", data.name()),
        target_dim,
        coords,
        labels,
    )?;
    Ok(out.with_label_names(data.label_names().map(<[String]>::to_vec)))
}
