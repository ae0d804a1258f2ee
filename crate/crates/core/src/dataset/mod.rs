//! Point sets with optional ground truth, plus loading, scaling and synthesis.

mod io;
mod pca;
mod synth;

pub use io::{load, parse, Delimiter, LoadOptions};
pub use pca::{jacobi_eigen, pca_reduce, SymmetricEigen};
pub use synth::{corpus_case, fifteen_blobs, generate_gaussian_blobs, generate_uniform, BlobSpec};

use crate::{Error, Result};

/// `n` points in `dim`-dimensional space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    dim: usize,
    coords: Vec<f64>,
    labels: Option<Vec<usize>>,
    label_names: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from a flat row-major buffer.
    pub fn from_flat(
        name: impl Into<String>,
        dim: usize,
        coords: Vec<f64>,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDataset("dimension must be at least 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::InvalidDataset("dataset has no points".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::InvalidDataset(format!(
                "{} values cannot be split into rows of width {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at point {}, feature {}",
                pos / dim,
                pos % dim
            )));
        }
        let n = coords.len() / dim;
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "{} labels for {n} points",
                    labels.len()
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            dim,
            coords,
            labels,
            label_names: None,
        })
    }

    /// Builds a dataset from one vector per point.
    pub fn from_rows(
        name: impl Into<String>,
        rows: &[Vec<f64>],
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::InvalidDataset(format!(
                "point {i} has {} features, expected {dim}",
                rows[i].len()
            )));
        }
        Self::from_flat(name, dim, rows.concat(), labels)
    }

    pub(crate) fn with_label_names(mut self, names: Option<Vec<String>>) -> Self {
        self.label_names = names;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false for a constructed dataset; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Original label strings, indexed by dense label id, when the data was
    /// loaded from text.
    pub fn label_names(&self) -> Option<&[String]> {
        self.label_names.as_deref()
    }

    /// Number of distinct ground-truth classes, if labels are present.
    pub fn class_count(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().copied().max().map_or(0, |m| m + 1))
    }

    /// Euclidean distance between points `i` and `j`.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(self.point(i), self.point(j))
    }

    /// Copy with every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.coords.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// Copy with ground-truth labels removed.
    pub fn without_labels(&self) -> Self {
        let mut out = self.clone();
        out.labels = None;
        out.label_names = None;
        out
    }
}

/// Euclidean distance. Every distance in the crate goes through this function
/// so that cached and recomputed values are bit-identical.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    None,
    #[default]
    MinMax,
}

/// Rescales features. Min-max maps every column independently onto `[0, 1]`;
/// constant columns become all zeros.
pub fn normalize(data: &Dataset, mode: Normalization) -> Dataset {
    match mode {
        Normalization::None => data.clone(),
        Normalization::MinMax => {
            let dim = data.dim;
            let mut lo = vec![f64::INFINITY; dim];
            let mut hi = vec![f64::NEG_INFINITY; dim];
            for p in data.points() {
                for (h, &v) in p.iter().enumerate() {
                    lo[h] = lo[h].min(v);
                    hi[h] = hi[h].max(v);
                }
            }
            let mut out = data.clone();
            for p in out.coords.chunks_exact_mut(dim) {
                for (h, v) in p.iter_mut().enumerate() {
                    let range = hi[h] - lo[h];
                    *v = if range > 0.0 {
                        (*v - lo[h]) / range
                    } else {
                        0.0
                    };
                }
            }
            out
        }
    }
}
