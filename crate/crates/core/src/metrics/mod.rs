//! External clustering indices computed from a contingency table.
//!
//! All entropies use the natural logarithm. When an index's denominator
//! vanishes (for example both labelings put everything in one cluster) the
//! index is defined as 1 if the two partitions are identical and 0 otherwise;
//! [`Scores::degenerate`] records when that happened.

mod expected;

use std::collections::HashMap;
use std::fmt;

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::{Error, Result};

pub use expected::expected_mutual_information;

/// Co-occurrence counts: rows are true classes, columns predicted clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
}

impl ContingencyTable {
    /// Builds a table from row-major counts.
    pub fn from_counts(rows: usize, cols: usize, counts: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 || counts.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "{} counts do not form a {rows}x{cols} table",
                counts.len()
            )));
        }
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::Empty("contingency table has no observations".into()));
        }
        Ok(Self { rows, cols, counts })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut counts = Vec::with_capacity(self.counts.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                counts.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            counts,
        }
    }

    /// Non-empty rows and columns each hold exactly one non-zero cell, i.e.
    /// the two labelings are the same partition.
    pub fn is_identity_partition(&self) -> bool {
        let nonzero_row = |i: usize| (0..self.cols).filter(|&j| self.get(i, j) > 0).count();
        let nonzero_col = |j: usize| (0..self.rows).filter(|&i| self.get(i, j) > 0).count();
        (0..self.rows).all(|i| nonzero_row(i) <= 1) && (0..self.cols).all(|j| nonzero_col(j) <= 1)
    }

    fn cells(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.iter().copied()
    }
}

/// Cross-tabulates two labelings. Label values need not be dense; rows and
/// columns follow ascending label order.
pub fn contingency(truth: &[usize], pred: &[usize]) -> Result<ContingencyTable> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch {
            truth: truth.len(),
            pred: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::Empty("no labels to compare".into()));
    }
    let index = |labels: &[usize]| {
        let mut distinct: Vec<usize> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let map: HashMap<usize, usize> =
            distinct.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        (distinct.len(), map)
    };
    let (rows, row_of) = index(truth);
    let (cols, col_of) = index(pred);
    let mut counts = vec![0u64; rows * cols];
    for (t, p) in truth.iter().zip(pred) {
        counts[row_of[t] * cols + col_of[p]] += 1;
    }
    Ok(ContingencyTable { rows, cols, counts })
}

fn pairs(x: u64) -> f64 {
    (x as f64) * (x.saturating_sub(1) as f64) / 2.0
}

fn entropy(sums: &[u64], n: f64) -> f64 {
    sums.iter()
        .filter(|&&a| a > 0)
        .map(|&a| {
            let p = a as f64 / n;
            -p * p.ln()
        })
        .sum()
}

fn degenerate_value(t: &ContingencyTable) -> f64 {
    if t.is_identity_partition() {
        1.0
    } else {
        0.0
    }
}

/// Best one-to-one matching of clusters to classes, as a fraction of points.
pub fn acc(t: &ContingencyTable) -> f64 {
    let size = t.rows.max(t.cols);
    let mut weights = vec![0i64; size * size];
    for i in 0..t.rows {
        for j in 0..t.cols {
            weights[i * size + j] = t.get(i, j) as i64;
        }
    }
    let matrix = Matrix::from_vec(size, size, weights).expect("square weight matrix");
    let (matched, _) = kuhn_munkres(&matrix);
    matched as f64 / t.total() as f64
}

fn ari_raw(t: &ContingencyTable) -> Option<f64> {
    let n = t.total();
    let index: f64 = t.cells().map(pairs).sum();
    let sum_a: f64 = t.row_sums().into_iter().map(pairs).sum();
    let sum_b: f64 = t.col_sums().into_iter().map(pairs).sum();
    let expected = sum_a * sum_b / pairs(n);
    let max = 0.5 * (sum_a + sum_b);
    let denom = max - expected;
    (denom != 0.0 && expected.is_finite()).then(|| (index - expected) / denom)
}

pub fn ari(t: &ContingencyTable) -> f64 {
    ari_raw(t).unwrap_or_else(|| degenerate_value(t))
}

pub fn mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.total() as f64;
    let a = t.row_sums();
    let b = t.col_sums();
    let mut mi = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let nij = t.get(i, j);
            if nij > 0 {
                let nij = nij as f64;
                mi += nij / n * (n * nij / (ai as f64 * bj as f64)).ln();
            }
        }
    }
    mi.max(0.0)
}

fn nmi_raw(t: &ContingencyTable) -> Option<f64> {
    let n = t.total() as f64;
    let hu = entropy(&t.row_sums(), n);
    let hv = entropy(&t.col_sums(), n);
    let denom = (hu * hv).sqrt();
    (denom > 0.0).then(|| (mutual_information(t) / denom).min(1.0))
}

pub fn nmi(t: &ContingencyTable) -> f64 {
    nmi_raw(t).unwrap_or_else(|| degenerate_value(t))
}

fn ami_raw(t: &ContingencyTable) -> Option<f64> {
    let n = t.total() as f64;
    let a = t.row_sums();
    let b = t.col_sums();
    let mean_h = 0.5 * (entropy(&a, n) + entropy(&b, n));
    let emi = expected_mutual_information(&a, &b);
    let denom = mean_h - emi;
    // round-off leaves a residue of a few ulps when the only possible table
    // is the observed one
    (denom.abs() > 1e-12 * mean_h.max(1.0)).then(|| (mutual_information(t) - emi) / denom)
}

pub fn ami(t: &ContingencyTable) -> f64 {
    ami_raw(t).unwrap_or_else(|| degenerate_value(t))
}

fn fmi_raw(t: &ContingencyTable) -> Option<f64> {
    let index: f64 = t.cells().map(pairs).sum();
    let sum_a: f64 = t.row_sums().into_iter().map(pairs).sum();
    let sum_b: f64 = t.col_sums().into_iter().map(pairs).sum();
    let denom = (sum_a * sum_b).sqrt();
    (denom > 0.0).then(|| index / denom)
}

pub fn fmi(t: &ContingencyTable) -> f64 {
    fmi_raw(t).unwrap_or_else(|| degenerate_value(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Index {
    Acc,
    Ami,
    Ari,
    Nmi,
    Fmi,
}

impl Index {
    pub const ALL: [Index; 5] = [Index::Acc, Index::Ami, Index::Ari, Index::Nmi, Index::Fmi];

    pub fn name(self) -> &'static str {
        match self {
            Index::Acc => "acc",
            Index::Ami => "ami",
            Index::Ari => "ari",
            Index::Nmi => "nmi",
            Index::Fmi => "fmi",
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All five indices for one labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct Scores {
    pub acc: f64,
    pub ami: f64,
    pub ari: f64,
    pub nmi: f64,
    pub fmi: f64,
    /// Indices whose denominator vanished and took the 1/0 convention.
    pub degenerate: Vec<Index>,
}

impl Scores {
    pub fn get(&self, index: Index) -> f64 {
        match index {
            Index::Acc => self.acc,
            Index::Ami => self.ami,
            Index::Ari => self.ari,
            Index::Nmi => self.nmi,
            Index::Fmi => self.fmi,
        }
    }
}

pub fn scores(t: &ContingencyTable) -> Scores {
    let mut degenerate = Vec::new();
    let mut resolve = |index: Index, raw: Option<f64>| {
        raw.unwrap_or_else(|| {
            degenerate.push(index);
            degenerate_value(t)
        })
    };
    let ami = resolve(Index::Ami, ami_raw(t));
    let ari = resolve(Index::Ari, ari_raw(t));
    let nmi = resolve(Index::Nmi, nmi_raw(t));
    let fmi = resolve(Index::Fmi, fmi_raw(t));
    Scores {
        acc: acc(t),
        ami,
        ari,
        nmi,
        fmi,
        degenerate,
    }
}

/// Convenience wrapper: contingency table plus all indices.
pub fn evaluate(truth: &[usize], pred: &[usize]) -> Result<Scores> {
    Ok(scores(&contingency(truth, pred)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(truth: &[usize], pred: &[usize]) -> ContingencyTable {
        contingency(truth, pred).unwrap()
    }

    #[test]
    fn contingency_examples() {
        let t = table(&[0, 0, 1, 1], &[1, 1, 0, 0]);
        assert_eq!(
            (t.get(0, 0), t.get(0, 1), t.get(1, 0), t.get(1, 1)),
            (0, 2, 2, 0)
        );
        let t = table(&[0, 0, 1, 1], &[0, 1, 0, 1]);
        assert_eq!(t.cells().collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        let t = table(&[4, 9, 9], &[4, 9, 9]);
        assert_eq!(t.cells().collect::<Vec<_>>(), vec![1, 0, 0, 2]);
        assert!(t.is_identity_partition());
    }

    #[test]
    fn contingency_errors() {
        assert!(matches!(
            contingency(&[0, 1], &[0]),
            Err(Error::LengthMismatch { truth: 2, pred: 1 })
        ));
        assert!(contingency(&[], &[]).is_err());
    }

    #[test]
    fn identical_partitions_score_one() {
        let s = evaluate(&[0, 0, 1, 1, 2], &[5, 5, 3, 3, 7]).unwrap();
        for index in Index::ALL {
            assert!(
                (s.get(index) - 1.0).abs() < 1e-12,
                "{index}: {}",
                s.get(index)
            );
        }
        assert!(s.degenerate.is_empty());
    }

    #[test]
    fn crossed_pairs_give_minus_half() {
        let t = table(&[0, 0, 1, 1], &[0, 1, 0, 1]);
        assert!((ari(&t) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn acc_two_by_two() {
        let t = ContingencyTable::from_counts(2, 2, vec![2, 1, 1, 2]).unwrap();
        assert!((acc(&t) - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn acc_rectangular_leaves_extra_clusters_unmatched() {
        // three clusters, two classes: the best two columns are matched
        let t = table(&[0, 0, 0, 1, 1, 1], &[0, 0, 1, 2, 2, 2]);
        assert!((acc(&t) - 5.0 / 6.0).abs() < 1e-15);
        assert!((acc(&t.transpose()) - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn single_cluster_on_both_sides() {
        let s = evaluate(&[3, 3, 3], &[1, 1, 1]).unwrap();
        assert_eq!((s.ari, s.nmi, s.ami, s.fmi), (1.0, 1.0, 1.0, 1.0));
        assert!(s.degenerate.contains(&Index::Nmi));
    }

    #[test]
    fn singletons_against_one_cluster() {
        let s = evaluate(&[0, 0, 0, 0], &[0, 1, 2, 3]).unwrap();
        assert_eq!(s.nmi, 0.0);
        assert_eq!(s.fmi, 0.0);
        assert_eq!(s.acc, 0.25);
        assert!(s.degenerate.contains(&Index::Fmi));
    }

    #[test]
    fn all_singletons_both_sides_are_identical() {
        let s = evaluate(&[0, 1, 2, 3], &[3, 2, 1, 0]).unwrap();
        assert_eq!(s.ami, 1.0);
        assert_eq!(s.fmi, 1.0);
        assert_eq!(s.ari, 1.0);
    }
}
