//! Feature ranking by coefficient row norms.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::norms::row_l2_norms;

/// Features ordered by descending `‖xⁱ‖₂`, ties broken by ascending index.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    entries: Vec<(usize, f64)>,
}

impl FeatureRanking {
    /// `(feature index, score)` pairs in rank order.
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn indices(&self) -> Vec<usize> {
        self.entries.iter().map(|&(i, _)| i).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Ranks the rows of `x`, leaving out `bias_row`.
pub fn rank_features(x: &DenseMatrix, bias_row: Option<usize>) -> FeatureRanking {
    let mut entries: Vec<(usize, f64)> = row_l2_norms(x)
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != bias_row)
        .collect();
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    FeatureRanking { entries }
}

/// First `k` feature indices of the ranking.
pub fn select_top_k(ranking: &FeatureRanking, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > ranking.len() {
        return Err(Error::SelectionRange {
            k,
            available: ranking.len(),
        });
    }
    Ok(ranking.entries[..k].iter().map(|&(i, _)| i).collect())
}

/// Fraction of `true_support` found in `selected`.
///
/// Panics if `true_support` is empty.
pub fn support_recovery_rate(selected: &[usize], true_support: &[usize]) -> f64 {
    let truth: BTreeSet<usize> = true_support.iter().copied().collect();
    assert!(!truth.is_empty(), "true support must be non-empty");
    let hits = selected
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .intersection(&truth)
        .count();
    hits as f64 / truth.len() as f64
}

/// Rows whose norm exceeds `rel_threshold` times the largest row norm.
pub fn active_rows(x: &DenseMatrix, rel_threshold: f64) -> usize {
    let norms = row_l2_norms(x);
    let max = norms.iter().copied().fold(0.0, f64::max);
    norms.iter().filter(|&&r| r > rel_threshold * max).count()
}

/// Misclassification rate of a nearest-centroid classifier that sees only
/// the `selected` feature columns.
///
/// `train` and `test` are sample-by-feature matrices. Classes absent from
/// the training labels are never predicted.
pub fn nearest_centroid_error(
    train: &DenseMatrix,
    train_labels: &[usize],
    test: &DenseMatrix,
    test_labels: &[usize],
    selected: &[usize],
) -> f64 {
    assert_eq!(train.rows(), train_labels.len());
    assert_eq!(test.rows(), test_labels.len());
    if test_labels.is_empty() {
        return 0.0;
    }
    let classes = train_labels.iter().chain(test_labels).max().map_or(0, |m| m + 1);
    let mut centroids = vec![vec![0.0; selected.len()]; classes];
    let mut counts = vec![0usize; classes];
    for (row, &label) in train.row_iter().zip(train_labels) {
        counts[label] += 1;
        for (c, &f) in centroids[label].iter_mut().zip(selected) {
            *c += row[f];
        }
    }
    for (centroid, &count) in centroids.iter_mut().zip(&counts) {
        if count > 0 {
            centroid.iter_mut().for_each(|v| *v /= count as f64);
        }
    }
    let wrong = test
        .row_iter()
        .zip(test_labels)
        .filter(|(row, &label)| {
            let predicted = (0..classes)
                .filter(|&k| counts[k] > 0)
                .map(|k| {
                    let dist: f64 = centroids[k]
                        .iter()
                        .zip(selected)
                        .map(|(c, &f)| (row[f] - c).powi(2))
                        .sum();
                    (k, dist)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .map(|(k, _)| k);
            predicted != Some(label)
        })
        .count();
    wrong as f64 / test_labels.len() as f64
}
