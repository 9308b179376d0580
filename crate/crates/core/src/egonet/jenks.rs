//! Exact Jenks natural breaks via the Fisher dynamic program.
//!
//! The partition minimises the total within-class sum of squared deviations
//! over all ways of cutting the sorted values into `k` contiguous classes.
//! Class costs are accumulated with a weighted Welford update, so the same
//! routine serves both plain values and (value, multiplicity) groups.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JenksError {
    #[error("cannot classify an empty set of values")]
    Empty,
    #[error("number of classes must be in 1..={n}, got {k}")]
    BadClassCount { k: usize, n: usize },
    #[error("values must be finite")]
    NonFinite,
}

/// Optimal partition of sorted values into contiguous classes.
#[derive(Debug, Clone, PartialEq)]
pub struct JenksPartition {
    pub sorted: Vec<f64>,
    /// Exclusive end index (into `sorted`) of each class, ascending.
    pub class_ends: Vec<usize>,
    /// Upper limit of every class except the last (k - 1 values).
    pub breaks: Vec<f64>,
    /// Total within-class sum of squared deviations.
    pub ssd: f64,
}

impl JenksPartition {
    pub fn classes(&self) -> impl Iterator<Item = &[f64]> {
        let mut start = 0;
        self.class_ends.iter().map(move |&end| {
            let class = &self.sorted[start..end];
            start = end;
            class
        })
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes().map(<[f64]>::len).collect()
    }
}

pub fn jenks(values: &[f64], k: usize) -> Result<JenksPartition, JenksError> {
    if values.is_empty() {
        return Err(JenksError::Empty);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(JenksError::NonFinite);
    }
    if k == 0 || k > values.len() {
        return Err(JenksError::BadClassCount { k, n: values.len() });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let points: Vec<(f64, f64)> = sorted.iter().map(|&v| (v, 1.0)).collect();
    let (class_ends, ssd) = fisher_dp(&points, k);
    let breaks = class_ends[..k - 1].iter().map(|&e| sorted[e - 1]).collect();
    Ok(JenksPartition {
        sorted,
        class_ends,
        breaks,
        ssd,
    })
}

/// The k - 1 class upper limits of the optimal partition.
pub fn jenks_breaks(values: &[f64], k: usize) -> Result<Vec<f64>, JenksError> {
    jenks(values, k).map(|p| p.breaks)
}

/// Fisher DP over `points` (value, weight), sorted ascending by value.
/// Returns the exclusive end index of each of the `k` classes and the
/// minimal total weighted SSD. Requires `1 <= k <= points.len()`.
pub(crate) fn fisher_dp(points: &[(f64, f64)], k: usize) -> (Vec<usize>, f64) {
    let n = points.len();
    debug_assert!(k >= 1 && k <= n);
    // cost[c][j]: best SSD of the first j points split into c + 1 classes.
    let mut cost = vec![vec![f64::INFINITY; n + 1]; k];
    let mut split = vec![vec![0usize; n + 1]; k];

    for j in 1..=n {
        let (mut weight, mut mean, mut ssd) = (0.0f64, 0.0f64, 0.0f64);
        for i in (0..j).rev() {
            let (x, w) = points[i];
            let total = weight + w;
            let delta = x - mean;
            mean += delta * w / total;
            ssd += w * delta * (x - mean);
            weight = total;
            // class [i, j) closes a partition of the first j points
            if i == 0 {
                cost[0][j] = ssd;
            }
            let top = k.min(i + 1);
            for c in 1..top {
                let candidate = cost[c - 1][i] + ssd;
                if candidate < cost[c][j] {
                    cost[c][j] = candidate;
                    split[c][j] = i;
                }
            }
        }
    }

    let mut ends = vec![0; k];
    let mut j = n;
    for c in (0..k).rev() {
        ends[c] = j;
        if c > 0 {
            j = split[c][j];
        }
    }
    (ends, cost[k - 1][n].max(0.0))
}
