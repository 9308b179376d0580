use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EgoError, EgoNetwork, CIRCLES};
use crate::corpus::CareerStage;

/// Mean cumulative circle sizes of a group and the ratios between
/// consecutive circles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleStats {
    pub networks: usize,
    pub mean_circle_sizes: [f64; CIRCLES],
    /// `mean[i + 1] / mean[i]`; `None` when `mean[i]` is zero.
    pub scaling_ratios: [Option<f64>; CIRCLES - 1],
}

impl CircleStats {
    pub fn from_means(networks: usize, mean_circle_sizes: [f64; CIRCLES]) -> Self {
        let mut scaling_ratios = [None; CIRCLES - 1];
        for (i, r) in scaling_ratios.iter_mut().enumerate() {
            let den = mean_circle_sizes[i];
            if den > 0.0 {
                *r = Some(mean_circle_sizes[i + 1] / den);
            }
        }
        Self {
            networks,
            mean_circle_sizes,
            scaling_ratios,
        }
    }
}

/// Statistics over a group of cumulative circle-size vectors. Sums are
/// integral so the result does not depend on input order.
pub fn circle_stats_for(circle_sizes: &[[usize; CIRCLES]]) -> Result<CircleStats, EgoError> {
    if circle_sizes.is_empty() {
        return Err(EgoError::EmptyGroup);
    }
    let mut sums = [0u64; CIRCLES];
    for sizes in circle_sizes {
        for (s, &c) in sums.iter_mut().zip(sizes) {
            *s += c as u64;
        }
    }
    let n = circle_sizes.len() as f64;
    Ok(CircleStats::from_means(circle_sizes.len(), sums.map(|s| s as f64 / n)))
}

/// Per-stage statistics over complete networks; incomplete ones are skipped
/// and stages with no complete network are absent from the result.
pub fn circle_stats<'a, I>(networks: I) -> BTreeMap<CareerStage, CircleStats>
where
    I: IntoIterator<Item = (CareerStage, &'a EgoNetwork)>,
{
    let mut groups: BTreeMap<CareerStage, Vec<[usize; CIRCLES]>> = BTreeMap::new();
    for (stage, net) in networks {
        if net.complete {
            groups.entry(stage).or_default().push(net.circle_sizes);
        }
    }
    groups
        .into_iter()
        .map(|(stage, sizes)| (stage, circle_stats_for(&sizes).expect("non-empty group")))
        .collect()
}
