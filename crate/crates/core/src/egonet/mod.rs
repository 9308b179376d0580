//! Co-authorship tie strength, five-circle ego networks and circle statistics.

mod circles;
mod jenks;
mod meanshift;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;

pub use circles::{circle_stats, circle_stats_for, CircleStats};
pub use jenks::{jenks, jenks_breaks, JenksError, JenksPartition};
pub use meanshift::{
    mean_shift_circles, mean_shift_modes, silverman_bandwidth, MeanShiftConfig,
};

/// Number of concentric circles every ego network is mapped onto.
pub const CIRCLES: usize = 5;

/// Relative tolerance under which two tie strengths count as equal.
const STRENGTH_EQ_REL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EgoError {
    #[error("a shared paper must have at least two authors, got {0}")]
    TooFewAuthors(usize),
    #[error("relation duration must be positive, got {0}")]
    BadDuration(f64),
    #[error("unknown ego {0}")]
    UnknownEgo(String),
    #[error("ego {0} has no alters with a long enough relation")]
    NoEligibleAlters(String),
    #[error("no networks in group")]
    EmptyGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EgoConfig {
    /// Relations shorter than this (in years) are discarded.
    pub min_duration_years: f64,
}

impl Default for EgoConfig {
    fn default() -> Self {
        Self {
            min_duration_years: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollaborationTie {
    pub ego_id: String,
    pub alter_id: String,
    pub strength: f64,
    pub duration_years: f64,
    pub shared_paper_count: usize,
    /// 1-based ring (1 = strongest); 0 when the alter could not be placed.
    pub ring: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoNetwork {
    pub ego_id: String,
    /// Sorted by strength descending, then alter id.
    pub ties: Vec<CollaborationTie>,
    /// Class upper limits from the Jenks partition, ascending in strength.
    pub breaks: Vec<f64>,
    /// Exclusive ring counts, strongest first.
    pub ring_sizes: [usize; CIRCLES],
    /// Cumulative circle sizes.
    pub circle_sizes: [usize; CIRCLES],
    pub optimal_k: usize,
    pub complete: bool,
}

impl EgoNetwork {
    pub fn size(&self) -> usize {
        self.ties.len()
    }

    pub fn strengths(&self) -> Vec<f64> {
        self.ties.iter().map(|t| t.strength).collect()
    }
}

/// Tie strength: (1 / d) * sum over shared papers of 1 / (k(p) - 1).
pub fn tie_strength(author_counts: &[usize], duration_years: f64) -> Result<f64, EgoError> {
    if !(duration_years > 0.0) || !duration_years.is_finite() {
        return Err(EgoError::BadDuration(duration_years));
    }
    let mut quanta = 0.0;
    for &k in author_counts {
        if k < 2 {
            return Err(EgoError::TooFewAuthors(k));
        }
        quanta += 1.0 / (k - 1) as f64;
    }
    Ok(quanta / duration_years)
}

/// Builds the ego network of `ego_id` from the immutable corpus.
///
/// The relation duration runs from the first co-authored paper to the
/// ego's last paper. Equal strengths always share a ring; when fewer than
/// five distinct strengths exist the outer rings stay empty and the network
/// is flagged incomplete.
pub fn build_ego_network(
    corpus: &Corpus,
    ego_id: &str,
    config: &EgoConfig,
) -> Result<EgoNetwork, EgoError> {
    let profile = corpus
        .author(ego_id)
        .ok_or_else(|| EgoError::UnknownEgo(ego_id.to_owned()))?;
    let ego_last = profile.career_end;

    struct Shared {
        first: crate::corpus::Timeslot,
        author_counts: Vec<usize>,
    }
    let mut shared: BTreeMap<&str, Shared> = BTreeMap::new();
    for paper in corpus.publications_of(ego_id) {
        let k = paper.author_count();
        for a in paper.authors.iter().filter(|a| a.author_id != ego_id) {
            shared
                .entry(a.author_id.as_str())
                .and_modify(|s| s.author_counts.push(k))
                .or_insert_with(|| Shared {
                    first: paper.date,
                    author_counts: vec![k],
                });
        }
    }

    let mut ties = Vec::new();
    for (alter, s) in shared {
        let duration = s.first.years_until(ego_last);
        if duration <= 0.0 || duration < config.min_duration_years {
            continue;
        }
        ties.push(CollaborationTie {
            ego_id: ego_id.to_owned(),
            alter_id: alter.to_owned(),
            strength: tie_strength(&s.author_counts, duration)?,
            duration_years: duration,
            shared_paper_count: s.author_counts.len(),
            ring: 0,
        });
    }
    if ties.is_empty() {
        return Err(EgoError::NoEligibleAlters(ego_id.to_owned()));
    }
    Ok(assign_circles(ego_id, ties))
}

/// Partitions ties into rings and fills in the circle bookkeeping.
pub fn assign_circles(ego_id: &str, mut ties: Vec<CollaborationTie>) -> EgoNetwork {
    ties.sort_by(|a, b| {
        b.strength
            .total_cmp(&a.strength)
            .then_with(|| a.alter_id.cmp(&b.alter_id))
    });

    // (strength, multiplicity) ascending, near-equal strengths merged
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for t in ties.iter().rev() {
        match groups.last_mut() {
            Some((v, w)) if (t.strength - *v).abs() <= STRENGTH_EQ_REL * v.abs().max(t.strength.abs()) => {
                *w += 1.0
            }
            _ => groups.push((t.strength, 1.0)),
        }
    }

    let classes = groups.len().min(CIRCLES);
    let (ends, _) = jenks::fisher_dp(&groups, classes);
    let breaks: Vec<f64> = ends[..classes - 1].iter().map(|&e| groups[e - 1].0).collect();

    let mut ring_sizes = [0usize; CIRCLES];
    let mut start = 0;
    let mut tie_iter = ties.iter_mut().rev();
    for (class, &end) in ends.iter().enumerate() {
        let ring = classes - class;
        let count: usize = groups[start..end].iter().map(|g| g.1 as usize).sum();
        for t in tie_iter.by_ref().take(count) {
            t.ring = ring;
        }
        ring_sizes[ring - 1] = count;
        start = end;
    }

    let mut circle_sizes = [0usize; CIRCLES];
    let mut acc = 0;
    for (c, r) in circle_sizes.iter_mut().zip(ring_sizes) {
        acc += r;
        *c = acc;
    }

    let strengths: Vec<f64> = ties.iter().map(|t| t.strength).collect();
    EgoNetwork {
        ego_id: ego_id.to_owned(),
        optimal_k: mean_shift_circles(&strengths),
        complete: ring_sizes.iter().all(|&r| r >= 1),
        ties,
        breaks,
        ring_sizes,
        circle_sizes,
    }
}
