//! Co-authorship ego networks, academic mobility profiles and range-corrected
//! correlation analysis over publication-record corpora.
//!
//! The crate is organised bottom-up:
//!
//! * [`corpus`] loads publication records, filters oversized papers and
//!   derives per-author profiles (career stage, productivity, h-index).
//! * [`egonet`] computes co-authorship tie strengths, partitions each ego's
//!   alters into five concentric circles and aggregates circle statistics.
//! * [`mobility`] reconstructs affiliation time series and derives movement
//!   and migration profiles.
//! * [`stats`] holds Pearson correlation, Thorndike range-restriction
//!   corrections, BCa bootstrap intervals and the correlation grid.
//! * [`synth`] generates corpora with planted ground truth.

pub mod corpus;
pub mod egonet;
pub mod mobility;
pub mod stats;
pub mod synth;

pub use corpus::{
    AffiliationRecord, AuthorProfile, Authorship, CareerStage, Corpus, IngestConfig,
    Publication, ResearchArea, Timeslot,
};
pub use egonet::{CircleStats, CollaborationTie, EgoConfig, EgoNetwork};
pub use mobility::{LocationRegistry, MigrationStatus, MobilityProfile, Movement};
pub use synth::{generate_corpus, GroundTruth, SynthSpec, Synthetic};
