//! Publication records, corpus indices and researcher profiles.

mod ingest;
mod profile;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use ingest::{load_corpus, load_corpus_from_reader, write_jsonl, LoadOutcome, SkippedLine};
pub use profile::{career_stage, compute_h_index, AuthorProfile, CareerStage, ResearchArea};

/// Default inclusive upper bound on the number of authors of a kept paper.
pub const DEFAULT_MAX_AUTHORS: usize = 26;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Schema { line: usize, reason: String },
    #[error("invalid record: {0}")]
    Invalid(String),
    #[error("duplicate paper_id {0}")]
    DuplicatePaper(String),
    #[error("max_authors must be at least 2, got {0}")]
    BadThreshold(usize),
    #[error("negative career length {0}")]
    NegativeCareer(f64),
}

/// A (year, month) publication slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timeslot {
    pub year: i32,
    pub month: u8,
}

impl Timeslot {
    pub fn new(year: i32, month: u8) -> Result<Self, CorpusError> {
        if !(1..=12).contains(&month) {
            return Err(CorpusError::Invalid(format!("month {month} outside 1..12")));
        }
        Ok(Self { year, month })
    }

    /// Months elapsed since year 0, January.
    pub fn month_index(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    pub fn from_month_index(index: i64) -> Self {
        Self {
            year: index.div_euclid(12) as i32,
            month: (index.rem_euclid(12) + 1) as u8,
        }
    }

    pub fn months_until(self, later: Timeslot) -> i64 {
        later.month_index() - self.month_index()
    }

    /// Fractional years from `self` to `later` (month difference / 12).
    pub fn years_until(self, later: Timeslot) -> f64 {
        self.months_until(later) as f64 / 12.0
    }

    pub fn add_months(self, months: i64) -> Self {
        Self::from_month_index(self.month_index() + months)
    }
}

impl fmt::Display for Timeslot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for Timeslot {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CorpusError::Invalid(format!("date {s:?} is not YYYY-MM"));
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year: i32 = y.parse().map_err(|_| bad())?;
        let month: u8 = m.parse().map_err(|_| bad())?;
        Timeslot::new(year, month)
    }
}

impl Serialize for Timeslot {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timeslot {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffiliationRecord {
    pub institution_id: String,
    pub city: Option<String>,
    pub country: Option<String>,
}

impl AffiliationRecord {
    pub fn new(institution_id: impl Into<String>) -> Self {
        Self {
            institution_id: institution_id.into(),
            city: None,
            country: None,
        }
    }

    pub fn located(
        institution_id: impl Into<String>,
        city: Option<&str>,
        country: Option<&str>,
    ) -> Self {
        Self {
            institution_id: institution_id.into(),
            city: city.map(str::to_owned),
            country: country.map(str::to_owned),
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.institution_id.is_empty() {
            return Err(CorpusError::Invalid("empty institution_id".into()));
        }
        if self.city.is_some() && self.country.is_none() {
            return Err(CorpusError::Invalid(format!(
                "institution {} has a city but no country",
                self.institution_id
            )));
        }
        Ok(())
    }
}

/// One author slot on a paper.
///
/// `h_index` and `areas` are optional author-level attributes carried through
/// from upstream profile data; `h_index` is only used when no paper of the
/// author carries a citation count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Authorship {
    pub author_id: String,
    #[serde(default)]
    pub affiliation: Option<AffiliationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_index: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub areas: Vec<ResearchArea>,
}

impl Authorship {
    pub fn new(author_id: impl Into<String>, affiliation: Option<AffiliationRecord>) -> Self {
        Self {
            author_id: author_id.into(),
            affiliation,
            h_index: None,
            areas: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Publication {
    pub paper_id: String,
    pub date: Timeslot,
    pub citations: Option<u64>,
    pub authors: Vec<Authorship>,
}

impl Publication {
    /// k(p): number of distinct authors.
    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    pub fn affiliation_of(&self, author_id: &str) -> Option<&AffiliationRecord> {
        self.authors
            .iter()
            .find(|a| a.author_id == author_id)
            .and_then(|a| a.affiliation.as_ref())
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.paper_id.is_empty() {
            return Err(CorpusError::Invalid("empty paper_id".into()));
        }
        if self.authors.is_empty() {
            return Err(CorpusError::Invalid(format!("paper {} has no authors", self.paper_id)));
        }
        let mut seen = BTreeSet::new();
        for a in &self.authors {
            if a.author_id.is_empty() {
                return Err(CorpusError::Invalid(format!(
                    "paper {} has an empty author_id",
                    self.paper_id
                )));
            }
            if !seen.insert(a.author_id.as_str()) {
                return Err(CorpusError::Invalid(format!(
                    "paper {} lists author {} twice",
                    self.paper_id, a.author_id
                )));
            }
            if let Some(aff) = &a.affiliation {
                aff.validate()?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub strict: bool,
    pub max_authors: usize,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            strict: false,
            max_authors: DEFAULT_MAX_AUTHORS,
        }
    }
}

/// Immutable, fully indexed set of publications and derived author profiles.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    publications: BTreeMap<String, Publication>,
    authors: BTreeMap<String, AuthorProfile>,
    author_index: BTreeMap<String, BTreeSet<String>>,
}

impl Corpus {
    pub fn from_publications<I>(publications: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = Publication>,
    {
        let mut map = BTreeMap::new();
        for p in publications {
            p.validate()?;
            if map.contains_key(&p.paper_id) {
                return Err(CorpusError::DuplicatePaper(p.paper_id));
            }
            map.insert(p.paper_id.clone(), p);
        }
        Ok(Self::index(map))
    }

    fn index(publications: BTreeMap<String, Publication>) -> Self {
        let mut author_index: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for p in publications.values() {
            for a in &p.authors {
                author_index
                    .entry(a.author_id.clone())
                    .or_default()
                    .insert(p.paper_id.clone());
            }
        }
        let authors = author_index
            .iter()
            .map(|(id, papers)| {
                let profile = AuthorProfile::derive(id, papers.iter().map(|p| &publications[p]));
                (id.clone(), profile)
            })
            .collect();
        Self {
            publications,
            authors,
            author_index,
        }
    }

    pub fn publications(&self) -> impl Iterator<Item = &Publication> {
        self.publications.values()
    }

    pub fn publication(&self, paper_id: &str) -> Option<&Publication> {
        self.publications.get(paper_id)
    }

    pub fn publication_count(&self) -> usize {
        self.publications.len()
    }

    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    pub fn author(&self, author_id: &str) -> Option<&AuthorProfile> {
        self.authors.get(author_id)
    }

    pub fn authors(&self) -> impl Iterator<Item = &AuthorProfile> {
        self.authors.values()
    }

    pub fn author_ids(&self) -> impl Iterator<Item = &str> {
        self.authors.keys().map(String::as_str)
    }

    pub fn papers_of(&self, author_id: &str) -> Option<&BTreeSet<String>> {
        self.author_index.get(author_id)
    }

    /// The author's publications ordered by (date, paper_id).
    pub fn publications_of<'a>(
        &'a self,
        author_id: &str,
    ) -> impl Iterator<Item = &'a Publication> + 'a {
        let ids: &[String] = self
            .authors
            .get(author_id)
            .map(|p| p.publications.as_slice())
            .unwrap_or(&[]);
        ids.iter().map(move |id| &self.publications[id])
    }

    /// Keeps only papers with at most `max_authors` authors and recomputes
    /// all indices and profiles. Authors left without papers are dropped.
    pub fn filter_large_papers(&self, max_authors: usize) -> Result<Corpus, CorpusError> {
        if max_authors < 2 {
            return Err(CorpusError::BadThreshold(max_authors));
        }
        let kept = self
            .publications
            .iter()
            .filter(|(_, p)| p.author_count() <= max_authors)
            .map(|(k, p)| (k.clone(), p.clone()))
            .collect();
        Ok(Self::index(kept))
    }
}
