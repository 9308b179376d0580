use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CorpusError, Publication, Timeslot};

/// Career stage, binned on career length in years with half-open bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CareerStage {
    PhD,
    YoungRes,
    AssistProf,
    AssocProf,
    FullProf,
    DistProf,
}

impl CareerStage {
    pub const ALL: [CareerStage; 6] = [
        CareerStage::PhD,
        CareerStage::YoungRes,
        CareerStage::AssistProf,
        CareerStage::AssocProf,
        CareerStage::FullProf,
        CareerStage::DistProf,
    ];

    /// Lower bound (inclusive) and upper bound (exclusive) in years.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            CareerStage::PhD => (0.0, 3.0),
            CareerStage::YoungRes => (3.0, 6.0),
            CareerStage::AssistProf => (6.0, 10.0),
            CareerStage::AssocProf => (10.0, 28.0),
            CareerStage::FullProf => (28.0, 38.0),
            CareerStage::DistProf => (38.0, f64::INFINITY),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CareerStage::PhD => "PhD",
            CareerStage::YoungRes => "YoungRes",
            CareerStage::AssistProf => "AssistProf",
            CareerStage::AssocProf => "AssocProf",
            CareerStage::FullProf => "FullProf",
            CareerStage::DistProf => "DistProf",
        }
    }
}

impl fmt::Display for CareerStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CareerStage {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CareerStage::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| CorpusError::Invalid(format!("unknown career stage {s:?}")))
    }
}

pub fn career_stage(length_years: f64) -> Result<CareerStage, CorpusError> {
    if !(length_years >= 0.0) {
        return Err(CorpusError::NegativeCareer(length_years));
    }
    Ok(CareerStage::ALL
        .into_iter()
        .find(|s| {
            let (lo, hi) = s.bounds();
            length_years >= lo && length_years < hi
        })
        .expect("career bins cover [0, inf)"))
}

/// Largest h such that at least h entries are >= h.
pub fn compute_h_index(citations: &[u64]) -> u32 {
    let mut sorted = citations.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|(i, &c)| c > *i as u64)
        .count() as u32
}

/// The 27 Scopus master subject areas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ResearchArea {
    Agri,
    Arts,
    Bioc,
    Busi,
    Ceng,
    Chem,
    Comp,
    Deci,
    Dent,
    Eart,
    Econ,
    Ener,
    Engi,
    Envi,
    Heal,
    Immu,
    Mate,
    Math,
    Medi,
    Mult,
    Neur,
    Nurs,
    Phar,
    Phys,
    Psyc,
    Soci,
    Vete,
}

impl ResearchArea {
    pub const ALL: [ResearchArea; 27] = [
        ResearchArea::Agri,
        ResearchArea::Arts,
        ResearchArea::Bioc,
        ResearchArea::Busi,
        ResearchArea::Ceng,
        ResearchArea::Chem,
        ResearchArea::Comp,
        ResearchArea::Deci,
        ResearchArea::Dent,
        ResearchArea::Eart,
        ResearchArea::Econ,
        ResearchArea::Ener,
        ResearchArea::Engi,
        ResearchArea::Envi,
        ResearchArea::Heal,
        ResearchArea::Immu,
        ResearchArea::Mate,
        ResearchArea::Math,
        ResearchArea::Medi,
        ResearchArea::Mult,
        ResearchArea::Neur,
        ResearchArea::Nurs,
        ResearchArea::Phar,
        ResearchArea::Phys,
        ResearchArea::Psyc,
        ResearchArea::Soci,
        ResearchArea::Vete,
    ];

    pub fn code(self) -> String {
        format!("{self:?}").to_uppercase()
    }
}

impl FromStr for ResearchArea {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ResearchArea::ALL
            .into_iter()
            .find(|a| a.code() == s)
            .ok_or_else(|| CorpusError::Invalid(format!("unknown research area {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorProfile {
    pub author_id: String,
    pub research_areas: BTreeSet<ResearchArea>,
    /// Paper ids ordered by (date, paper_id).
    pub publications: Vec<String>,
    pub career_start: Timeslot,
    pub career_end: Timeslot,
    pub career_length_years: f64,
    pub career_stage: CareerStage,
    pub productivity: usize,
    pub h_index: u32,
}

impl AuthorProfile {
    /// Builds a profile from the author's (non-empty) set of publications.
    pub(crate) fn derive<'a, I>(author_id: &str, papers: I) -> Self
    where
        I: IntoIterator<Item = &'a Publication>,
    {
        let mut papers: Vec<&Publication> = papers.into_iter().collect();
        papers.sort_by(|a, b| (a.date, &a.paper_id).cmp(&(b.date, &b.paper_id)));
        let start = papers.first().expect("author has at least one paper").date;
        let end = papers.last().expect("author has at least one paper").date;
        let career_length_years = start.years_until(end);

        let mut research_areas = BTreeSet::new();
        let mut declared_h = None;
        for p in &papers {
            if let Some(a) = p.authors.iter().find(|a| a.author_id == author_id) {
                research_areas.extend(a.areas.iter().copied());
                if let Some(h) = a.h_index {
                    declared_h = Some(declared_h.map_or(h, |d: u32| d.max(h)));
                }
            }
        }

        let productivity = papers.len();
        let h_index = if papers.iter().any(|p| p.citations.is_some()) {
            let cites: Vec<u64> = papers.iter().map(|p| p.citations.unwrap_or(0)).collect();
            compute_h_index(&cites)
        } else {
            declared_h.unwrap_or(0)
        }
        .min(productivity as u32);

        Self {
            author_id: author_id.to_owned(),
            research_areas,
            publications: papers.iter().map(|p| p.paper_id.clone()).collect(),
            career_start: start,
            career_end: end,
            career_length_years,
            career_stage: career_stage(career_length_years).expect("end >= start"),
            productivity,
            h_index,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Authorship, Corpus};
    use proptest::prelude::*;

    fn brute_h(c: &[u64]) -> u32 {
        (0..=c.len())
            .filter(|&h| c.iter().filter(|&&x| x >= h as u64).count() >= h)
            .max()
            .unwrap() as u32
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(compute_h_index(&[]), 0);
        assert_eq!(compute_h_index(&[0, 0, 0]), 0);
        assert_eq!(compute_h_index(&[10, 10, 10]), 3);
        assert_eq!(brute_h(&[25, 8, 5, 3, 3]), 3);
        assert_eq!(compute_h_index(&[25, 8, 5, 3, 3]), 3);
    }

    #[test]
    fn stage_examples() {
        assert_eq!(career_stage(0.0).unwrap(), CareerStage::PhD);
        assert_eq!(career_stage(17.1).unwrap(), CareerStage::AssocProf);
        assert_eq!(career_stage(38.0).unwrap(), CareerStage::DistProf);
        assert_eq!(career_stage(3.0).unwrap(), CareerStage::YoungRes);
        assert_eq!(career_stage(9.999).unwrap(), CareerStage::AssistProf);
        assert!(career_stage(-0.1).is_err());
        assert!(career_stage(f64::NAN).is_err());
    }

    #[test]
    fn area_codes_round_trip() {
        for a in ResearchArea::ALL {
            assert_eq!(a.code().parse::<ResearchArea>().unwrap(), a);
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{}\"", a.code()));
        }
    }

    #[test]
    fn declared_h_used_without_citations() {
        let mut a = Authorship::new("x", None);
        a.h_index = Some(7);
        let pubs: Vec<Publication> = (0..10)
            .map(|i| Publication {
                paper_id: format!("p{i}"),
                date: Timeslot::new(2000 + i, 1).unwrap(),
                citations: None,
                authors: vec![a.clone()],
            })
            .collect();
        let c = Corpus::from_publications(pubs).unwrap();
        let prof = c.author("x").unwrap();
        assert_eq!(prof.h_index, 7);
        assert_eq!(prof.career_length_years, 9.0);
        assert_eq!(prof.career_stage, CareerStage::AssistProf);
    }

    proptest! {
        #[test]
        fn h_index_matches_brute_force(c in prop::collection::vec(0u64..40, 0..30)) {
            prop_assert_eq!(compute_h_index(&c), brute_h(&c));
        }

        #[test]
        fn h_index_permutation_invariant_and_monotone(
            mut c in prop::collection::vec(0u64..40, 1..30),
            idx in any::<prop::sample::Index>(),
            extra in 1u64..10,
        ) {
            let h = compute_h_index(&c);
            c.reverse();
            prop_assert_eq!(compute_h_index(&c), h);
            let i = idx.index(c.len());
            c[i] += extra;
            prop_assert!(compute_h_index(&c) >= h);
        }

        #[test]
        fn stages_partition_nonnegative_reals(x in 0.0f64..200.0) {
            let hits = CareerStage::ALL.iter().filter(|s| {
                let (lo, hi) = s.bounds();
                x >= lo && x < hi
            }).count();
            prop_assert_eq!(hits, 1);
            let s = career_stage(x).unwrap();
            let (lo, hi) = s.bounds();
            prop_assert!(x >= lo && x < hi);
        }
    }
}
