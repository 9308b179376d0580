//! Affiliation time series, movement detection and mobility profiles.

mod geo;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{AffiliationRecord, Corpus, Timeslot};

pub use geo::{haversine_km, Location, LocationRegistry, EARTH_RADIUS_KM};

#[derive(Debug, Error)]
pub enum MobilityError {
    #[error("unknown author {0}")]
    UnknownAuthor(String),
    #[error("author {0} has no affiliation data")]
    NoAffiliationData(String),
    #[error("institution {institution}: coordinates ({lat}, {lon}) out of range")]
    BadCoordinates {
        institution: String,
        lat: f64,
        lon: f64,
    },
    #[error("registry header must be institution_id,lat,lon,city,country, got {0}")]
    BadHeader(String),
    #[error("registry csv: {0}")]
    Csv(#[source] csv::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One resolved affiliation per publishing timeslot, strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffiliationTimeSeries {
    pub author_id: String,
    pub points: Vec<(Timeslot, AffiliationRecord)>,
}

impl AffiliationTimeSeries {
    pub fn institutions(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|(_, a)| a.institution_id.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Movement {
    pub from: AffiliationRecord,
    pub to: AffiliationRecord,
    pub at: Timeslot,
    pub distance_km: Option<f64>,
    pub cross_country: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MigrationStatus {
    Domestic,
    International,
}

impl MigrationStatus {
    pub const ALL: [MigrationStatus; 2] = [MigrationStatus::Domestic, MigrationStatus::International];

    pub fn label(self) -> &'static str {
        match self {
            MigrationStatus::Domestic => "Domestic",
            MigrationStatus::International => "International",
        }
    }
}

impl fmt::Display for MigrationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for MigrationStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MigrationStatus::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| format!("unknown migration status {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobilityProfile {
    pub author_id: String,
    pub n_institutions: usize,
    pub n_cities: usize,
    pub n_countries: usize,
    pub n_movements: usize,
    /// Movements whose distance could not be computed.
    pub unresolved_distances: usize,
    pub avg_distance_km: f64,
    pub cumulative_distance_km: f64,
    pub migration_status: MigrationStatus,
}

/// Most frequent candidates by institution id; several on a tie.
fn most_frequent(candidates: &[AffiliationRecord]) -> Vec<&AffiliationRecord> {
    let mut counts: BTreeMap<&str, (usize, &AffiliationRecord)> = BTreeMap::new();
    for c in candidates {
        counts.entry(c.institution_id.as_str()).or_insert((0, c)).0 += 1;
    }
    let top = counts.values().map(|(n, _)| *n).max().unwrap_or(0);
    counts
        .into_values()
        .filter(|(n, _)| *n == top)
        .map(|(_, rec)| rec)
        .collect()
}

/// Picks the representative affiliation of one timeslot.
///
/// Majority first. On a tie the affiliation used in the temporally closest
/// resolved slot wins (the past slot on equal distance); otherwise the
/// smallest institution id.
pub fn resolve_timeslot(
    candidates: &[AffiliationRecord],
    at: Timeslot,
    resolved: &[(Timeslot, &AffiliationRecord)],
) -> AffiliationRecord {
    let tied = most_frequent(candidates);
    assert!(!tied.is_empty(), "resolve_timeslot needs at least one candidate");
    if tied.len() == 1 {
        return tied[0].clone();
    }
    let mut neighbours: Vec<(i64, bool, &AffiliationRecord)> = resolved
        .iter()
        .filter(|(t, _)| *t != at)
        .map(|(t, rec)| (at.months_until(*t).abs(), *t > at, *rec))
        .collect();
    neighbours.sort_by_key(|(dist, future, _)| (*dist, *future));
    for (_, _, rec) in neighbours {
        if let Some(hit) = tied.iter().find(|c| c.institution_id == rec.institution_id) {
            return (*hit).clone();
        }
    }
    // tied is ordered by institution id
    tied[0].clone()
}

/// Reconstructs the author's affiliation trajectory.
///
/// A first pass resolves slots with a unique majority; a second pass walks
/// the remaining slots chronologically, using every slot resolved so far as
/// temporal context.
pub fn build_time_series(
    corpus: &Corpus,
    author_id: &str,
) -> Result<AffiliationTimeSeries, MobilityError> {
    if corpus.author(author_id).is_none() {
        return Err(MobilityError::UnknownAuthor(author_id.to_owned()));
    }
    let mut slots: BTreeMap<Timeslot, Vec<AffiliationRecord>> = BTreeMap::new();
    for p in corpus.publications_of(author_id) {
        if let Some(aff) = p.affiliation_of(author_id) {
            slots.entry(p.date).or_default().push(aff.clone());
        }
    }
    series_from_slots(author_id, slots)
}

pub fn series_from_slots(
    author_id: &str,
    slots: BTreeMap<Timeslot, Vec<AffiliationRecord>>,
) -> Result<AffiliationTimeSeries, MobilityError> {
    if slots.is_empty() {
        return Err(MobilityError::NoAffiliationData(author_id.to_owned()));
    }
    let mut resolved: BTreeMap<Timeslot, AffiliationRecord> = BTreeMap::new();
    for (t, cands) in &slots {
        if let [only] = most_frequent(cands).as_slice() {
            resolved.insert(*t, (*only).clone());
        }
    }
    for (t, cands) in &slots {
        if resolved.contains_key(t) {
            continue;
        }
        let context: Vec<(Timeslot, &AffiliationRecord)> =
            resolved.iter().map(|(k, v)| (*k, v)).collect();
        let pick = resolve_timeslot(cands, *t, &context);
        resolved.insert(*t, pick);
    }
    Ok(AffiliationTimeSeries {
        author_id: author_id.to_owned(),
        points: resolved.into_iter().collect(),
    })
}

/// Collapses publication-lag oscillations: a run of at most `max_slots`
/// points that returns to an institution the author had already left, and
/// is surrounded on both sides by the same other institution, is relabelled
/// with that surrounding institution (A, B, A, B becomes A, B, B, B).
pub fn smooth_oscillations(series: &AffiliationTimeSeries, max_slots: usize) -> AffiliationTimeSeries {
    let mut labels: Vec<AffiliationRecord> = series.points.iter().map(|(_, a)| a.clone()).collect();
    // runs as (start, end_exclusive)
    let runs = |labels: &[AffiliationRecord]| {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for i in 0..labels.len() {
            match out.last_mut() {
                Some((_, end)) if labels[i].institution_id == labels[i - 1].institution_id => *end = i + 1,
                _ => out.push((i, i + 1)),
            }
        }
        out
    };
    let mut r = 1;
    loop {
        let current = runs(&labels);
        if r + 1 >= current.len() {
            break;
        }
        let (s, e) = current[r];
        let prev = &labels[current[r - 1].0];
        let next = &labels[current[r + 1].0];
        let inst = &labels[s].institution_id;
        let seen_before = labels[..current[r - 1].0].iter().any(|a| &a.institution_id == inst);
        if e - s <= max_slots && prev.institution_id == next.institution_id && seen_before {
            let fill = prev.clone();
            for l in &mut labels[s..e] {
                *l = fill.clone();
            }
            // merged run: re-examine from the same position
            r = r.saturating_sub(1).max(1);
        } else {
            r += 1;
        }
    }
    AffiliationTimeSeries {
        author_id: series.author_id.clone(),
        points: series.points.iter().map(|(t, _)| *t).zip(labels).collect(),
    }
}

fn country_of<'a>(aff: &'a AffiliationRecord, registry: &'a LocationRegistry) -> Option<&'a str> {
    aff.country
        .as_deref()
        .or_else(|| registry.get(&aff.institution_id).and_then(|l| l.country.as_deref()))
}

fn city_of<'a>(aff: &'a AffiliationRecord, registry: &'a LocationRegistry) -> Option<&'a str> {
    if aff.country.is_some() {
        aff.city.as_deref()
    } else {
        registry.get(&aff.institution_id).and_then(|l| l.city.as_deref())
    }
}

pub fn detect_movements(series: &AffiliationTimeSeries, registry: &LocationRegistry) -> Vec<Movement> {
    series
        .points
        .windows(2)
        .filter(|w| w[0].1.institution_id != w[1].1.institution_id)
        .map(|w| {
            let (from, to) = (&w[0].1, &w[1].1);
            let distance_km = match (registry.get(&from.institution_id), registry.get(&to.institution_id)) {
                (Some(a), Some(b)) => Some(a.distance_km(b)),
                _ => None,
            };
            let cross_country = match (country_of(from, registry), country_of(to, registry)) {
                (Some(a), Some(b)) => a != b,
                _ => false,
            };
            Movement {
                from: from.clone(),
                to: to.clone(),
                at: w[1].0,
                distance_km,
                cross_country,
            }
        })
        .collect()
}

/// Location tallies and distance summary of one author.
///
/// A location with a country but no city is counted as an unnamed city of
/// that country; a location with neither is left out of both tallies.
pub fn mobility_profile(
    movements: &[Movement],
    series: &AffiliationTimeSeries,
    registry: &LocationRegistry,
) -> MobilityProfile {
    let institutions: BTreeSet<&str> = series.institutions().collect();
    let mut cities: BTreeSet<(&str, Option<&str>)> = BTreeSet::new();
    let mut countries: BTreeSet<&str> = BTreeSet::new();
    for (_, aff) in &series.points {
        if let Some(country) = country_of(aff, registry) {
            countries.insert(country);
            cities.insert((country, city_of(aff, registry)));
        }
    }
    let known: Vec<f64> = movements.iter().filter_map(|m| m.distance_km).collect();
    let cumulative: f64 = known.iter().fold(0.0, |a, b| a + b);
    MobilityProfile {
        author_id: series.author_id.clone(),
        n_institutions: institutions.len(),
        n_cities: cities.len(),
        n_countries: countries.len(),
        n_movements: movements.len(),
        unresolved_distances: movements.len() - known.len(),
        avg_distance_km: if known.is_empty() { 0.0 } else { cumulative / known.len() as f64 },
        cumulative_distance_km: cumulative,
        migration_status: if movements.iter().any(|m| m.cross_country) {
            MigrationStatus::International
        } else {
            MigrationStatus::Domestic
        },
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobilityConfig {
    /// Oscillation smoothing window in slots; 0 disables smoothing.
    pub smooth_slots: usize,
}

/// Series, movements and profile for one author.
pub fn author_mobility(
    corpus: &Corpus,
    author_id: &str,
    registry: &LocationRegistry,
    config: &MobilityConfig,
) -> Result<(AffiliationTimeSeries, Vec<Movement>, MobilityProfile), MobilityError> {
    let mut series = build_time_series(corpus, author_id)?;
    if config.smooth_slots > 0 {
        series = smooth_oscillations(&series, config.smooth_slots);
    }
    let movements = detect_movements(&series, registry);
    let profile = mobility_profile(&movements, &series, registry);
    Ok((series, movements, profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Authorship, Publication};
    use proptest::prelude::*;

    fn aff(id: &str) -> AffiliationRecord {
        AffiliationRecord::new(id)
    }

    fn at(ym: &str) -> Timeslot {
        ym.parse().unwrap()
    }

    fn series(insts: &[&str]) -> AffiliationTimeSeries {
        AffiliationTimeSeries {
            author_id: "x".into(),
            points: insts
                .iter()
                .enumerate()
                .map(|(i, s)| (Timeslot::from_month_index(24_000 + i as i64), aff(s)))
                .collect(),
        }
    }

    fn registry() -> LocationRegistry {
        let mut r = LocationRegistry::new();
        let mut put = |id: &str, lat, lon, city: &str, country: &str| {
            r.insert(
                id,
                Location {
                    lat,
                    lon,
                    city: Some(city.into()),
                    country: Some(country.into()),
                },
            )
            .unwrap()
        };
        put("unipi", 43.7167, 10.4, "Pisa", "IT");
        put("sapienza", 41.9, 12.5, "Rome", "IT");
        put("tum", 48.1374, 11.5755, "Munich", "DE");
        r
    }

    #[test]
    fn majority_wins() {
        let c = [aff("A"), aff("A"), aff("B")];
        assert_eq!(resolve_timeslot(&c, at("2000-05"), &[]).institution_id, "A");
    }

    #[test]
    fn previous_slot_breaks_tie() {
        let prev = aff("A");
        let c = [aff("B"), aff("A")];
        let ctx = [(at("2000-04"), &prev)];
        assert_eq!(resolve_timeslot(&c, at("2000-05"), &ctx).institution_id, "A");
    }

    #[test]
    fn lexicographic_fallback() {
        let c = [aff("B"), aff("A")];
        assert_eq!(resolve_timeslot(&c, at("2000-05"), &[]).institution_id, "A");
        let other = aff("Z");
        let ctx = [(at("2000-04"), &other)];
        assert_eq!(resolve_timeslot(&c, at("2000-05"), &ctx).institution_id, "A");
    }

    #[test]
    fn closest_neighbour_then_past() {
        let (a, b) = (aff("A"), aff("B"));
        let c = [aff("A"), aff("B")];
        // future B is closer than past A
        let ctx = [(at("2000-01"), &a), (at("2000-06"), &b)];
        assert_eq!(resolve_timeslot(&c, at("2000-05"), &ctx).institution_id, "B");
        // equidistant: past wins
        let ctx = [(at("2000-04"), &b), (at("2000-06"), &a)];
        assert_eq!(resolve_timeslot(&c, at("2000-05"), &ctx).institution_id, "B");
    }

    #[test]
    fn two_pass_trace() {
        let mut slots = BTreeMap::new();
        slots.insert(at("2000-01"), vec![aff("A")]);
        slots.insert(at("2000-02"), vec![aff("A"), aff("B")]);
        slots.insert(at("2000-03"), vec![aff("B")]);
        let s = series_from_slots("x", slots).unwrap();
        let got: Vec<&str> = s.institutions().collect();
        assert_eq!(got, vec!["A", "A", "B"]);
    }

    #[test]
    fn second_pass_sees_future_majority() {
        let mut slots = BTreeMap::new();
        slots.insert(at("2000-01"), vec![aff("A"), aff("B")]);
        slots.insert(at("2000-02"), vec![aff("B")]);
        let s = series_from_slots("x", slots).unwrap();
        assert_eq!(s.points[0].1.institution_id, "B");
    }

    #[test]
    fn series_from_corpus() {
        let p = |id: &str, date: &str, inst: &str| Publication {
            paper_id: id.into(),
            date: date.parse().unwrap(),
            citations: None,
            authors: vec![Authorship::new("x", Some(aff(inst)))],
        };
        let corpus = Corpus::from_publications(vec![
            p("1", "2001-01", "A"),
            p("2", "2001-01", "A"),
            p("3", "2001-01", "B"),
        ])
        .unwrap();
        let s = build_time_series(&corpus, "x").unwrap();
        assert_eq!(s.points, vec![(at("2001-01"), aff("A"))]);
        assert!(matches!(
            build_time_series(&corpus, "nobody"),
            Err(MobilityError::UnknownAuthor(_))
        ));
    }

    #[test]
    fn no_affiliation_data() {
        let corpus = Corpus::from_publications(vec![Publication {
            paper_id: "1".into(),
            date: at("2001-01"),
            citations: None,
            authors: vec![Authorship::new("x", None)],
        }])
        .unwrap();
        assert!(matches!(
            build_time_series(&corpus, "x"),
            Err(MobilityError::NoAffiliationData(_))
        ));
    }

    #[test]
    fn constant_series_has_no_movements() {
        assert!(detect_movements(&series(&["A", "A", "A"]), &registry()).is_empty());
    }

    #[test]
    fn geocoded_movement() {
        let m = detect_movements(&series(&["unipi", "sapienza"]), &registry());
        assert_eq!(m.len(), 1);
        let d = m[0].distance_km.unwrap();
        assert!((d - 264.847).abs() < 1.0);
        assert!(!m[0].cross_country);
    }

    #[test]
    fn unresolved_distance() {
        let s = series(&["unipi", "nowhere"]);
        let m = detect_movements(&s, &registry());
        assert_eq!(m[0].distance_km, None);
        let p = mobility_profile(&m, &s, &registry());
        assert_eq!(p.unresolved_distances, 1);
        assert_eq!(p.avg_distance_km, 0.0);
    }

    #[test]
    fn single_affiliation_is_domestic() {
        let s = series(&["unipi"]);
        let m = detect_movements(&s, &registry());
        let p = mobility_profile(&m, &s, &registry());
        assert_eq!(p.n_institutions, 1);
        assert_eq!(p.n_movements, 0);
        assert_eq!(p.migration_status, MigrationStatus::Domestic);
    }

    #[test]
    fn it_it_de_is_international() {
        let s = series(&["unipi", "sapienza", "tum"]);
        let m = detect_movements(&s, &registry());
        let p = mobility_profile(&m, &s, &registry());
        assert_eq!(p.migration_status, MigrationStatus::International);
        assert_eq!((p.n_institutions, p.n_cities, p.n_countries), (3, 3, 2));
        assert!((p.avg_distance_km * 2.0 - p.cumulative_distance_km).abs() < 1e-9);
    }

    #[test]
    fn distance_summary_arithmetic() {
        let mv = |d| Movement {
            from: aff("a"),
            to: aff("b"),
            at: at("2000-01"),
            distance_km: Some(d),
            cross_country: false,
        };
        let p = mobility_profile(&[mv(100.0), mv(300.0)], &series(&["a", "b", "a"]), &LocationRegistry::new());
        assert_eq!(p.avg_distance_km, 200.0);
        assert_eq!(p.cumulative_distance_km, 400.0);
    }

    #[test]
    fn country_only_location_counts_as_unnamed_city() {
        let s = AffiliationTimeSeries {
            author_id: "x".into(),
            points: vec![
                (at("2000-01"), AffiliationRecord::located("a", None, Some("FR"))),
                (at("2000-02"), AffiliationRecord::located("b", None, Some("ES"))),
                (at("2000-03"), AffiliationRecord::new("c")),
            ],
        };
        let m = detect_movements(&s, &LocationRegistry::new());
        let p = mobility_profile(&m, &s, &LocationRegistry::new());
        assert_eq!((p.n_institutions, p.n_cities, p.n_countries), (3, 2, 2));
        assert!(m[0].cross_country);
        assert!(!m[1].cross_country);
    }

    #[test]
    fn smoothing_collapses_lag_oscillation() {
        let s = series(&["A", "B", "A", "B", "B"]);
        let smoothed = smooth_oscillations(&s, 1);
        let got: Vec<&str> = smoothed.institutions().collect();
        assert_eq!(got, vec!["A", "B", "B", "B", "B"]);
        assert_eq!(detect_movements(&smoothed, &LocationRegistry::new()).len(), 1);
        // long returns are genuine
        let s = series(&["A", "B", "A", "A", "A", "B"]);
        assert_eq!(smooth_oscillations(&s, 2).points, s.points);
    }

    proptest! {
        #[test]
        fn distinct_runs_give_n_minus_one_movements(n in 1usize..30) {
            let names: Vec<String> = (0..n).map(|i| format!("i{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            prop_assert_eq!(detect_movements(&series(&refs), &LocationRegistry::new()).len(), n - 1);
        }

        #[test]
        fn resolve_is_deterministic(
            picks in prop::collection::vec(0usize..4, 1..8),
            ctx in prop::collection::vec((0i64..24, 0usize..4), 0..6),
        ) {
            let names = ["A", "B", "C", "D"];
            let cands: Vec<AffiliationRecord> = picks.iter().map(|&i| aff(names[i])).collect();
            let recs: Vec<(Timeslot, AffiliationRecord)> = ctx
                .iter()
                .map(|&(m, i)| (Timeslot::from_month_index(24_000 + m), aff(names[i])))
                .collect();
            let view: Vec<(Timeslot, &AffiliationRecord)> = recs.iter().map(|(t, a)| (*t, a)).collect();
            let t = Timeslot::from_month_index(24_012);
            let a = resolve_timeslot(&cands, t, &view);
            let b = resolve_timeslot(&cands, t, &view);
            prop_assert_eq!(&a, &b);
            prop_assert!(cands.contains(&a));
        }

        #[test]
        fn profile_invariants(
            insts in prop::collection::vec(0usize..5, 1..20),
            countries in prop::collection::vec(prop::option::of(0usize..3), 5),
        ) {
            let cc = ["IT", "DE", "FR"];
            let s = AffiliationTimeSeries {
                author_id: "x".into(),
                points: insts
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| {
                        let country = countries[k].map(|c| cc[c]);
                        let city = if k % 2 == 0 { country.map(|_| "c") } else { None };
                        (Timeslot::from_month_index(24_000 + i as i64),
                         AffiliationRecord::located(format!("inst{k}"), city, country))
                    })
                    .collect(),
            };
            let m = detect_movements(&s, &LocationRegistry::new());
            let p = mobility_profile(&m, &s, &LocationRegistry::new());
            prop_assert!(p.n_countries <= p.n_cities && p.n_cities <= p.n_institutions);
            prop_assert_eq!(
                p.migration_status == MigrationStatus::International,
                m.iter().any(|x| x.cross_country)
            );
        }
    }
}
