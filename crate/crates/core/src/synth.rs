//! Synthetic corpora with planted ground truth.
//!
//! Every ego collaborates with its own set of alters on two-author papers, so
//! each shared paper adds exactly one unit to the strength sum and a tie of
//! `m` papers spread over `D` months has strength `12 m / D`. Ring strengths
//! are planted by solving that relation for integer `m` and `D`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    career_stage, AffiliationRecord, Authorship, CareerStage, Corpus, CorpusError, Publication,
    Timeslot,
};
use crate::egonet::CIRCLES;
use crate::mobility::{Location, LocationRegistry, MigrationStatus, MobilityError};

/// Shortest relation the ego-network builder keeps, in months.
const MIN_DURATION_MONTHS: i64 = 6;
const MAX_SHARED_PAPERS: i64 = 500;
/// Largest relative miss accepted when a band cannot be hit exactly.
pub const STRENGTH_TOLERANCE: f64 = 0.05;

/// Mean cumulative circle sizes of associate professors.
pub const ASSOC_PROF_CIRCLE_MEANS: [f64; CIRCLES] = [3.8, 9.3, 20.6, 44.3, 97.9];

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synth spec: {0}")]
    InvalidSpec(String),
    #[error("ego {ego}: strength {target} of ring {ring} unreachable with integer paper counts")]
    Infeasible { ego: String, ring: usize, target: f64 },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Mobility(#[from] MobilityError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RingPlan {
    /// The same ring sizes for every ego.
    Fixed([usize; CIRCLES]),
    /// Cumulative circle means; each ring gets 1 + Poisson(ring mean - 1).
    Poisson([f64; CIRCLES]),
}

impl RingPlan {
    fn ring_means(&self) -> [f64; CIRCLES] {
        match self {
            RingPlan::Fixed(s) => s.map(|v| v as f64),
            RingPlan::Poisson(c) => {
                let mut out = [0.0; CIRCLES];
                for i in 0..CIRCLES {
                    out[i] = c[i] - if i == 0 { 0.0 } else { c[i - 1] };
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub at: Timeslot,
    pub institution: String,
    pub country: String,
    #[serde(default)]
    pub city: Option<String>,
    #[serde(default)]
    pub coords: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MobilityPlan {
    Stationary,
    Random { max_moves: usize, international_prob: f64 },
    /// Script `i % len` goes to ego `i`. The first step is the affiliation at
    /// career start whatever its date; later steps must fall inside the career.
    Scripted(Vec<Vec<ScriptStep>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTarget {
    /// 1-based circle whose cumulative size is correlated with productivity.
    pub layer: usize,
    pub r: f64,
    pub productivity_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub seed: u64,
    /// Number of egos. Alters are generated on top of these.
    pub n_authors: usize,
    /// Career length range in years, sampled uniformly at month resolution.
    pub career_years: (f64, f64),
    /// Month of every ego's last paper.
    pub end: Timeslot,
    pub rings: RingPlan,
    /// Strength bands, strongest ring first.
    pub bands: [(f64, f64); CIRCLES],
    pub mobility: MobilityPlan,
    /// Extra single-author papers per ego (inclusive range); ignored when a
    /// correlation target is set.
    pub extra_solo_papers: (usize, usize),
    pub citation_max: u64,
    /// Chance per move of a one-paper return to the previous institution.
    pub oscillation_prob: f64,
    pub correlation: Option<CorrelationTarget>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            n_authors: 1000,
            career_years: (12.0, 26.0),
            end: Timeslot { year: 2022, month: 12 },
            rings: RingPlan::Poisson(ASSOC_PROF_CIRCLE_MEANS),
            bands: [
                (1.536, 1.664),
                (0.768, 0.832),
                (0.384, 0.416),
                (0.192, 0.208),
                (0.096, 0.104),
            ],
            mobility: MobilityPlan::Random {
                max_moves: 3,
                international_prob: 0.3,
            },
            extra_solo_papers: (5, 40),
            citation_max: 40,
            oscillation_prob: 0.0,
            correlation: None,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        let (lo, hi) = self.career_years;
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.5 && lo <= hi) {
            return bad(format!("career range ({lo}, {hi})"));
        }
        for (i, &(a, b)) in self.bands.iter().enumerate() {
            if !(a.is_finite() && b.is_finite() && a > 0.0 && a <= b) {
                return bad(format!("band {} = ({a}, {b})", i + 1));
            }
            if i > 0 && self.bands[i - 1].0 <= b {
                return bad(format!("bands {} and {} overlap or are out of order", i, i + 1));
            }
        }
        match &self.rings {
            RingPlan::Fixed(s) if s.iter().any(|&v| v == 0) => return bad("ring sizes must be >= 1".into()),
            RingPlan::Poisson(_) if self.rings.ring_means().iter().any(|&m| !(m >= 1.0 && m.is_finite())) => {
                return bad("ring means must be >= 1".into())
            }
            _ => {}
        }
        match &self.mobility {
            MobilityPlan::Random { international_prob: p, .. } if !(0.0..=1.0).contains(p) => {
                return bad(format!("international_prob {p}"))
            }
            MobilityPlan::Scripted(s) if s.is_empty() || s.iter().any(Vec::is_empty) => {
                return bad("empty mobility script".into())
            }
            _ => {}
        }
        if self.extra_solo_papers.0 > self.extra_solo_papers.1 {
            return bad("extra_solo_papers range reversed".into());
        }
        if !(0.0..=1.0).contains(&self.oscillation_prob) {
            return bad(format!("oscillation_prob {}", self.oscillation_prob));
        }
        if let Some(c) = self.correlation {
            if !(1..=CIRCLES).contains(&c.layer) || !(c.r > -1.0 && c.r < 1.0) || !(c.productivity_sd > 0.0) {
                return bad(format!("correlation target {c:?}"));
            }
            if self.n_authors < 3 {
                return bad("correlation target needs at least 3 egos".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedTie {
    pub alter_id: String,
    pub ring: usize,
    pub target: f64,
    pub strength: f64,
    pub shared_papers: usize,
    pub duration_months: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedMove {
    pub at: Timeslot,
    pub from: String,
    pub to: String,
    pub cross_country: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedEgo {
    pub author_id: String,
    pub career_start: Timeslot,
    pub career_end: Timeslot,
    pub stage: CareerStage,
    pub ring_sizes: [usize; CIRCLES],
    pub circle_sizes: [usize; CIRCLES],
    pub ties: Vec<PlantedTie>,
    pub movements: Vec<PlantedMove>,
    pub migration_status: MigrationStatus,
    pub productivity: usize,
    pub noise_papers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub correlation: Option<CorrelationTarget>,
    pub egos: Vec<PlantedEgo>,
}

impl GroundTruth {
    pub fn ego(&self, author_id: &str) -> Option<&PlantedEgo> {
        self.egos.iter().find(|e| e.author_id == author_id)
    }

    pub fn mean_circle_sizes(&self) -> [f64; CIRCLES] {
        let mut out = [0.0; CIRCLES];
        if self.egos.is_empty() {
            return out;
        }
        for e in &self.egos {
            for (o, &c) in out.iter_mut().zip(&e.circle_sizes) {
                *o += c as f64;
            }
        }
        out.map(|v| v / self.egos.len() as f64)
    }
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub corpus: Corpus,
    pub truth: GroundTruth,
    pub registry: LocationRegistry,
}

#[derive(Debug, Clone)]
struct Segment {
    start: Timeslot,
    affiliation: AffiliationRecord,
}

struct EgoPlan {
    id: String,
    start: Timeslot,
    end: Timeslot,
    ring_sizes: [usize; CIRCLES],
    ties: Vec<PlantedTie>,
    segments: Vec<Segment>,
    noise: Vec<(Timeslot, AffiliationRecord, AffiliationRecord)>,
    mandatory_papers: usize,
    normal_draw: f64,
    rng: ChaCha8Rng,
}

const COUNTRIES: [(&str, f64, f64); 10] = [
    ("IT", 42.5, 12.5),
    ("DE", 51.0, 10.0),
    ("FR", 46.5, 2.5),
    ("ES", 40.2, -3.7),
    ("GB", 52.5, -1.5),
    ("NL", 52.2, 5.3),
    ("CH", 46.8, 8.2),
    ("US", 39.0, -98.0),
    ("CA", 56.0, -106.0),
    ("JP", 36.2, 138.3),
];
const INSTITUTIONS_PER_COUNTRY: usize = 12;

fn random_institution(rng: &mut ChaCha8Rng, country: &str, not: Option<&str>) -> AffiliationRecord {
    loop {
        let k = rng.gen_range(0..INSTITUTIONS_PER_COUNTRY);
        let id = format!("{country}-U{k:02}");
        if Some(id.as_str()) != not {
            let city = format!("{country}-C{:02}", k / 2);
            return AffiliationRecord::located(id, Some(&city), Some(country));
        }
    }
}

/// Smallest paper count whose integer duration puts the strength in band,
/// falling back to the closest reachable value within tolerance.
fn solve_tie(target: f64, band: (f64, f64), max_months: i64) -> Option<(i64, i64)> {
    let mut best: Option<(f64, i64, i64)> = None;
    for m in 1..=MAX_SHARED_PAPERS {
        let exact = 12.0 * m as f64 / target;
        if exact.floor() as i64 > max_months + 1 && m > 1 {
            break;
        }
        for d in [exact.floor() as i64, exact.ceil() as i64] {
            if d < MIN_DURATION_MONTHS || d > max_months {
                continue;
            }
            let t = 12.0 * m as f64 / d as f64;
            if t >= band.0 && t <= band.1 {
                return Some((m, d));
            }
            let err = (t - target).abs() / target;
            if best.map_or(true, |b| err < b.0) {
                best = Some((err, m, d));
            }
        }
    }
    best.filter(|b| b.0 <= STRENGTH_TOLERANCE).map(|b| (b.1, b.2))
}

fn plan_segments(
    spec: &SynthSpec,
    index: usize,
    start: Timeslot,
    end: Timeslot,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Segment>, SynthError> {
    match &spec.mobility {
        MobilityPlan::Stationary => {
            let (cc, _, _) = COUNTRIES[rng.gen_range(0..COUNTRIES.len())];
            Ok(vec![Segment {
                start,
                affiliation: random_institution(rng, cc, None),
            }])
        }
        MobilityPlan::Random {
            max_moves,
            international_prob,
        } => {
            let months = start.months_until(end);
            let moves = (*max_moves).min(months as usize);
            let n = rng.gen_range(0..=moves);
            let mut offsets: Vec<i64> = (1..=months).collect::<Vec<_>>();
            offsets.shuffle(rng);
            let mut offsets: Vec<i64> = offsets.into_iter().take(n).collect();
            offsets.sort_unstable();

            let mut country = COUNTRIES[rng.gen_range(0..COUNTRIES.len())].0;
            let mut segments = vec![Segment {
                start,
                affiliation: random_institution(rng, country, None),
            }];
            for off in offsets {
                if rng.gen_bool(*international_prob) {
                    let others: Vec<&str> =
                        COUNTRIES.iter().map(|c| c.0).filter(|&c| c != country).collect();
                    country = others[rng.gen_range(0..others.len())];
                }
                let prev = segments.last().expect("non-empty").affiliation.institution_id.clone();
                segments.push(Segment {
                    start: start.add_months(off),
                    affiliation: random_institution(rng, country, Some(&prev)),
                });
            }
            Ok(segments)
        }
        MobilityPlan::Scripted(scripts) => {
            let script = &scripts[index % scripts.len()];
            let mut segments: Vec<Segment> = Vec::with_capacity(script.len());
            for (i, step) in script.iter().enumerate() {
                let at = if i == 0 { start } else { step.at };
                if i > 0 && (at <= segments[i - 1].start || at > end) {
                    return Err(SynthError::InvalidSpec(format!(
                        "script step {} at {} is outside the career ({start}..{end}) or out of order",
                        i + 1,
                        step.at
                    )));
                }
                let affiliation =
                    AffiliationRecord::located(&*step.institution, step.city.as_deref(), Some(&step.country));
                segments.push(Segment { start: at, affiliation });
            }
            Ok(segments)
        }
    }
}

fn plan_ego(spec: &SynthSpec, index: usize) -> Result<EgoPlan, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let id = format!("E{index:06}");

    let (lo, hi) = spec.career_years;
    let (lo_m, hi_m) = ((lo * 12.0).round() as i64, (hi * 12.0).round() as i64);
    let career_months = rng.gen_range(lo_m..=hi_m);
    let end = spec.end;
    let start = end.add_months(-career_months);

    let ring_sizes: [usize; CIRCLES] = match &spec.rings {
        RingPlan::Fixed(s) => *s,
        plan @ RingPlan::Poisson(_) => {
            let means = plan.ring_means();
            let mut sizes = [1; CIRCLES];
            for (s, &m) in sizes.iter_mut().zip(&means) {
                if m > 1.0 {
                    let draw: f64 = Poisson::new(m - 1.0).expect("positive mean").sample(&mut rng);
                    *s = 1 + draw as usize;
                }
            }
            sizes
        }
    };

    let mut ties = Vec::new();
    for (ring, &size) in ring_sizes.iter().enumerate() {
        let band = spec.bands[ring];
        for _ in 0..size {
            let target = if band.0 == band.1 { band.0 } else { rng.gen_range(band.0..=band.1) };
            let (m, d) = solve_tie(target, band, career_months).ok_or_else(|| SynthError::Infeasible {
                ego: id.clone(),
                ring: ring + 1,
                target,
            })?;
            ties.push(PlantedTie {
                alter_id: format!("{id}-A{:03}", ties.len()),
                ring: ring + 1,
                target,
                strength: 12.0 * m as f64 / d as f64,
                shared_papers: m as usize,
                duration_months: d,
            });
        }
    }

    let segments = plan_segments(spec, index, start, end, &mut rng)?;
    let mut noise = Vec::new();
    for w in 1..segments.len() {
        if spec.oscillation_prob > 0.0 && rng.gen_bool(spec.oscillation_prob) {
            // the visit is followed by a paper at the new institution so it
            // always reads as an oscillation
            let at = segments[w].start.add_months(1);
            let next = segments.get(w + 1).map_or(end.add_months(1), |s| s.start);
            if at.add_months(1) < next && at.add_months(1) <= end {
                noise.push((at, segments[w - 1].affiliation.clone(), segments[w].affiliation.clone()));
            }
        }
    }

    let shared: usize = ties.iter().map(|t| t.shared_papers).sum();
    // solo papers at career start, career end and each move
    let mandatory_papers = shared + 2 + (segments.len() - 1) + 2 * noise.len();
    let normal_draw: f64 = StandardNormal.sample(&mut rng);

    Ok(EgoPlan {
        id,
        start,
        end,
        ring_sizes,
        ties,
        segments,
        noise,
        mandatory_papers,
        normal_draw,
        rng,
    })
}

/// Extra solo-paper counts that give the planted productivity/circle
/// correlation: productivity is an affine image of r*x + sqrt(1-r^2)*e with
/// e orthogonalised against the circle sizes x.
fn planted_extras(plans: &[EgoPlan], target: CorrelationTarget) -> Result<Vec<usize>, SynthError> {
    let n = plans.len() as f64;
    let x: Vec<f64> = plans
        .iter()
        .map(|p| p.ring_sizes[..target.layer].iter().sum::<usize>() as f64)
        .collect();
    let e: Vec<f64> = plans.iter().map(|p| p.normal_draw).collect();
    let mx = x.iter().sum::<f64>() / n;
    let xc: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let sxx: f64 = xc.iter().map(|v| v * v).sum();
    if sxx <= 0.0 {
        return Err(SynthError::InvalidSpec(
            "correlation target needs varying circle sizes".into(),
        ));
    }
    let me = e.iter().sum::<f64>() / n;
    let ec: Vec<f64> = e.iter().map(|v| v - me).collect();
    let beta = xc.iter().zip(&ec).map(|(a, b)| a * b).sum::<f64>() / sxx;
    let resid: Vec<f64> = ec.iter().zip(&xc).map(|(b, a)| b - beta * a).collect();
    let see: f64 = resid.iter().map(|v| v * v).sum();
    if see <= 0.0 {
        return Err(SynthError::InvalidSpec("degenerate noise draw".into()));
    }
    let (sx, se) = ((sxx / (n - 1.0)).sqrt(), (see / (n - 1.0)).sqrt());
    let r = target.r;
    let z: Vec<f64> = xc
        .iter()
        .zip(&resid)
        .map(|(a, b)| target.productivity_sd * (r * a / sx + (1.0 - r * r).sqrt() * b / se))
        .collect();
    let offset = plans
        .iter()
        .zip(&z)
        .map(|(p, zi)| p.mandatory_papers as f64 - zi)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(plans
        .iter()
        .zip(&z)
        .map(|(p, zi)| (offset + zi - p.mandatory_papers as f64).round().max(0.0) as usize)
        .collect())
}

fn emit_ego(spec: &SynthSpec, mut plan: EgoPlan, extra: usize) -> (Vec<Publication>, PlantedEgo) {
    let rng = &mut plan.rng;
    let (start, end) = (plan.start, plan.end);
    let career_months = start.months_until(end);
    let segments = &plan.segments;
    let affiliation_at = |at: Timeslot| -> AffiliationRecord {
        segments
            .iter()
            .rev()
            .find(|s| s.start <= at)
            .unwrap_or(&segments[0])
            .affiliation
            .clone()
    };

    let mut papers = Vec::new();
    let mut push = |rng: &mut ChaCha8Rng, date: Timeslot, authors: Vec<Authorship>| {
        papers.push(Publication {
            paper_id: format!("{}-P{:05}", plan.id, papers.len()),
            date,
            citations: Some(rng.gen_range(0..=spec.citation_max)),
            authors,
        });
    };
    let solo = |aff: AffiliationRecord| vec![Authorship::new(plan.id.clone(), Some(aff))];

    push(rng, start, solo(affiliation_at(start)));
    push(rng, end, solo(affiliation_at(end)));
    for s in &segments[1..] {
        push(rng, s.start, solo(s.affiliation.clone()));
    }
    for (at, old, current) in &plan.noise {
        push(rng, *at, solo(old.clone()));
        push(rng, at.add_months(1), solo(current.clone()));
    }
    for tie in &plan.ties {
        let first = end.add_months(-tie.duration_months);
        for j in 0..tie.shared_papers {
            let at = if j == 0 {
                first
            } else {
                first.add_months(rng.gen_range(0..=tie.duration_months))
            };
            let aff = affiliation_at(at);
            push(
                rng,
                at,
                vec![
                    Authorship::new(plan.id.clone(), Some(aff.clone())),
                    Authorship::new(tie.alter_id.clone(), Some(aff)),
                ],
            );
        }
    }
    for _ in 0..extra {
        let at = start.add_months(rng.gen_range(0..=career_months));
        push(rng, at, solo(affiliation_at(at)));
    }

    let movements: Vec<PlantedMove> = segments
        .windows(2)
        .filter(|w| w[0].affiliation.institution_id != w[1].affiliation.institution_id)
        .map(|w| PlantedMove {
            at: w[1].start,
            from: w[0].affiliation.institution_id.clone(),
            to: w[1].affiliation.institution_id.clone(),
            cross_country: w[0].affiliation.country != w[1].affiliation.country,
        })
        .collect();
    let international = movements.iter().any(|m| m.cross_country);

    let mut circle_sizes = plan.ring_sizes;
    for i in 1..CIRCLES {
        circle_sizes[i] += circle_sizes[i - 1];
    }
    let truth = PlantedEgo {
        author_id: plan.id.clone(),
        career_start: start,
        career_end: end,
        stage: career_stage(start.years_until(end)).expect("end after start"),
        ring_sizes: plan.ring_sizes,
        circle_sizes,
        ties: plan.ties,
        movements,
        migration_status: if international {
            MigrationStatus::International
        } else {
            MigrationStatus::Domestic
        },
        productivity: papers.len(),
        noise_papers: plan.noise.len(),
    };
    (papers, truth)
}

fn build_registry(spec: &SynthSpec, papers: &[Publication]) -> Result<LocationRegistry, SynthError> {
    let mut known: BTreeMap<String, (AffiliationRecord, Option<(f64, f64)>)> = BTreeMap::new();
    if let MobilityPlan::Scripted(scripts) = &spec.mobility {
        for step in scripts.iter().flatten() {
            let rec = AffiliationRecord::located(&*step.institution, step.city.as_deref(), Some(&step.country));
            known.insert(step.institution.clone(), (rec, step.coords));
        }
    }
    for a in papers.iter().flat_map(|p| &p.authors) {
        if let Some(aff) = &a.affiliation {
            known.entry(aff.institution_id.clone()).or_insert_with(|| (aff.clone(), None));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(u64::MAX);
    let mut city_coords: BTreeMap<(Option<String>, Option<String>), (f64, f64)> = BTreeMap::new();
    let mut registry = LocationRegistry::new();
    for (id, (rec, coords)) in known {
        let (lat, lon) = match coords {
            Some(c) => c,
            None => *city_coords
                .entry((rec.country.clone(), rec.city.clone()))
                .or_insert_with(|| {
                    let anchor = COUNTRIES
                        .iter()
                        .find(|c| Some(c.0) == rec.country.as_deref())
                        .map(|c| (c.1, c.2))
                        .unwrap_or_else(|| (rng.gen_range(-60.0..60.0), rng.gen_range(-170.0..170.0)));
                    (anchor.0 + rng.gen_range(-1.5..1.5), anchor.1 + rng.gen_range(-1.5..1.5))
                }),
        };
        registry.insert(
            &id,
            Location {
                lat,
                lon,
                city: rec.city,
                country: rec.country,
            },
        )?;
    }
    Ok(registry)
}

/// Generates the corpus, its ground truth and a location registry covering
/// every institution. Output depends only on `spec`.
pub fn generate_corpus(spec: &SynthSpec) -> Result<Synthetic, SynthError> {
    spec.validate()?;
    let plans: Vec<EgoPlan> = (0..spec.n_authors)
        .into_par_iter()
        .map(|i| plan_ego(spec, i))
        .collect::<Result<_, _>>()?;

    let extras: Vec<usize> = match spec.correlation {
        Some(target) => planted_extras(&plans, target)?,
        None => plans
            .iter()
            .map(|p| {
                let mut rng = p.rng.clone();
                rng.gen_range(spec.extra_solo_papers.0..=spec.extra_solo_papers.1)
            })
            .collect(),
    };

    let emitted: Vec<(Vec<Publication>, PlantedEgo)> = plans
        .into_par_iter()
        .zip(extras)
        .map(|(plan, extra)| emit_ego(spec, plan, extra))
        .collect();

    let mut publications = Vec::new();
    let mut egos = Vec::with_capacity(emitted.len());
    for (papers, truth) in emitted {
        publications.extend(papers);
        egos.push(truth);
    }
    let registry = build_registry(spec, &publications)?;
    let corpus = Corpus::from_publications(publications)?;
    Ok(Synthetic {
        corpus,
        truth: GroundTruth {
            seed: spec.seed,
            correlation: spec.correlation,
            egos,
        },
        registry,
    })
}

/// Writes the corpus in the ingestion JSONL schema, ordered by paper id.
pub fn write_jsonl<W: Write>(corpus: &Corpus, writer: W) -> Result<(), SynthError> {
    Ok(crate::corpus::write_jsonl(corpus, writer)?)
}

pub fn write_truth_json<W: Write>(truth: &GroundTruth, mut writer: W) -> Result<(), SynthError> {
    serde_json::to_writer_pretty(&mut writer, truth)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Institutions visited by a planted ego, in order of first visit.
pub fn planted_institutions(ego: &PlantedEgo) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let first = ego.movements.first().map(|m| m.from.clone());
    for id in first.into_iter().chain(ego.movements.iter().map(|m| m.to.clone())) {
        if seen.insert(id.clone()) {
            out.push(id);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egonet::{build_ego_network, EgoConfig};
    use crate::mobility::{author_mobility, MobilityConfig};

    fn step(at: &str, inst: &str, country: &str) -> ScriptStep {
        ScriptStep {
            at: at.parse().unwrap(),
            institution: inst.into(),
            country: country.into(),
            city: None,
            coords: None,
        }
    }

    fn exact_spec() -> SynthSpec {
        SynthSpec {
            n_authors: 1,
            rings: RingPlan::Fixed([1; CIRCLES]),
            bands: [(8.0, 8.0), (4.0, 4.0), (2.0, 2.0), (1.0, 1.0), (0.5, 0.5)],
            mobility: MobilityPlan::Stationary,
            ..SynthSpec::default()
        }
    }

    #[test]
    fn single_ego_exact_rings() {
        let s = generate_corpus(&exact_spec()).unwrap();
        let ego = &s.truth.egos[0];
        let net = build_ego_network(&s.corpus, &ego.author_id, &EgoConfig::default()).unwrap();
        assert!(net.complete);
        assert_eq!(net.ring_sizes, [1; CIRCLES]);
        for tie in &net.ties {
            let planted = ego.ties.iter().find(|t| t.alter_id == tie.alter_id).unwrap();
            assert_eq!(tie.ring, planted.ring);
            assert!((tie.strength - planted.strength).abs() < 1e-12);
            assert!((tie.strength - planted.target).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_tie_hits_band() {
        assert_eq!(solve_tie(8.0, (8.0, 8.0), 200), Some((4, 6)));
        assert_eq!(solve_tie(0.5, (0.5, 0.5), 200), Some((1, 24)));
        let (m, d) = solve_tie(1.6, (1.536, 1.664), 200).unwrap();
        let t = 12.0 * m as f64 / d as f64;
        assert!((1.536..=1.664).contains(&t));
        // too weak for the career length
        assert_eq!(solve_tie(0.01, (0.01, 0.01), 120), None);
    }

    #[test]
    fn infeasible_band_reported() {
        let spec = SynthSpec {
            career_years: (1.0, 1.0),
            bands: [(8.0, 8.0), (4.0, 4.0), (2.0, 2.0), (1.0, 1.0), (0.05, 0.05)],
            ..exact_spec()
        };
        assert!(matches!(generate_corpus(&spec), Err(SynthError::Infeasible { ring: 5, .. })));
    }

    #[test]
    fn invalid_bands_rejected() {
        let spec = SynthSpec {
            bands: [(1.0, 2.0), (1.5, 1.8), (0.4, 0.5), (0.2, 0.3), (0.1, 0.15)],
            ..SynthSpec::default()
        };
        assert!(matches!(spec.validate(), Err(SynthError::InvalidSpec(_))));
    }

    #[test]
    fn scripted_international_move() {
        let spec = SynthSpec {
            mobility: MobilityPlan::Scripted(vec![vec![
                step("2000-01", "unipi", "IT"),
                step("2015-06", "tum", "DE"),
            ]]),
            career_years: (20.0, 20.0),
            ..exact_spec()
        };
        let s = generate_corpus(&spec).unwrap();
        let ego = &s.truth.egos[0];
        assert_eq!(ego.migration_status, MigrationStatus::International);
        let (_, moves, profile) =
            author_mobility(&s.corpus, &ego.author_id, &s.registry, &MobilityConfig::default()).unwrap();
        assert_eq!(profile.migration_status, MigrationStatus::International);
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].at, "2015-06".parse().unwrap());
        assert!(moves[0].distance_km.is_some());
    }

    #[test]
    fn random_mobility_round_trip() {
        let spec = SynthSpec {
            n_authors: 60,
            ..SynthSpec::default()
        };
        let s = generate_corpus(&spec).unwrap();
        for ego in &s.truth.egos {
            let (_, moves, _) =
                author_mobility(&s.corpus, &ego.author_id, &s.registry, &MobilityConfig::default()).unwrap();
            let got: Vec<(Timeslot, &str, &str)> = moves
                .iter()
                .map(|m| (m.at, m.from.institution_id.as_str(), m.to.institution_id.as_str()))
                .collect();
            let want: Vec<(Timeslot, &str, &str)> =
                ego.movements.iter().map(|m| (m.at, m.from.as_str(), m.to.as_str())).collect();
            assert_eq!(got, want, "{}", ego.author_id);
        }
    }

    #[test]
    fn deterministic_bytes() {
        let spec = SynthSpec {
            n_authors: 20,
            ..SynthSpec::default()
        };
        let render = || {
            let s = generate_corpus(&spec).unwrap();
            let (mut a, mut b) = (Vec::new(), Vec::new());
            write_jsonl(&s.corpus, &mut a).unwrap();
            write_truth_json(&s.truth, &mut b).unwrap();
            (a, b)
        };
        assert_eq!(render(), render());
    }

    #[test]
    fn jsonl_reingests() {
        let s = generate_corpus(&SynthSpec {
            n_authors: 5,
            ..SynthSpec::default()
        })
        .unwrap();
        let mut buf = Vec::new();
        write_jsonl(&s.corpus, &mut buf).unwrap();
        let out = crate::corpus::load_corpus_from_reader(&buf[..], &Default::default()).unwrap();
        assert!(out.skipped.is_empty());
        assert_eq!(out.corpus.publication_count(), s.corpus.publication_count());
        for ego in &s.truth.egos {
            assert_eq!(out.corpus.author(&ego.author_id).unwrap().productivity, ego.productivity);
        }
    }

    #[test]
    fn planted_correlation() {
        let spec = SynthSpec {
            n_authors: 400,
            correlation: Some(CorrelationTarget {
                layer: 5,
                r: 0.8,
                productivity_sd: 40.0,
            }),
            ..SynthSpec::default()
        };
        let s = generate_corpus(&spec).unwrap();
        let x: Vec<f64> = s.truth.egos.iter().map(|e| e.circle_sizes[4] as f64).collect();
        let y: Vec<f64> = s.truth.egos.iter().map(|e| e.productivity as f64).collect();
        let r = crate::stats::pearson(&x, &y).unwrap();
        assert!((r - 0.8).abs() < 0.01, "{r}");
    }

    #[test]
    fn oscillation_noise_is_smoothed() {
        let spec = SynthSpec {
            n_authors: 40,
            oscillation_prob: 1.0,
            mobility: MobilityPlan::Random {
                max_moves: 2,
                international_prob: 0.5,
            },
            ..SynthSpec::default()
        };
        let s = generate_corpus(&spec).unwrap();
        assert!(s.truth.egos.iter().any(|e| e.noise_papers > 0));
        for ego in s.truth.egos.iter().filter(|e| e.noise_papers > 0) {
            let smooth = MobilityConfig { smooth_slots: 1 };
            let (_, moves, _) = author_mobility(&s.corpus, &ego.author_id, &s.registry, &smooth).unwrap();
            let got: Vec<Timeslot> = moves.iter().map(|m| m.at).collect();
            let want: Vec<Timeslot> = ego.movements.iter().map(|m| m.at).collect();
            assert_eq!(got, want, "{}", ego.author_id);
        }
    }
}
