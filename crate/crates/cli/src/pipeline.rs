//! Pipeline stages. Each stage reads what it needs from the configured inputs
//! or from artifacts of earlier stages in the output directory, and writes
//! flat CSV/JSON files back there.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use egocircles::corpus::{load_corpus, write_jsonl, CareerStage, Corpus, IngestConfig, ResearchArea};
use egocircles::egonet::{build_ego_network, circle_stats, circle_stats_for, CircleStats, EgoError, CIRCLES};
use egocircles::mobility::{author_mobility, LocationRegistry, MigrationStatus, MobilityConfig, MobilityError};
use egocircles::stats::{correlation_table, write_report_csv, AnalysisRecord, StatsError};
use egocircles::synth::{generate_corpus, write_truth_json, SynthSpec};
use egocircles::EgoNetwork;
use log::info;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const INGEST_SUMMARY_FILE: &str = "ingest_summary.json";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const EGONETS_FILE: &str = "egonets.csv";
pub const TIES_FILE: &str = "ties.csv";
pub const CIRCLE_STATS_FILE: &str = "circle_stats.csv";
pub const OPTIMAL_K_FILE: &str = "optimal_k_hist.csv";
pub const MOBILITY_FILE: &str = "mobility.csv";
pub const MOVEMENTS_FILE: &str = "movements.csv";
pub const REPORT_FILE: &str = "correlation_report.csv";
pub const SUMMARY_FILE: &str = "report.txt";

pub const SYNTH_CORPUS_FILE: &str = "synth_corpus.jsonl";
pub const SYNTH_TRUTH_FILE: &str = "ground_truth.json";
pub const SYNTH_REGISTRY_FILE: &str = "registry.csv";

fn out(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.output_dir.join(name)
}

fn require(path: PathBuf) -> Result<PathBuf, CliError> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(CliError::MissingArtifact(path))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn csv_out(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    Ok(csv::Writer::from_writer(create(path)?))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::io(path, e)
}

fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    rdr.deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Loads the filtered corpus written by `ingest`.
pub fn load_stage_corpus(cfg: &RunConfig) -> Result<Corpus, CliError> {
    let path = require(out(cfg, CORPUS_FILE))?;
    let loaded = load_corpus(
        &path,
        &IngestConfig {
            strict: true,
            max_authors: cfg.ingest.max_authors,
        },
    )?;
    Ok(loaded.corpus)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub lines_read: usize,
    pub skipped_lines: usize,
    pub papers_loaded: usize,
    pub papers_dropped: usize,
    pub papers_kept: usize,
    pub authors: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileRow {
    pub author_id: String,
    pub career_start: String,
    pub career_end: String,
    pub career_length_years: f64,
    pub stage: CareerStage,
    pub productivity: usize,
    pub h_index: u32,
    /// Area codes joined with `;`.
    pub research_areas: String,
}

pub fn ingest(cfg: &RunConfig) -> Result<IngestSummary, CliError> {
    let input = cfg
        .corpus
        .as_deref()
        .ok_or_else(|| CliError::Config("no corpus input: set `corpus` or pass --corpus".into()))?;
    let loaded = load_corpus(
        input,
        &IngestConfig {
            strict: cfg.ingest.strict,
            max_authors: cfg.ingest.max_authors,
        },
    )?;
    let kept = loaded.corpus.filter_large_papers(cfg.ingest.max_authors)?;

    let path = out(cfg, CORPUS_FILE);
    write_jsonl(&kept, create(&path)?).map_err(|e| CliError::io(&path, e))?;

    let path = out(cfg, PROFILES_FILE);
    let mut w = csv_out(&path)?;
    for p in kept.authors() {
        w.serialize(ProfileRow {
            author_id: p.author_id.clone(),
            career_start: p.career_start.to_string(),
            career_end: p.career_end.to_string(),
            career_length_years: p.career_length_years,
            stage: p.career_stage,
            productivity: p.productivity,
            h_index: p.h_index,
            research_areas: p.research_areas.iter().map(|a| a.code()).collect::<Vec<_>>().join(";"),
        })
        .map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let summary = IngestSummary {
        lines_read: loaded.lines_read,
        skipped_lines: loaded.skipped.len(),
        papers_loaded: loaded.corpus.publication_count(),
        papers_dropped: loaded.corpus.publication_count() - kept.publication_count(),
        papers_kept: kept.publication_count(),
        authors: kept.author_count(),
    };
    let path = out(cfg, INGEST_SUMMARY_FILE);
    let mut f = create(&path)?;
    serde_json::to_writer_pretty(&mut f, &summary).map_err(|e| CliError::io(&path, e))?;
    f.write_all(b"\n").and_then(|_| f.flush()).map_err(|e| CliError::io(&path, e))?;
    info!("ingest: {summary:?}");
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgonetSummary {
    pub authors: usize,
    pub with_alters: usize,
    pub complete: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EgonetRow {
    pub author_id: String,
    pub stage: CareerStage,
    pub n_alters: usize,
    pub optimal_k: usize,
    pub complete: bool,
    pub ring1: usize,
    pub ring2: usize,
    pub ring3: usize,
    pub ring4: usize,
    pub ring5: usize,
    pub circle1: usize,
    pub circle2: usize,
    pub circle3: usize,
    pub circle4: usize,
    pub circle5: usize,
}

impl EgonetRow {
    pub fn circle_sizes(&self) -> [usize; CIRCLES] {
        [self.circle1, self.circle2, self.circle3, self.circle4, self.circle5]
    }

    pub fn ring_sizes(&self) -> [usize; CIRCLES] {
        [self.ring1, self.ring2, self.ring3, self.ring4, self.ring5]
    }
}

fn circle_stats_record(label: &str, s: &CircleStats) -> Vec<String> {
    let mut rec = vec![label.to_owned(), s.networks.to_string()];
    rec.extend(s.mean_circle_sizes.iter().map(|v| v.to_string()));
    rec.extend(s.scaling_ratios.iter().map(|&v| opt(v)));
    rec
}

pub fn egonet(cfg: &RunConfig) -> Result<EgonetSummary, CliError> {
    let corpus = load_stage_corpus(cfg)?;
    let ego_cfg = cfg.ego_config();
    let authors: Vec<_> = corpus.authors().collect();
    let nets: Vec<Option<EgoNetwork>> = authors
        .par_iter()
        .map(|a| match build_ego_network(&corpus, &a.author_id, &ego_cfg) {
            Ok(n) => Ok(Some(n)),
            Err(EgoError::NoEligibleAlters(_)) => Ok(None),
            Err(e) => Err(CliError::Runtime(e.to_string())),
        })
        .collect::<Result<_, _>>()?;

    let path = out(cfg, EGONETS_FILE);
    let mut w = csv_out(&path)?;
    for (a, net) in authors.iter().zip(&nets) {
        let (rings, circles, k, complete, n) = match net {
            Some(n) => (n.ring_sizes, n.circle_sizes, n.optimal_k, n.complete, n.size()),
            None => ([0; CIRCLES], [0; CIRCLES], 0, false, 0),
        };
        w.serialize(EgonetRow {
            author_id: a.author_id.clone(),
            stage: a.career_stage,
            n_alters: n,
            optimal_k: k,
            complete,
            ring1: rings[0],
            ring2: rings[1],
            ring3: rings[2],
            ring4: rings[3],
            ring5: rings[4],
            circle1: circles[0],
            circle2: circles[1],
            circle3: circles[2],
            circle4: circles[3],
            circle5: circles[4],
        })
        .map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let path = out(cfg, TIES_FILE);
    let mut w = csv_out(&path)?;
    w.write_record(["ego_id", "alter_id", "strength", "duration_years", "shared_papers", "ring"])
        .map_err(csv_err(&path))?;
    for t in nets.iter().flatten().flat_map(|n| &n.ties) {
        w.write_record([
            t.ego_id.clone(),
            t.alter_id.clone(),
            t.strength.to_string(),
            t.duration_years.to_string(),
            t.shared_paper_count.to_string(),
            t.ring.to_string(),
        ])
        .map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let with_stage: Vec<(CareerStage, &EgoNetwork)> = authors
        .iter()
        .zip(&nets)
        .filter_map(|(a, n)| n.as_ref().map(|n| (a.career_stage, n)))
        .collect();
    let complete: Vec<[usize; CIRCLES]> =
        with_stage.iter().filter(|(_, n)| n.complete).map(|(_, n)| n.circle_sizes).collect();

    let path = out(cfg, CIRCLE_STATS_FILE);
    let mut w = csv_out(&path)?;
    w.write_record([
        "stage", "networks", "circle1", "circle2", "circle3", "circle4", "circle5", "ratio21", "ratio32",
        "ratio43", "ratio54",
    ])
    .map_err(csv_err(&path))?;
    if let Ok(all) = circle_stats_for(&complete) {
        w.write_record(circle_stats_record("all", &all)).map_err(csv_err(&path))?;
    }
    for (stage, s) in circle_stats(with_stage.iter().copied()) {
        w.write_record(circle_stats_record(stage.label(), &s)).map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let mut hist: BTreeMap<(Option<CareerStage>, usize), usize> = BTreeMap::new();
    for (stage, n) in &with_stage {
        *hist.entry((None, n.optimal_k)).or_default() += 1;
        *hist.entry((Some(*stage), n.optimal_k)).or_default() += 1;
    }
    let path = out(cfg, OPTIMAL_K_FILE);
    let mut w = csv_out(&path)?;
    w.write_record(["stage", "optimal_k", "count"]).map_err(csv_err(&path))?;
    for ((stage, k), count) in hist {
        w.write_record([stage.map_or("all", CareerStage::label), &k.to_string(), &count.to_string()])
            .map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let summary = EgonetSummary {
        authors: authors.len(),
        with_alters: with_stage.len(),
        complete: complete.len(),
    };
    info!("egonet: {summary:?}");
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobilitySummary {
    pub authors: usize,
    pub with_affiliations: usize,
    pub international: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MobilityRow {
    pub author_id: String,
    pub n_institutions: usize,
    pub n_cities: usize,
    pub n_countries: usize,
    pub n_movements: usize,
    pub unresolved_distances: usize,
    pub avg_distance_km: f64,
    pub cumulative_distance_km: f64,
    pub status: MigrationStatus,
}

pub fn load_registry(cfg: &RunConfig) -> Result<LocationRegistry, CliError> {
    match &cfg.registry {
        Some(p) => Ok(LocationRegistry::from_csv_path(p)?),
        None => Ok(LocationRegistry::new()),
    }
}

pub fn mobility(cfg: &RunConfig) -> Result<MobilitySummary, CliError> {
    let corpus = load_stage_corpus(cfg)?;
    let registry = load_registry(cfg)?;
    let mob_cfg = MobilityConfig {
        smooth_slots: cfg.mobility.smooth_slots,
    };
    let ids: Vec<&str> = corpus.author_ids().collect();
    let results: Vec<Option<_>> = ids
        .par_iter()
        .map(|id| match author_mobility(&corpus, id, &registry, &mob_cfg) {
            Ok((_, moves, profile)) => Ok(Some((moves, profile))),
            Err(MobilityError::NoAffiliationData(_)) => Ok(None),
            Err(e) => Err(CliError::Runtime(e.to_string())),
        })
        .collect::<Result<_, _>>()?;

    let path = out(cfg, MOBILITY_FILE);
    let mut w = csv_out(&path)?;
    for (_, p) in results.iter().flatten() {
        w.serialize(MobilityRow {
            author_id: p.author_id.clone(),
            n_institutions: p.n_institutions,
            n_cities: p.n_cities,
            n_countries: p.n_countries,
            n_movements: p.n_movements,
            unresolved_distances: p.unresolved_distances,
            avg_distance_km: p.avg_distance_km,
            cumulative_distance_km: p.cumulative_distance_km,
            status: p.migration_status,
        })
        .map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let path = out(cfg, MOVEMENTS_FILE);
    let mut w = csv_out(&path)?;
    w.write_record(["author_id", "at", "from", "to", "distance_km", "cross_country"])
        .map_err(csv_err(&path))?;
    for (id, (moves, _)) in ids.iter().zip(&results).filter_map(|(id, r)| r.as_ref().map(|r| (id, r))) {
        for m in moves {
            w.write_record([
                id.to_string(),
                m.at.to_string(),
                m.from.institution_id.clone(),
                m.to.institution_id.clone(),
                opt(m.distance_km),
                m.cross_country.to_string(),
            ])
            .map_err(csv_err(&path))?;
        }
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let profiles: Vec<_> = results.iter().flatten().map(|(_, p)| p).collect();
    let summary = MobilitySummary {
        authors: ids.len(),
        with_affiliations: profiles.len(),
        international: profiles
            .iter()
            .filter(|p| p.migration_status == MigrationStatus::International)
            .count(),
    };
    info!("mobility: {summary:?}");
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeSummary {
    pub records: usize,
    pub cells: usize,
    pub suppressed: usize,
}

/// Counts per `[k * width, (k + 1) * width)` bin, empty bins included.
pub fn histogram(values: &[f64], width: f64) -> Vec<(f64, f64, usize)> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for v in values.iter().filter(|v| v.is_finite()) {
        *counts.entry((v / width).floor() as i64).or_default() += 1;
    }
    let (Some(&lo), Some(&hi)) = (counts.keys().next(), counts.keys().next_back()) else {
        return Vec::new();
    };
    (lo..=hi)
        .map(|k| (k as f64 * width, (k + 1) as f64 * width, counts.get(&k).copied().unwrap_or(0)))
        .collect()
}

fn write_histogram(path: &Path, values: &[f64], width: f64) -> Result<(), CliError> {
    let mut w = csv_out(path)?;
    w.write_record(["bin_low", "bin_high", "count"]).map_err(csv_err(path))?;
    for (lo, hi, c) in histogram(values, width) {
        w.write_record([lo.to_string(), hi.to_string(), c.to_string()])
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Builds analysis records for complete egos with mobility data.
pub fn analysis_records(cfg: &RunConfig) -> Result<(Vec<AnalysisRecord>, Vec<ProfileRow>, Vec<MobilityRow>), CliError> {
    let profiles: Vec<ProfileRow> = read_rows(&require(out(cfg, PROFILES_FILE))?)?;
    let egonets: Vec<EgonetRow> = read_rows(&require(out(cfg, EGONETS_FILE))?)?;
    let mobility: Vec<MobilityRow> = read_rows(&require(out(cfg, MOBILITY_FILE))?)?;
    let by_profile: BTreeMap<&str, &ProfileRow> = profiles.iter().map(|p| (p.author_id.as_str(), p)).collect();
    let by_mobility: BTreeMap<&str, &MobilityRow> = mobility.iter().map(|m| (m.author_id.as_str(), m)).collect();

    let mut records = Vec::new();
    for e in egonets.iter().filter(|e| e.complete) {
        let (Some(p), Some(m)) = (by_profile.get(e.author_id.as_str()), by_mobility.get(e.author_id.as_str())) else {
            continue;
        };
        records.push(AnalysisRecord {
            author_id: e.author_id.clone(),
            stage: p.stage,
            status: m.status,
            circle_sizes: e.circle_sizes(),
            productivity: p.productivity as f64,
            impact: p.h_index as f64,
            mobility: m.n_movements as f64,
            career_length: p.career_length_years,
        });
    }
    let keep: std::collections::BTreeSet<String> = records.iter().map(|r| r.author_id.clone()).collect();
    let profiles = profiles.into_iter().filter(|p| keep.contains(&p.author_id)).collect();
    let mobility = mobility.into_iter().filter(|m| keep.contains(&m.author_id)).collect();
    Ok((records, profiles, mobility))
}

pub fn analyze(cfg: &RunConfig) -> Result<AnalyzeSummary, CliError> {
    let (records, profiles, mobility) = analysis_records(cfg)?;
    let cells = correlation_table(&records, &cfg.plan()).map_err(|e| match e {
        StatsError::InvalidInput(m) => CliError::Config(m),
        e => CliError::Runtime(e.to_string()),
    })?;
    let path = out(cfg, REPORT_FILE);
    write_report_csv(&cells, create(&path)?).map_err(csv_err(&path))?;

    let mut areas: BTreeMap<ResearchArea, usize> = BTreeMap::new();
    for p in &profiles {
        for code in p.research_areas.split(';').filter(|c| !c.is_empty()) {
            let area: ResearchArea = code
                .parse()
                .map_err(|e| CliError::Schema(format!("{PROFILES_FILE}: {e}")))?;
            *areas.entry(area).or_default() += 1;
        }
    }
    let path = out(cfg, "hist_research_areas.csv");
    let mut w = csv_out(&path)?;
    w.write_record(["area", "authors"]).map_err(csv_err(&path))?;
    for (a, c) in areas {
        w.write_record([a.code().to_string(), c.to_string()]).map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;

    let col = |f: &dyn Fn(&ProfileRow) -> f64| profiles.iter().map(f).collect::<Vec<f64>>();
    write_histogram(&out(cfg, "hist_career_length.csv"), &col(&|p| p.career_length_years), 1.0)?;
    write_histogram(&out(cfg, "hist_h_index.csv"), &col(&|p| p.h_index as f64), 1.0)?;
    write_histogram(&out(cfg, "hist_productivity.csv"), &col(&|p| p.productivity as f64), 10.0)?;
    let movements: Vec<f64> = mobility.iter().map(|m| m.n_movements as f64).collect();
    write_histogram(&out(cfg, "hist_movements.csv"), &movements, 1.0)?;
    let distances: Vec<f64> = mobility
        .iter()
        .filter(|m| m.n_movements > m.unresolved_distances)
        .map(|m| m.avg_distance_km)
        .collect();
    write_histogram(&out(cfg, "hist_avg_distance.csv"), &distances, 100.0)?;

    let summary = AnalyzeSummary {
        records: records.len(),
        cells: cells.len(),
        suppressed: cells.iter().filter(|c| c.suppressed.is_some()).count(),
    };
    info!("analyze: {summary:?}");
    Ok(summary)
}

#[derive(Debug, Deserialize)]
struct CircleStatsRow {
    stage: String,
    networks: usize,
    circle1: f64,
    circle2: f64,
    circle3: f64,
    circle4: f64,
    circle5: f64,
    ratio21: Option<f64>,
    ratio32: Option<f64>,
    ratio43: Option<f64>,
    ratio54: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct ReportRow {
    group: String,
    layer: usize,
    metric: String,
    n: usize,
    r: Option<f64>,
    r_corrected: Option<f64>,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    suppressed: String,
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), |x| format!("{x:.2}"))
}

/// Plain-text tables of circle statistics and of the whole-population
/// correlations, written to `report.txt` and returned.
pub fn report(cfg: &RunConfig) -> Result<String, CliError> {
    let stats: Vec<CircleStatsRow> = read_rows(&require(out(cfg, CIRCLE_STATS_FILE))?)?;
    let cells: Vec<ReportRow> = read_rows(&require(out(cfg, REPORT_FILE))?)?;

    let mut s = String::new();
    let _ = writeln!(s, "Mean circle size and scaling ratio (complete ego networks)\n");
    let _ = writeln!(
        s,
        "{:<12}{:>9}{:>8}{:>8}{:>8}{:>8}{:>8}{:>7}{:>7}{:>7}{:>7}",
        "stage", "egos", "C1", "C2", "C3", "C4", "C5", "C2/C1", "C3/C2", "C4/C3", "C5/C4"
    );
    for r in &stats {
        let _ = writeln!(
            s,
            "{:<12}{:>9}{:>8.1}{:>8.1}{:>8.1}{:>8.1}{:>8.1}{:>7}{:>7}{:>7}{:>7}",
            r.stage,
            r.networks,
            r.circle1,
            r.circle2,
            r.circle3,
            r.circle4,
            r.circle5,
            cell(r.ratio21),
            cell(r.ratio32),
            cell(r.ratio43),
            cell(r.ratio54)
        );
    }

    let _ = writeln!(s, "\nCorrelation with circle size, all authors (r [ci_low, ci_high])\n");
    let all: Vec<&ReportRow> = cells.iter().filter(|c| c.group == "all/all/all").collect();
    let metrics: Vec<&str> = {
        let mut m: Vec<&str> = all.iter().map(|c| c.metric.as_str()).collect();
        m.dedup();
        m.sort_unstable();
        m.dedup();
        m
    };
    let _ = write!(s, "{:<6}", "layer");
    for m in &metrics {
        let _ = write!(s, "{m:>26}");
    }
    let _ = writeln!(s);
    for layer in 1..=CIRCLES {
        let _ = write!(s, "C{layer:<5}");
        for m in &metrics {
            let text = match all.iter().find(|c| c.layer == layer && c.metric == *m) {
                Some(c) if c.suppressed == "none" => {
                    format!("{} [{}, {}]", cell(c.r), cell(c.ci_low), cell(c.ci_high))
                }
                Some(c) => format!("({}, n={})", c.suppressed, c.n),
                None => "-".into(),
            };
            let _ = write!(s, "{text:>26}");
        }
        let _ = writeln!(s);
    }
    let suppressed = cells.iter().filter(|c| c.suppressed != "none").count();
    let corrected = cells.iter().filter(|c| c.r_corrected.is_some()).count();
    let _ = writeln!(
        s,
        "\n{} cells, {} suppressed, {} with range-restriction correction",
        cells.len(),
        suppressed,
        corrected
    );

    let path = out(cfg, SUMMARY_FILE);
    let mut f = create(&path)?;
    f.write_all(s.as_bytes()).and_then(|_| f.flush()).map_err(|e| CliError::io(&path, e))?;
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub ingest: IngestSummary,
    pub egonet: EgonetSummary,
    pub mobility: MobilitySummary,
    pub analyze: AnalyzeSummary,
}

/// ingest, egonet, mobility, analyze and report in sequence.
pub fn run_all(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let summary = RunSummary {
        ingest: ingest(cfg)?,
        egonet: egonet(cfg)?,
        mobility: mobility(cfg)?,
        analyze: analyze(cfg)?,
    };
    report(cfg)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSummary {
    pub egos: usize,
    pub authors: usize,
    pub publications: usize,
    pub institutions: usize,
}

/// Writes the synthetic corpus, its ground truth and the location registry
/// into `dir`.
pub fn synth(spec: &SynthSpec, dir: &Path) -> Result<SynthSummary, CliError> {
    let s = generate_corpus(spec)?;
    let path = dir.join(SYNTH_CORPUS_FILE);
    write_jsonl(&s.corpus, create(&path)?).map_err(|e| CliError::io(&path, e))?;
    let path = dir.join(SYNTH_TRUTH_FILE);
    write_truth_json(&s.truth, create(&path)?)?;
    let path = dir.join(SYNTH_REGISTRY_FILE);
    s.registry.write_csv(create(&path)?)?;
    Ok(SynthSummary {
        egos: s.truth.egos.len(),
        authors: s.corpus.author_count(),
        publications: s.corpus.publication_count(),
        institutions: s.registry.len(),
    })
}
