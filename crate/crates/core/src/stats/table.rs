//! The correlation grid: career stage x migration status x top/regular split
//! x circle x metric.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{
    bca_pearson_multi, pearson, percentile_split, sample_sd, thorndike_case2, thorndike_case3,
    BootstrapConfig, StatsError,
};
use crate::corpus::CareerStage;
use crate::egonet::CIRCLES;
use crate::mobility::MigrationStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Metric {
    Productivity,
    Impact,
    Mobility,
    CareerLength,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Productivity,
        Metric::Impact,
        Metric::Mobility,
        Metric::CareerLength,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Metric::Productivity => "productivity",
            Metric::Impact => "impact",
            Metric::Mobility => "mobility",
            Metric::CareerLength => "career_length",
        }
    }

    fn column(self) -> usize {
        CIRCLES + self as usize
    }
}

/// Variables used to single out top performers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SplitVar {
    Productivity,
    Impact,
    Mobility,
}

impl SplitVar {
    pub const ALL: [SplitVar; 3] = [SplitVar::Productivity, SplitVar::Impact, SplitVar::Mobility];

    pub fn metric(self) -> Metric {
        match self {
            SplitVar::Productivity => Metric::Productivity,
            SplitVar::Impact => Metric::Impact,
            SplitVar::Mobility => Metric::Mobility,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    All,
    Top(SplitVar),
    Regular(SplitVar),
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::All => f.write_str("all"),
            Side::Top(v) => write!(f, "top_{}", v.metric().label()),
            Side::Regular(v) => write!(f, "regular_{}", v.metric().label()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suppression {
    SmallGroup,
    ZeroVariance,
    Undefined,
}

impl Suppression {
    pub fn label(self) -> &'static str {
        match self {
            Suppression::SmallGroup => "small_group",
            Suppression::ZeroVariance => "zero_variance",
            Suppression::Undefined => "undefined",
        }
    }
}

/// One author's row of analysis variables (complete ego networks only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub author_id: String,
    pub stage: CareerStage,
    pub status: MigrationStatus,
    pub circle_sizes: [usize; CIRCLES],
    pub productivity: f64,
    pub impact: f64,
    /// Number of institution changes.
    pub mobility: f64,
    pub career_length: f64,
}

impl AnalysisRecord {
    pub fn metric(&self, m: Metric) -> f64 {
        match m {
            Metric::Productivity => self.productivity,
            Metric::Impact => self.impact,
            Metric::Mobility => self.mobility,
            Metric::CareerLength => self.career_length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisPlan {
    /// Percentile separating top performers from the rest.
    pub percentile: f64,
    pub bootstrap: BootstrapConfig,
    pub min_group_size: usize,
}

impl Default for AnalysisPlan {
    fn default() -> Self {
        Self {
            percentile: 0.9,
            bootstrap: BootstrapConfig::default(),
            min_group_size: 150,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCell {
    pub stage: Option<CareerStage>,
    pub status: Option<MigrationStatus>,
    pub side: Side,
    /// 1-based circle index.
    pub layer: usize,
    pub metric: Metric,
    pub n: usize,
    pub r: Option<f64>,
    pub r_corrected: Option<f64>,
    pub ci: Option<(f64, f64)>,
    pub suppressed: Option<Suppression>,
}

impl CorrelationCell {
    pub fn stage_label(&self) -> &'static str {
        self.stage.map_or("all", CareerStage::label)
    }

    pub fn status_label(&self) -> &'static str {
        self.status.map_or("all", MigrationStatus::label)
    }

    pub fn group_label(&self) -> String {
        format!("{}/{}/{}", self.stage_label(), self.status_label(), self.side)
    }
}

/// Seed of the `index`-th bootstrap batch (splitmix64 finaliser).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn column_values(records: &[&AnalysisRecord], column: usize) -> Vec<f64> {
    records
        .iter()
        .map(|r| {
            if column < CIRCLES {
                r.circle_sizes[column] as f64
            } else {
                r.metric(Metric::ALL[column - CIRCLES])
            }
        })
        .collect()
}

fn corrected(
    side: Side,
    group: &[&AnalysisRecord],
    members: &[&AnalysisRecord],
    layer: usize,
    metric: Metric,
    r: f64,
) -> Option<f64> {
    let var = match side {
        Side::All => return None,
        Side::Top(v) | Side::Regular(v) => v.metric(),
    };
    let z_full = column_values(group, var.column());
    let z_side = column_values(members, var.column());
    let u = sample_sd(&z_full)? / sample_sd(&z_side)?;
    if !(u.is_finite() && u > 0.0) {
        return None;
    }
    if var == metric {
        thorndike_case2(r, u).ok()
    } else {
        let x = column_values(members, layer);
        let y = column_values(members, metric.column());
        let r_xz = pearson(&x, &z_side).ok()?;
        let r_zy = pearson(&z_side, &y).ok()?;
        thorndike_case3(r, r_xz, r_zy, u).ok()
    }
}

fn side_cells(
    stage: Option<CareerStage>,
    status: Option<MigrationStatus>,
    side: Side,
    group: &[&AnalysisRecord],
    members: &[&AnalysisRecord],
    plan: &AnalysisPlan,
    seed: u64,
) -> Vec<CorrelationCell> {
    let n = members.len();
    let blank = |layer: usize, metric: Metric| CorrelationCell {
        stage,
        status,
        side,
        layer: layer + 1,
        metric,
        n,
        r: None,
        r_corrected: None,
        ci: None,
        suppressed: None,
    };
    let pairs: Vec<(usize, usize)> = (0..CIRCLES)
        .flat_map(|l| Metric::ALL.iter().map(move |m| (l, m.column())))
        .collect();

    if n < plan.min_group_size.max(3) {
        return pairs
            .iter()
            .map(|&(l, c)| CorrelationCell {
                suppressed: Some(Suppression::SmallGroup),
                ..blank(l, Metric::ALL[c - CIRCLES])
            })
            .collect();
    }

    let columns: Vec<Vec<f64>> = (0..CIRCLES + Metric::ALL.len())
        .map(|c| column_values(members, c))
        .collect();
    let views: Vec<&[f64]> = columns.iter().map(Vec::as_slice).collect();
    let config = BootstrapConfig {
        seed,
        ..plan.bootstrap
    };
    let intervals = bca_pearson_multi(&views, &pairs, &config);

    pairs
        .iter()
        .zip(intervals)
        .map(|(&(l, c), res)| {
            let metric = Metric::ALL[c - CIRCLES];
            match res {
                Ok(ci) => CorrelationCell {
                    r: Some(ci.estimate),
                    r_corrected: corrected(side, group, members, l, metric, ci.estimate),
                    ci: Some((ci.low, ci.high)),
                    ..blank(l, metric)
                },
                Err(StatsError::ZeroVariance) => CorrelationCell {
                    suppressed: Some(Suppression::ZeroVariance),
                    ..blank(l, metric)
                },
                Err(_) => CorrelationCell {
                    suppressed: Some(Suppression::Undefined),
                    ..blank(l, metric)
                },
            }
        })
        .collect()
}

/// Builds every cell of the grid. Groups below the minimum size and
/// correlations that are undefined are emitted as suppressed rows.
pub fn correlation_table(
    records: &[AnalysisRecord],
    plan: &AnalysisPlan,
) -> Result<Vec<CorrelationCell>, StatsError> {
    plan.bootstrap.validate()?;
    if !(plan.percentile > 0.0 && plan.percentile < 1.0) {
        return Err(StatsError::InvalidInput(format!("percentile {} outside (0, 1)", plan.percentile)));
    }
    let stages: Vec<Option<CareerStage>> =
        std::iter::once(None).chain(CareerStage::ALL.map(Some)).collect();
    let statuses: Vec<Option<MigrationStatus>> =
        std::iter::once(None).chain(MigrationStatus::ALL.map(Some)).collect();

    let mut cells = Vec::new();
    let mut batch = 0u64;
    for &stage in &stages {
        for &status in &statuses {
            let group: Vec<&AnalysisRecord> = records
                .iter()
                .filter(|r| stage.map_or(true, |s| r.stage == s))
                .filter(|r| status.map_or(true, |s| r.status == s))
                .collect();

            let mut sides: Vec<(Side, Vec<&AnalysisRecord>)> = vec![(Side::All, group.clone())];
            for var in SplitVar::ALL {
                let (top, rest) = if group.is_empty() {
                    (Vec::new(), Vec::new())
                } else {
                    let values = column_values(&group, var.metric().column());
                    let split = percentile_split(&values, plan.percentile)?;
                    (
                        split.top.iter().map(|&i| group[i]).collect(),
                        split.rest.iter().map(|&i| group[i]).collect(),
                    )
                };
                sides.push((Side::Top(var), top));
                sides.push((Side::Regular(var), rest));
            }

            for (side, members) in sides {
                let seed = derive_seed(plan.bootstrap.seed, batch);
                batch += 1;
                cells.extend(side_cells(stage, status, side, &group, &members, plan, seed));
            }
        }
    }
    Ok(cells)
}

pub const REPORT_HEADER: [&str; 12] = [
    "group",
    "stage",
    "status",
    "split",
    "layer",
    "metric",
    "n",
    "r",
    "r_corrected",
    "ci_low",
    "ci_high",
    "suppressed",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the correlation report CSV.
pub fn write_report_csv<W: Write>(cells: &[CorrelationCell], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(REPORT_HEADER)?;
    for c in cells {
        w.write_record([
            c.group_label(),
            c.stage_label().to_owned(),
            c.status_label().to_owned(),
            c.side.to_string(),
            c.layer.to_string(),
            c.metric.label().to_owned(),
            c.n.to_string(),
            opt(c.r),
            opt(c.r_corrected),
            opt(c.ci.map(|x| x.0)),
            opt(c.ci.map(|x| x.1)),
            c.suppressed.map_or("none", Suppression::label).to_owned(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
