//! Run configuration: defaults, then a TOML file, then command-line flags.

use std::path::{Path, PathBuf};

use egocircles::corpus::DEFAULT_MAX_AUTHORS;
use egocircles::stats::{AnalysisPlan, BootstrapConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "EGOCIRCLES_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestSection {
    pub strict: bool,
    pub max_authors: usize,
}

impl Default for IngestSection {
    fn default() -> Self {
        Self {
            strict: false,
            max_authors: DEFAULT_MAX_AUTHORS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EgonetSection {
    pub min_duration_years: f64,
}

impl Default for EgonetSection {
    fn default() -> Self {
        Self { min_duration_years: 0.5 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MobilitySection {
    pub smooth_slots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub percentile: f64,
    pub replicas: usize,
    pub level: f64,
    pub min_group_size: usize,
    pub max_redraws: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        let plan = AnalysisPlan::default();
        Self {
            percentile: plan.percentile,
            replicas: plan.bootstrap.replicas,
            level: plan.bootstrap.level,
            min_group_size: plan.min_group_size,
            max_redraws: plan.bootstrap.max_redraws,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide.
    pub threads: usize,
    pub ingest: IngestSection,
    pub egonet: EgonetSection,
    pub mobility: MobilitySection,
    pub analysis: AnalysisSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            corpus: None,
            registry: None,
            output_dir: PathBuf::from("out"),
            seed: 0,
            threads: 0,
            ingest: IngestSection::default(),
            egonet: EgonetSection::default(),
            mobility: MobilitySection::default(),
            analysis: AnalysisSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config: {}", e.message())))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Explicit path first, then the environment variable, else defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self, CliError> {
        if let Some(p) = explicit {
            return Self::from_file(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.ingest.max_authors < 2 {
            return bad(format!("ingest.max_authors must be >= 2, got {}", self.ingest.max_authors));
        }
        let d = self.egonet.min_duration_years;
        if !(d.is_finite() && d > 0.0) {
            return bad(format!("egonet.min_duration_years must be positive, got {d}"));
        }
        let a = &self.analysis;
        if !(a.percentile > 0.0 && a.percentile < 1.0) {
            return bad(format!("analysis.percentile must be in (0, 1), got {}", a.percentile));
        }
        if a.min_group_size < 3 {
            return bad(format!("analysis.min_group_size must be >= 3, got {}", a.min_group_size));
        }
        self.plan()
            .bootstrap
            .validate()
            .map_err(|e| CliError::Config(format!("analysis: {e}")))
    }

    pub fn ego_config(&self) -> egocircles::EgoConfig {
        egocircles::EgoConfig {
            min_duration_years: self.egonet.min_duration_years,
        }
    }

    pub fn plan(&self) -> AnalysisPlan {
        AnalysisPlan {
            percentile: self.analysis.percentile,
            min_group_size: self.analysis.min_group_size,
            bootstrap: BootstrapConfig {
                replicas: self.analysis.replicas,
                level: self.analysis.level,
                seed: self.seed,
                max_redraws: self.analysis.max_redraws,
            },
        }
    }
}
