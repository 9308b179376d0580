use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Schema(String),
    #[error("missing upstream artifact {}", .0.display())]
    MissingArtifact(PathBuf),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Schema(_) => 3,
            CliError::MissingArtifact(_) => 4,
            CliError::Io(_) | CliError::Runtime(_) => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Schema(_) => "schema",
            CliError::MissingArtifact(_) => "missing_artifact",
            CliError::Io(_) => "io",
            CliError::Runtime(_) => "runtime",
        }
    }

    /// `error code=<code> exit=<n> message="<text>"` on a single line.
    pub fn one_line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ").replace('"', "'");
        format!("error code={} exit={} message=\"{}\"", self.code(), self.exit_code(), msg)
    }

    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<egocircles::corpus::CorpusError> for CliError {
    fn from(e: egocircles::corpus::CorpusError) -> Self {
        use egocircles::corpus::CorpusError as E;
        match e {
            E::Io { .. } => CliError::Io(e.to_string()),
            E::BadThreshold(_) => CliError::Config(e.to_string()),
            _ => CliError::Schema(e.to_string()),
        }
    }
}

impl From<egocircles::mobility::MobilityError> for CliError {
    fn from(e: egocircles::mobility::MobilityError) -> Self {
        use egocircles::mobility::MobilityError as E;
        match e {
            E::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Schema(e.to_string()),
        }
    }
}

impl From<egocircles::synth::SynthError> for CliError {
    fn from(e: egocircles::synth::SynthError) -> Self {
        use egocircles::synth::SynthError as E;
        match e {
            E::InvalidSpec(_) | E::Infeasible { .. } => CliError::Config(e.to_string()),
            E::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}
