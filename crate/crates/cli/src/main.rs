use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use egocircles::synth::SynthSpec;
use egocircles_cli::config::CONFIG_ENV;
use egocircles_cli::{pipeline, CliError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "egocircles", version, about = "Co-authorship ego networks, mobility and correlation analysis")]
struct Cli {
    /// TOML config file; flags override its values
    #[arg(short, long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,

    /// Input corpus (JSONL, one publication per line)
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,

    /// Location registry CSV (institution_id,lat,lon,city,country)
    #[arg(long, global = true)]
    registry: Option<PathBuf>,

    /// Directory for all artifacts
    #[arg(short, long, global = true)]
    output_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (0 = all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Fail on the first malformed corpus line
    #[arg(long, global = true)]
    strict: bool,

    /// Drop papers with more authors than this
    #[arg(long, global = true)]
    max_authors: Option<usize>,

    /// Minimum relation duration in years
    #[arg(long, global = true)]
    min_duration: Option<f64>,

    /// Smooth affiliation oscillations up to this many slots
    #[arg(long, global = true)]
    smooth_slots: Option<usize>,

    /// Top/regular split percentile
    #[arg(long, global = true)]
    percentile: Option<f64>,

    /// Bootstrap replicas
    #[arg(long, global = true)]
    replicas: Option<usize>,

    /// Confidence level
    #[arg(long, global = true)]
    level: Option<f64>,

    /// Groups below this size are suppressed
    #[arg(long, global = true)]
    min_group_size: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and filter the corpus, derive author profiles
    Ingest,
    /// Build ego networks and circle statistics
    Egonet,
    /// Reconstruct affiliation histories and mobility profiles
    Mobility,
    /// Correlation grid and histogram data
    Analyze,
    /// Print summary tables from existing artifacts
    Report,
    /// ingest, egonet, mobility, analyze and report
    Run,
    /// Generate a synthetic corpus with ground truth
    Synth {
        /// Spec file (TOML); missing keys take defaults
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Number of egos
        #[arg(long)]
        authors: Option<usize>,
    },
}

impl Cli {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::load(self.config.as_deref())?;
        if let Some(v) = &self.corpus {
            cfg.corpus = Some(v.clone());
        }
        if let Some(v) = &self.registry {
            cfg.registry = Some(v.clone());
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if self.strict {
            cfg.ingest.strict = true;
        }
        if let Some(v) = self.max_authors {
            cfg.ingest.max_authors = v;
        }
        if let Some(v) = self.min_duration {
            cfg.egonet.min_duration_years = v;
        }
        if let Some(v) = self.smooth_slots {
            cfg.mobility.smooth_slots = v;
        }
        if let Some(v) = self.percentile {
            cfg.analysis.percentile = v;
        }
        if let Some(v) = self.replicas {
            cfg.analysis.replicas = v;
        }
        if let Some(v) = self.level {
            cfg.analysis.level = v;
        }
        if let Some(v) = self.min_group_size {
            cfg.analysis.min_group_size = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string(v).expect("summary serialises"));
}

fn execute(cli: &Cli, cfg: &RunConfig) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest => print_json(&pipeline::ingest(cfg)?),
        Command::Egonet => print_json(&pipeline::egonet(cfg)?),
        Command::Mobility => print_json(&pipeline::mobility(cfg)?),
        Command::Analyze => print_json(&pipeline::analyze(cfg)?),
        Command::Report => print!("{}", pipeline::report(cfg)?),
        Command::Run => print_json(&pipeline::run_all(cfg)?),
        Command::Synth { spec, authors } => {
            let mut s = match spec {
                Some(p) => {
                    let text = std::fs::read_to_string(p)
                        .map_err(|e| CliError::Config(format!("cannot read spec {}: {e}", p.display())))?;
                    toml::from_str::<SynthSpec>(&text)
                        .map_err(|e| CliError::Config(format!("spec: {}", e.message())))?
                }
                None => SynthSpec::default(),
            };
            if let Some(n) = authors {
                s.n_authors = *n;
            }
            if let Some(seed) = cli.seed {
                s.seed = seed;
            }
            print_json(&pipeline::synth(&s, &cfg.output_dir)?);
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = cli.config()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    pool.install(|| execute(cli, &cfg))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or("bad arguments").to_owned();
            eprintln!("{}", CliError::Config(first.trim_start_matches("error: ").to_owned()).one_line());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.one_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
