//! Command-line front end: lexicon building, φ reports, match heat maps
//! and significance tests, and synthetic fixture generation.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod fixture;
pub mod provenance;
pub mod svg;

use config::{RunConfig, Settings};

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing configuration; exit code 2.
    Config(String),
    /// Input data could not be processed; exit code 1.
    Data(String),
}

impl CliError {
    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => 1,
            CliError::Config(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Data(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<synant_core::Error> for CliError {
    fn from(e: synant_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "synant", version, about = "Synonym/antonym bags for contrast and concession relations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and curate the bag lexicon from a corpus and a database.
    BuildLexicon(Overrides),
    /// φ per connective graph under each ablation, with bar charts.
    Phi(Overrides),
    /// Match-count heat maps and Mann-Whitney-Wilcoxon tests.
    Match(Overrides),
    /// Write a synthetic corpus and a matching mini database.
    GenFixture(Overrides),
}

/// Flags shared by every subcommand; each overrides the key of the same
/// name from the config file and the environment.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Directory holding the WNDB files.
    #[arg(long)]
    pub wordnet: Option<PathBuf>,
    /// Curation directive file.
    #[arg(long)]
    pub curation: Option<PathBuf>,
    /// Lexicon JSON (default `<out>/lexicon.json`).
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated ablations, e.g. `all,no_adjective`.
    #[arg(long)]
    pub masks: Option<String>,
    /// One graph per connective and explicitness.
    #[arg(long)]
    pub split_explicit: bool,
    /// Keep arg1 and arg2 nodes distinct.
    #[arg(long)]
    pub position_tagged: bool,
    /// Per-relation test value: total, syn or ant.
    #[arg(long)]
    pub scalar: Option<String>,
    #[arg(long)]
    pub heatmap_cap: Option<usize>,
    /// Skip malformed corpus lines instead of failing.
    #[arg(long)]
    pub skip_malformed: bool,
    /// Also write per-graph edge and node tables.
    #[arg(long)]
    pub export_graphs: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub relations: Option<usize>,
    #[arg(long)]
    pub a_class_size: Option<usize>,
    #[arg(long)]
    pub match_shift: Option<usize>,
}

impl Overrides {
    fn apply(&self, s: &mut Settings) {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.to_string_lossy().into_owned());
        let pairs: [(&str, Option<String>); 16] = [
            ("corpus", path(&self.corpus)),
            ("wordnet", path(&self.wordnet)),
            ("curation", path(&self.curation)),
            ("lexicon", path(&self.lexicon)),
            ("out", path(&self.out)),
            ("masks", self.masks.clone()),
            ("split_explicit", self.split_explicit.then(|| "true".into())),
            ("position_tagged", self.position_tagged.then(|| "true".into())),
            ("scalar", self.scalar.clone()),
            ("heatmap_cap", self.heatmap_cap.map(|v| v.to_string())),
            ("skip_malformed", self.skip_malformed.then(|| "true".into())),
            ("export_graphs", self.export_graphs.then(|| "true".into())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("relations", self.relations.map(|v| v.to_string())),
            ("a_class_size", self.a_class_size.map(|v| v.to_string())),
            ("match_shift", self.match_shift.map(|v| v.to_string())),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v);
            }
        }
    }

    /// Flags over environment over config file over defaults.
    pub fn resolve<F>(&self, env: F) -> Result<RunConfig, CliError>
    where
        F: Fn(&str) -> Option<String>,
    {
        let mut s = Settings::default();
        let file = self
            .config
            .clone()
            .or_else(|| env(&format!("{}CONFIG", config::ENV_PREFIX)).map(PathBuf::from));
        if let Some(path) = file {
            if !path.is_file() {
                return Err(CliError::Config(format!("config file not found: {}", path.display())));
            }
            s.apply_file(&path)?;
        }
        s.apply_env(&env);
        self.apply(&mut s);
        s.resolve()
    }
}

/// Runs one subcommand and returns what it prints on success.
pub fn run<F>(cli: &Cli, env: F) -> Result<String, CliError>
where
    F: Fn(&str) -> Option<String>,
{
    match &cli.command {
        Command::BuildLexicon(o) => commands::build_lexicon(&o.resolve(env)?),
        Command::Phi(o) => commands::phi(&o.resolve(env)?),
        Command::Match(o) => commands::matches(&o.resolve(env)?),
        Command::GenFixture(o) => commands::gen_fixture(&o.resolve(env)?),
    }
}
