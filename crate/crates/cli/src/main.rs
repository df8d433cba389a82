//! `fuplab`: experiment runner over the fuplab core library.

mod commands;
mod config;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use commands::{flow, fup, sets, words};
use config::{flags_to_params, merge, parse_params, ExperimentConfig, Format};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input files; exit code 2.
    Validation(String),
    /// A numeric or construction failure; exit code 3.
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Failure(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Failure(m) => write!(f, "failed: {m}"),
        }
    }
}

impl From<fuplab_core::Error> for CliError {
    fn from(e: fuplab_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Failure(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fuplab", version, about = "Fractal uncertainty experiments: porous sets, masked operator norms, words and horocycle flows")]
struct Cli {
    /// Experiment config JSON; explicit flags override its params.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; a `<output>.manifest.json` is written next to it.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify porosity of an interval set.
    Porosity(sets::PorosityArgs),
    /// Embed a porous set into a regular Cantor tree.
    Embed(sets::EmbedArgs),
    /// Masked operator norms over a ladder of h and the decay fit.
    Fup(fup::FupArgs),
    #[command(subcommand)]
    Words(WordsCommand),
    #[command(subcommand)]
    Flow(FlowCommand),
}

#[derive(Debug, Subcommand)]
enum WordsCommand {
    /// Exact size of the uncontrolled word set.
    Count(words::CountArgs),
    /// Block length and threshold derived from h, rho and beta.
    Params(words::ParamsArgs),
    /// X/Y membership of a single word.
    Classify(words::ClassifyArgs),
}

#[derive(Debug, Subcommand)]
enum FlowCommand {
    /// Horocycle time averages against the Liouville average.
    Avg(flow::AvgArgs),
    /// Horocycle hitting times of target balls.
    Hit(flow::HitArgs),
    /// Porosity witnesses along unstable horocycles.
    Witness(flow::WitnessArgs),
}

impl Command {
    fn name_and_flags(&self) -> (&'static str, Map<String, Value>) {
        match self {
            Command::Porosity(a) => ("porosity", flags_to_params(a)),
            Command::Embed(a) => ("embed", flags_to_params(a)),
            Command::Fup(a) => ("fup", flags_to_params(a)),
            Command::Words(WordsCommand::Count(a)) => ("words count", flags_to_params(a)),
            Command::Words(WordsCommand::Params(a)) => ("words params", flags_to_params(a)),
            Command::Words(WordsCommand::Classify(a)) => ("words classify", flags_to_params(a)),
            Command::Flow(FlowCommand::Avg(a)) => ("flow avg", flags_to_params(a)),
            Command::Flow(FlowCommand::Hit(a)) => ("flow hit", flags_to_params(a)),
            Command::Flow(FlowCommand::Witness(a)) => ("flow witness", flags_to_params(a)),
        }
    }
}

fn dispatch(command: &str, params: &Map<String, Value>, seed: Option<u64>) -> Result<emit::Artifact, CliError> {
    match command {
        "porosity" => sets::porosity(&parse_params(command, params)?, seed),
        "embed" => sets::embed(&parse_params(command, params)?, seed),
        "fup" => fup::fup(&parse_params(command, params)?),
        "words count" => words::count(&parse_params(command, params)?),
        "words params" => words::params(&parse_params(command, params)?),
        "words classify" => words::classify(&parse_params(command, params)?),
        "flow avg" => flow::avg(&parse_params(command, params)?, seed),
        "flow hit" => flow::hit(&parse_params(command, params)?, seed),
        "flow witness" => flow::witness(&parse_params(command, params)?, seed),
        other => Err(CliError::Validation(format!("unknown command `{other}`"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let start = Instant::now();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failure(format!("thread pool: {e}")))?;
    }
    let file = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let (command, flags) = match (&cli.command, &file.command) {
        (Some(c), cfg) => {
            let (name, flags) = c.name_and_flags();
            if let Some(cfg) = cfg {
                if cfg != name {
                    return Err(CliError::Validation(format!("config command `{cfg}` does not match `{name}`")));
                }
            }
            (name.to_string(), flags)
        }
        (None, Some(cfg)) => (cfg.clone(), Map::new()),
        (None, None) => return Err(CliError::Validation("no command given; see --help".into())),
    };
    let format = if cli.json {
        Format::Json
    } else {
        cli.format.or(file.format).unwrap_or(Format::Csv)
    };
    let effective = ExperimentConfig {
        params: merge(&file.params, flags),
        seed: cli.seed.or(file.seed),
        output: cli.output.clone().or_else(|| file.output.clone()),
        format: Some(format),
        command: Some(command),
    };
    let name = effective.command.as_deref().unwrap_or_default();
    let artifact = dispatch(name, &effective.params, effective.seed)?;
    emit::emit(&artifact, format, &effective, start.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fuplab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
