use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use csgen_core::analysis::{self, format_report};
use csgen_core::projection::{self, prepare};
use csgen_core::{parse_pair_file, AlignedPair, Frame, Lang, MatrixChoice, Model, ModelConfig};

#[derive(Parser)]
#[command(name = "csgen", version, about = "Generate and validate code-switched sentences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Model configuration file. Falls back to the shipped configuration.
    #[arg(long, env = "CSGEN_CONFIG")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Project the first tree onto the second sentence.
    Project {
        #[arg(long)]
        pair: PathBuf,
        /// Print the modified and projected trees instead of a pair file.
        #[arg(long)]
        dump_trees: bool,
    },
    /// Print every sentence a model generates, one per line.
    Generate {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        model: Model,
        #[arg(long, default_value = "l1")]
        matrix: MatrixChoice,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Accept or reject one sentence.
    Validate {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        model: Model,
        #[arg(long)]
        sentence: String,
        #[arg(long, default_value = "l1")]
        matrix: MatrixChoice,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Compare the output of two models.
    Compare {
        #[arg(long)]
        pair: PathBuf,
        /// Two models separated by a comma, e.g. ec1,ml2.
        #[arg(long, value_delimiter = ',', required = true)]
        models: Vec<Model>,
        #[arg(long, default_value = "l1")]
        matrix: MatrixChoice,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Tabulate every pair file in a directory.
    Report {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "l1")]
        matrix: MatrixChoice,
        #[command(flatten)]
        config: ConfigArg,
    },
}

fn load_config(arg: &ConfigArg) -> Result<ModelConfig> {
    match &arg.config {
        None => Ok(ModelConfig::shipped()),
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ModelConfig::parse(&text).with_context(|| format!("in {}", path.display()))
        }
    }
}

fn load_pair(path: &Path) -> Result<AlignedPair> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut pair = parse_pair_file(&text).with_context(|| format!("in {}", path.display()))?;
    pair.id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(pair)
}

fn load_frame(path: &Path) -> Result<Frame> {
    let pair = prepare(&load_pair(path)?).with_context(|| format!("projecting {}", path.display()))?;
    Frame::from_pair(&pair).with_context(|| format!("in {}", path.display()))
}

enum Outcome {
    Done,
    Rejected,
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Project { pair, dump_trees } => {
            let pair = load_pair(&pair)?;
            let result = projection::project_pair(&pair, Lang::L1)?;
            if dump_trees {
                println!("{}", result.modified_source);
                println!("{}", result.projected_target);
            } else {
                print!("{}", projection::attach_congruence(&result, &pair).serialize());
            }
        }
        Command::Generate { pair, model, matrix, config } => {
            let cfg = load_config(&config)?;
            let frame = load_frame(&pair)?;
            for s in &analysis::generate(&frame, model, matrix, &cfg).strings {
                println!("{s}");
            }
        }
        Command::Validate { pair, model, sentence, matrix, config } => {
            let cfg = load_config(&config)?;
            let frame = load_frame(&pair)?;
            match analysis::validate(&frame, model, matrix, &cfg, &sentence) {
                Ok(()) => println!("accepted"),
                Err(r) => {
                    println!("rejected: {r}");
                    return Ok(Outcome::Rejected);
                }
            }
        }
        Command::Compare { pair, models, matrix, config } => {
            let cfg = load_config(&config)?;
            let frame = load_frame(&pair)?;
            let [a, b] = models[..] else { bail!("--models takes exactly two models") };
            let sa = analysis::generate(&frame, a, matrix, &cfg);
            let sb = analysis::generate(&frame, b, matrix, &cfg);
            let c = analysis::compare(&sa, &sb)?;
            println!("{a}: {}", c.counts.0);
            println!("{b}: {}", c.counts.1);
            println!("both: {}", c.intersection.len());
            for (name, set) in [(a, &c.only_a), (b, &c.only_b)] {
                println!("only {name}: {}", set.len());
                for s in set {
                    println!("  {s}");
                }
            }
        }
        Command::Report { corpus, matrix, config } => {
            let cfg = load_config(&config)?;
            let mut files: Vec<PathBuf> = fs::read_dir(&corpus)
                .with_context(|| format!("reading {}", corpus.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "pair"))
                .collect();
            files.sort();
            if files.is_empty() {
                bail!("no .pair files in {}", corpus.display());
            }
            let mut rows = Vec::new();
            for f in &files {
                let pair = prepare(&load_pair(f)?).with_context(|| format!("projecting {}", f.display()))?;
                rows.push(analysis::report_row(&pair, &cfg, matrix).with_context(|| format!("in {}", f.display()))?);
            }
            print!("{}", format_report(&rows));
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
