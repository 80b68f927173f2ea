use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use lazymem::format;
use lazymem::{load_fasta, load_raw, HashConfig, Index};

mod query;

use query::{Engine, Mode, PatternFormat, QueryArgs};

#[derive(Parser)]
#[command(
    name = "lazymem",
    version,
    about = "Matching statistics and MEMs over a compressed index"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a text file.
    Build(BuildArgs),
    /// Compute matching statistics or MEMs for a set of patterns.
    Query(QueryCli),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Fasta,
    Raw,
}

#[derive(clap::Args)]
struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: InputFormat,
    #[arg(long)]
    output: PathBuf,
    /// Keep SA samples only where they cannot be recovered within S-1 LF steps.
    #[arg(long, default_value_t = 1)]
    subsample: usize,
    /// Store LCE values next to each threshold (enables --engine eager-aug).
    #[arg(long)]
    augment: bool,
    /// Hash seed; drawn from OS entropy when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Drop newline bytes from raw input.
    #[arg(long)]
    strip_newlines: bool,
    /// Force the hash base (testing only).
    #[arg(long, hide = true)]
    hash_base: Option<u64>,
}

#[derive(clap::Args)]
struct QueryCli {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    patterns: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    format: PatternFormat,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Defaults to eager for ms and mems; not accepted by long-mems or lcs.
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    /// Minimum MEM length (long-mems only).
    #[arg(long)]
    min_len: Option<usize>,
    /// Check lazy results against the text (default).
    #[arg(long, conflicts_with = "no_verify")]
    verify: bool,
    #[arg(long)]
    no_verify: bool,
    /// Per-pattern statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// TSV output; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Bad flags or flag combinations.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn build(args: BuildArgs) -> Result<()> {
    if args.subsample == 0 {
        return usage("invalid subsample rate");
    }
    if args.strip_newlines && matches!(args.format, InputFormat::Fasta) {
        return usage("--strip-newlines applies to raw input only");
    }
    let started = Instant::now();
    let mut bytes =
        fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let text = match args.format {
        InputFormat::Fasta => load_fasta(&bytes)?,
        InputFormat::Raw => {
            if args.strip_newlines {
                bytes.retain(|&b| b != b'\n' && b != b'\r');
            }
            load_raw(&bytes)?
        }
    };
    let seed = args.seed.unwrap_or_else(rand::random);
    let config = match args.hash_base {
        Some(base) => HashConfig::with_base_unchecked(seed, base),
        None => HashConfig::from_seed(seed),
    };
    let index = Index::build(&text, args.subsample, args.augment, config)?;
    format::save(&index, &args.output)
        .with_context(|| format!("writing {}", args.output.display()))?;
    println!(
        "n={} r={} g={} samples={} s={} seed={} elapsed={:.3}s",
        index.n(),
        index.r(),
        index.g(),
        index.rlbwt.samples().len(),
        index.s(),
        seed,
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build(args) => build(args),
        Command::Query(q) => query::run(QueryArgs {
            index: q.index,
            patterns: q.patterns,
            format: q.format,
            mode: q.mode,
            engine: q.engine,
            min_len: q.min_len,
            verify: match (q.verify, q.no_verify) {
                (false, false) => None,
                (v, _) => Some(v),
            },
            stats: q.stats,
            output: q.output,
        }),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 1;
    }
    match err.downcast_ref::<lazymem::Error>() {
        Some(
            lazymem::Error::InvalidSubsampleRate
            | lazymem::Error::ZeroMinLength
            | lazymem::Error::AugmentMissing,
        ) => 1,
        Some(e) if e.is_internal() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
