use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use lazymem::format;
use lazymem::{
    lcs, long_mems, mems_from_ms, ms_eager, ms_lazy, ms_lazy_verified, parse_fasta, parse_lines,
    Index, MatchingStatistics, MemList, QueryStats,
};

use crate::usage;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PatternFormat {
    Auto,
    Fasta,
    Lines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Ms,
    Mems,
    LongMems,
    Lcs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Eager,
    EagerAug,
    Lazy,
    /// Reported for long-mems and lcs, which have a single engine.
    #[value(skip)]
    Long,
}

pub struct QueryArgs {
    pub index: PathBuf,
    pub patterns: PathBuf,
    pub format: PatternFormat,
    pub mode: Mode,
    pub engine: Option<Engine>,
    pub min_len: Option<usize>,
    pub verify: Option<bool>,
    pub stats: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct StatsRow<'a> {
    pattern: &'a str,
    engine: Engine,
    mode: Mode,
    n: usize,
    r: usize,
    g: usize,
    s: usize,
    #[serde(flatten)]
    stats: QueryStats,
}

enum Output {
    Ms(MatchingStatistics),
    Mems(MemList),
}

/// Resolves the engine and rejects flag combinations that do not apply.
fn settle_flags(args: &QueryArgs) -> Result<(Engine, usize, bool)> {
    let engine = match (args.mode, args.engine) {
        (Mode::Ms | Mode::Mems, e) => e.unwrap_or(Engine::Eager),
        (_, Some(_)) => return usage("--engine applies to --mode ms and mems only"),
        (_, None) => Engine::Long,
    };
    let min_len = match (args.mode, args.min_len) {
        (Mode::LongMems, Some(0)) => return Err(lazymem::Error::ZeroMinLength.into()),
        (Mode::LongMems, Some(d)) => d,
        (Mode::LongMems, None) => return usage("--mode long-mems requires --min-len"),
        (_, Some(_)) => return usage("--min-len applies to --mode long-mems only"),
        (_, None) => 0,
    };
    if args.verify.is_some() && engine != Engine::Lazy {
        return usage("--verify/--no-verify apply to --engine lazy only");
    }
    Ok((engine, min_len, args.verify.unwrap_or(true)))
}

fn run_one(
    index: &Index,
    p: &[u8],
    mode: Mode,
    engine: Engine,
    min_len: usize,
    verify: bool,
) -> lazymem::Result<(Output, QueryStats)> {
    let (rl, g) = (&index.rlbwt, &index.grammar);
    let (ms, mems, stats) = match engine {
        Engine::Eager | Engine::EagerAug => {
            let (ms, st) = ms_eager(p, rl, g, engine == Engine::EagerAug)?;
            let mems = mems_from_ms(&ms);
            (ms, mems, st)
        }
        Engine::Lazy if verify => ms_lazy_verified(p, rl, g)?,
        Engine::Lazy => ms_lazy(p, rl, g)?,
        Engine::Long => {
            let (mems, st) = match mode {
                Mode::LongMems => long_mems(p, rl, g, min_len)?,
                _ => lcs(p, rl, g)?,
            };
            return Ok((Output::Mems(mems), st));
        }
    };
    Ok(match mode {
        Mode::Ms => (Output::Ms(ms), stats),
        _ => (Output::Mems(mems), stats),
    })
}

fn rows(name: &str, out: &Output) -> String {
    let mut s = String::new();
    match out {
        Output::Ms(ms) => {
            for i in 0..ms.m() {
                let pos = ms.pos[i].map_or_else(|| "-".to_string(), |p| p.to_string());
                s.push_str(&format!("{name}\t{}\t{pos}\t{}\n", i + 1, ms.len[i]));
            }
        }
        Output::Mems(mems) => {
            for e in &mems.entries {
                s.push_str(&format!(
                    "{name}\t{}\t{}\t{}\n",
                    e.start + 1,
                    e.len,
                    e.text_pos
                ));
            }
        }
    }
    s
}

pub fn run(args: QueryArgs) -> Result<()> {
    let (engine, min_len, verify) = settle_flags(&args)?;
    let index =
        format::load(&args.index).with_context(|| format!("loading {}", args.index.display()))?;
    if engine == Engine::EagerAug && !index.rlbwt.augmented() {
        return Err(lazymem::Error::AugmentMissing.into());
    }
    let bytes =
        fs::read(&args.patterns).with_context(|| format!("reading {}", args.patterns.display()))?;
    let fasta = match args.format {
        PatternFormat::Fasta => true,
        PatternFormat::Lines => false,
        PatternFormat::Auto => bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'>'),
    };
    let patterns = if fasta {
        parse_fasta(&bytes)?
    } else {
        parse_lines(&bytes)
    };

    let results: Vec<_> = patterns
        .par_iter()
        .map(|(name, raw)| {
            let p = index.encode_pattern(raw);
            run_one(&index, &p, args.mode, engine, min_len, verify)
                .with_context(|| format!("pattern {name}"))
        })
        .collect();

    let mut tsv = String::new();
    let mut stats = Vec::with_capacity(patterns.len());
    for ((name, raw), res) in patterns.iter().zip(results) {
        let (out, st) = res?;
        if raw.is_empty() {
            eprintln!("warning: pattern {name} is empty");
        }
        tsv.push_str(&rows(name, &out));
        stats.push(StatsRow {
            pattern: name,
            engine,
            mode: args.mode,
            n: index.n(),
            r: index.r(),
            g: index.g(),
            s: index.s(),
            stats: st,
        });
    }
    match &args.output {
        Some(path) => {
            fs::write(path, tsv).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().lock().write_all(tsv.as_bytes())?,
    }
    if let Some(path) = &args.stats {
        let json = serde_json::to_string_pretty(&stats)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
