use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use lingwalk::language::{parse_walk, BuildError, BuiltWalk, LanguageId, Mode, Word};
use lingwalk::lab::{
    build_walk, format_sig17, render_svg, write_file, Execution, Experiment, ExperimentConfig, LabError, DEFAULT_GRID,
};

#[derive(Parser)]
#[command(name = "lingwalk", version, about = "Quantum-walk language acceptors and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an acceptor and write its JSON document.
    Build {
        #[command(flatten)]
        walk: WalkArgs,
        /// Output path; stdout when omitted.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Run one word through an acceptor and print its probabilities.
    Run {
        #[command(flatten)]
        walk: WalkArgs,
        /// Load the acceptor from a JSON document instead of building it.
        #[arg(long, conflicts_with_all = ["language", "mode", "length"])]
        graph: Option<PathBuf>,
        #[arg(long)]
        word: String,
    },
    /// Fidelity and Jaro curve over the first strings (spatial eq by default).
    Fig2(CurveArgs),
    /// Fidelity and Jaro curve over the first strings (sequential ab by default).
    Fig4(CurveArgs),
    /// Fidelity of superposed inputs around a base word.
    Fig5 {
        #[arg(long, default_value = "aabb")]
        word: String,
        #[arg(long)]
        language: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustive worst-case non-word acceptance per length.
    Bounds {
        #[arg(long, default_value = "eq")]
        language: String,
        #[arg(long, default_value = "spatial")]
        mode: String,
        /// Largest length swept.
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Node and step counts of every builder.
    Resources {
        #[arg(long, default_value_t = 8)]
        length: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Distinguish a word from its superposition with another.
    Discriminate {
        #[arg(long)]
        word: String,
        #[arg(long)]
        other: String,
        #[arg(long)]
        language: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Render an experiment CSV as SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long)]
    language: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    length: Option<usize>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    language: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    /// CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Evaluate strings one at a time instead of in parallel.
    #[arg(long)]
    serial: bool,
}

fn language(s: &str) -> Result<LanguageId> {
    Ok(s.parse::<LanguageId>()?)
}

fn mode(s: &str) -> Result<Mode> {
    s.parse::<Mode>().map_err(|e| LabError::Invalid(e).into())
}

fn word(s: &str) -> Result<Word> {
    Ok(s.parse::<Word>()?)
}

fn build(args: &WalkArgs, default_length: Option<usize>) -> Result<BuiltWalk> {
    let lang = language(args.language.as_deref().unwrap_or("eq"))?;
    let mode = mode(args.mode.as_deref().unwrap_or("spatial"))?;
    let n = match (args.length, default_length, &lang) {
        (Some(n), _, _) => n,
        (None, _, LanguageId::SpecificWord(w)) => w.len(),
        (None, Some(n), _) => n,
        (None, None, _) => return Err(LabError::Invalid("--length is required".into()).into()),
    };
    Ok(build_walk(&lang, mode, n)?)
}

fn experiment(e: Experiment, out: OutArgs) -> Result<()> {
    let config = ExperimentConfig {
        experiment: e,
        execution: if out.serial { Execution::Serial } else { Execution::Parallel },
        out: out.out.clone(),
        svg: out.svg,
    };
    let csv = config.execute()?;
    if out.out.is_none() {
        print!("{csv}");
    }
    Ok(())
}

fn curve(args: CurveArgs, default_language: &str, default_mode: &str) -> Result<()> {
    let e = Experiment::FidelityCurve {
        language: language(args.language.as_deref().unwrap_or(default_language))?,
        mode: mode(args.mode.as_deref().unwrap_or(default_mode))?,
        count: args.count,
    };
    experiment(e, args.out)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build { walk, emit } => {
            let json = build(&walk, None)?.to_json();
            match emit {
                Some(path) => write_file(&path, &json)?,
                None => println!("{json}"),
            }
        }
        Command::Run { walk, graph, word: w } => {
            let w = word(&w)?;
            let walk = match graph {
                Some(path) => parse_walk(&read(&path)?)?,
                None => build(&walk, Some(w.len()))?,
            };
            if w.is_empty() {
                println!("accept={} reject={} steps=0", format_sig17(1.0), format_sig17(0.0));
            } else {
                let out = walk.run_word(&w)?;
                println!(
                    "accept={} reject={} steps={}",
                    format_sig17(out.accept),
                    format_sig17(out.reject),
                    walk.steps()
                );
            }
        }
        Command::Fig2(args) => curve(args, "eq", "spatial")?,
        Command::Fig4(args) => curve(args, "ab", "sequential")?,
        Command::Fig5 { word: w, language: l, grid, out } => {
            let e = Experiment::QuantumInput {
                base: word(&w)?,
                language: l.as_deref().map(language).transpose()?,
                grid,
            };
            experiment(e, out)?
        }
        Command::Bounds { language: l, mode: m, length, out } => {
            let e = Experiment::Bounds {
                language: language(&l)?,
                mode: mode(&m)?,
                max_len: length,
            };
            experiment(e, out)?
        }
        Command::Resources { length, out } => experiment(Experiment::Resources { max_len: length }, out)?,
        Command::Discriminate {
            word: w1,
            other,
            language: l,
            grid,
            out,
        } => {
            let e = Experiment::Discriminate {
                w1: word(&w1)?,
                w2: word(&other)?,
                language: l.as_deref().map(language).transpose()?,
                grid,
            };
            experiment(e, out)?
        }
        Command::Plot { csv, svg } => write_file(&svg, &render_svg(&read(&csv)?)?)?,
    }
    Ok(())
}

fn is_validation(e: &anyhow::Error) -> bool {
    if let Some(l) = e.downcast_ref::<LabError>() {
        return l.is_validation();
    }
    e.downcast_ref::<BuildError>().is_some()
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_validation(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
