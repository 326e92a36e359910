use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use coxsolid_cli::batch::{self, BatchInput};
use coxsolid_cli::report::{classify_timed, ReportDocument};
use coxsolid_core::{
    build_family, parse_diagram_with_warnings, CoxeterDiagram, EngineError, FamilyName,
};

const EXIT_FAILURES: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

/// Decide strong solidity of Coxeter group von Neumann algebras from their
/// Coxeter-Dynkin diagrams.
#[derive(Parser)]
#[command(name = "coxsolid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the diagram in a `.cox` file.
    Classify {
        file: PathBuf,
        /// Print the versioned JSON report.
        #[arg(long)]
        json: bool,
        /// Attach numeric Tits representation cross-checks.
        #[arg(long)]
        oracle: bool,
        /// Also print the witness and the minimal hyperbolic subsets.
        #[arg(long)]
        explain: bool,
    },
    /// Print a named family diagram, e.g. `A5`, `I2:7`, `Atilde2`, `G2tilde`.
    Family {
        token: String,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Vertex names are the prefix followed by 0, 1, ...
        #[arg(long, default_value = "s")]
        prefix: String,
    },
    /// Print the direct product (disjoint union) of two diagrams.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every `.cox` file in a directory, or a seeded random corpus.
    Batch {
        dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        oracle: bool,
        /// Number of random diagrams to generate.
        #[arg(long, value_name = "N", requires_all = ["rank", "seed"], conflicts_with = "dir")]
        random: Option<usize>,
        /// Maximum rank of the random diagrams.
        #[arg(long, value_name = "R", requires = "random")]
        rank: Option<usize>,
        #[arg(long, value_name = "S", requires = "random")]
        seed: Option<u64>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Inconsistent(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn read_diagram(path: &Path) -> anyhow::Result<CoxeterDiagram> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let (d, warnings) = parse_diagram_with_warnings(&text)
        .with_context(|| format!("cannot parse {}", path.display()))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(d)
}

/// Writes to stdout; a closed pipe (`coxsolid ... | head`) is not an error.
fn stdout(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(anyhow::Error::new(e).context("cannot write to stdout"))
        }
        _ => Ok(()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => stdout(text),
    }
}

fn classify(file: &Path, json: bool, oracle: bool, explain: bool) -> Result<u8, Failure> {
    let d = read_diagram(file)?;
    let (report, timings) = match classify_timed(&d, oracle) {
        Ok(r) => r,
        Err(e @ EngineError::ProcedureDisagreement { .. }) => {
            return Err(Failure::Inconsistent(e.into()))
        }
        Err(e) => return Err(Failure::Usage(e.into())),
    };
    let doc = ReportDocument::new(&d, &report, timings);
    if json {
        let text = serde_json::to_string_pretty(&doc).context("cannot serialize report")?;
        stdout(&format!("{text}\n"))?;
    } else {
        stdout(&doc.render_text(explain))?;
    }
    Ok(0)
}

fn run_batch(
    dir: Option<PathBuf>,
    json: bool,
    oracle: bool,
    random: Option<(usize, usize, u64)>,
) -> Result<u8, Failure> {
    let inputs: Vec<BatchInput> = match (dir, random) {
        (_, Some((n, rank, seed))) => batch::random_inputs(n, rank, seed),
        (Some(dir), None) => batch::read_dir_inputs(&dir)
            .with_context(|| format!("cannot read directory {}", dir.display()))?,
        (None, None) => {
            return Err(anyhow::anyhow!("give a directory or --random N --rank R --seed S").into())
        }
    };
    let doc = batch::run(&inputs, oracle);
    if json {
        let text = serde_json::to_string_pretty(&doc).context("cannot serialize batch report")?;
        stdout(&format!("{text}\n"))?;
    } else {
        stdout(&doc.render_text())?;
    }
    Ok(if doc.summary.failures > 0 {
        EXIT_FAILURES
    } else {
        0
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify {
            file,
            json,
            oracle,
            explain,
        } => classify(&file, json, oracle, explain),
        Command::Family { token, out, prefix } => {
            let name: FamilyName = token.parse().map_err(anyhow::Error::from)?;
            let d = build_family(name, &prefix).map_err(anyhow::Error::from)?;
            emit(&d.to_cox(), out.as_deref())?;
            Ok(0)
        }
        Command::Product { left, right, out } => {
            let d = read_diagram(&left)?
                .product(&read_diagram(&right)?)
                .map_err(anyhow::Error::from)?;
            emit(&d.to_cox(), out.as_deref())?;
            Ok(0)
        }
        Command::Batch {
            dir,
            json,
            oracle,
            random,
            rank,
            seed,
        } => {
            let random = match (random, rank, seed) {
                (Some(n), Some(r), Some(s)) => Some((n, r, s)),
                _ => None,
            };
            run_batch(dir, json, oracle, random)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Inconsistent(e)) => {
            eprintln!("internal inconsistency: {e:#}");
            ExitCode::from(EXIT_INCONSISTENT)
        }
    }
}
