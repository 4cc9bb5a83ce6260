mod commands;
mod config;
mod document;
mod error;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::Kind;
use config::{Precision, RunConfig, DEFAULT_TOLERANCE};
use document::SceneDocument;
use error::{CliError, CliResult};

/// Poncelet polygon constructions, closure counting, verification and figures.
///
/// Exit codes: 0 all checks pass, 1 a verification check failed, 2 invalid
/// input, 3 construction degeneracy, 4 numerical failure.
#[derive(Parser)]
#[command(name = "poncelet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Threshold for every verification residual.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Field precision; only `double` is available.
    #[arg(long, default_value = "double")]
    precision: String,
    /// Seed of the random generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(name = "6")]
    Hexagon,
    #[value(name = "7")]
    Heptagon,
    #[value(name = "8")]
    Octagon,
    #[value(name = "9")]
    Ninegon,
    Double,
    Chain,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Hexagon => Kind::Hexagon,
            KindArg::Heptagon => Kind::Heptagon,
            KindArg::Octagon => Kind::Octagon,
            KindArg::Ninegon => Kind::Ninegon,
            KindArg::Double => Kind::Double,
            KindArg::Chain => Kind::Chain,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a Poncelet polygon and write its scene document.
    Construct {
        kind: KindArg,
        /// Period: polygon size for `double` (random input) and `chain`.
        #[arg(long)]
        n: Option<usize>,
        /// Branch of the construction: 0 or 1, or 0..2 for the 9-gon.
        #[arg(long, default_value_t = 0)]
        branch: usize,
        /// Join/meet chain steps for `chain` (at least n).
        #[arg(long)]
        steps: Option<usize>,
        /// Closed polygon document for `double`.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Also write an SVG figure.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Five chart coordinates on the unit circle instead of random points.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Option<Vec<f64>>,
        /// Attach the Grünbaum–Rigby configuration (kind 7).
        #[arg(long)]
        configuration: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute every residual of a scene document.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Closure period to test instead of the document's.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Count the positions of point 6 closing an n-gon through five points.
    Count {
        #[arg(long)]
        n: usize,
        /// Five affine inputs x1..x5; random rationals if absent.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the tangent iteration, the next-point formula and the join/meet chain.
    Chain {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Draw a scene document as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run_config(common: &Common) -> CliResult<RunConfig> {
    Ok(RunConfig {
        tolerance: common.tolerance,
        precision: Precision::parse(&common.precision)?,
        seed: common.seed,
        output: common.out.clone(),
        ..RunConfig::default()
    })
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn verdict(pass: bool, what: &str) -> CliResult<()> {
    if pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{what}; see the report")))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Construct {
            kind,
            n,
            branch,
            steps,
            input,
            svg,
            x,
            configuration,
            common,
        } => {
            let cfg = RunConfig {
                n,
                branch,
                steps,
                input,
                svg,
                x,
                ..run_config(&common)?
            };
            cfg.validate()?;
            let doc = commands::construct(kind.into(), &cfg, configuration)?;
            emit(cfg.output.as_deref(), &doc.to_json())?;
            if let Some(path) = &cfg.svg {
                emit(Some(path), &svg::render(&doc)?)?;
            }
            verdict(doc.passed(), "constructed scene fails a residual check")
        }
        Command::Verify { input, n, common } => {
            let cfg = RunConfig {
                n,
                input: Some(input.clone()),
                ..run_config(&common)?
            };
            cfg.validate()?;
            let doc = SceneDocument::read(&input)?;
            let report = commands::compute_checks_with(&doc, n, cfg.tolerance)?;
            emit(cfg.output.as_deref(), &json(&report))?;
            verdict(report.pass, "document fails a residual check")
        }
        Command::Count { n, x, common } => {
            let cfg = RunConfig {
                n: Some(n),
                x,
                ..run_config(&common)?
            };
            cfg.validate()?;
            let report = commands::count(&cfg)?;
            emit(cfg.output.as_deref(), &json(&report))?;
            verdict(report.pass, "an accepted root does not close")
        }
        Command::Chain {
            n,
            steps,
            input,
            common,
        } => {
            let cfg = RunConfig {
                n,
                steps,
                input,
                ..run_config(&common)?
            };
            cfg.validate()?;
            let report = commands::chain(&cfg)?;
            emit(cfg.output.as_deref(), &json(&report))?;
            verdict(report.pass, "chain engines disagree")
        }
        Command::Render { input, out } => {
            let cfg = RunConfig {
                input: Some(input.clone()),
                output: out,
                ..RunConfig::default()
            };
            cfg.validate()?;
            let doc = SceneDocument::read(&input)?;
            emit(cfg.output.as_deref(), &svg::render(&doc)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("poncelet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
