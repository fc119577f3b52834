//! Command-line front end. Every result is one JSON object per line.
//!
//! Exit status: 0 on success, 1 when `verify` finds a violation, 2 on
//! malformed input or usage, 3 when a search hit its resource cap.

mod config;
mod free;
mod graphs;
mod records;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use autqm::verify::{run_suite, Suite};
use clap::{Parser, Subcommand};
use serde_json::json;

use config::ExperimentConfig;
use records::Records;

#[derive(Parser)]
#[command(
    name = "autqm",
    version,
    about = "Quasimorphisms, autocommutator length and graph products"
)]
struct Cli {
    /// TOML experiment config
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Rank of the free group (default 2)
    #[arg(long, global = true)]
    rank: Option<usize>,
    /// Write records here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Word(free::WordCmd),
    #[command(subcommand)]
    Auto(free::AutoCmd),
    #[command(subcommand)]
    Wh(free::WhCmd),
    #[command(subcommand)]
    Qm(free::QmCmd),
    #[command(subcommand)]
    Norm(free::NormCmd),
    #[command(subcommand)]
    Gp(graphs::GpCmd),
    /// Run acceptance criteria
    Verify {
        /// all, lemma23, prop37, lemma63, section5, whitehead or normalform
        #[arg(long, default_value = "all")]
        suite: String,
        /// Include wall-clock times in the records
        #[arg(long)]
        timings: bool,
    },
}

pub struct Ctx {
    pub cfg: ExperimentConfig,
    pub out: Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Cutoff,
}

fn run(cli: Cli) -> Result<Status> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(r) = cli.rank {
        cfg.rank = r;
    }
    if cli.output.is_some() {
        cfg.output = cli.output.clone();
    }
    let out = Records::open(cfg.output.as_deref())?;
    let mut ctx = Ctx { cfg, out };
    match &cli.command {
        Command::Word(c) => free::word_cmd(&mut ctx, c),
        Command::Auto(c) => free::auto_cmd(&mut ctx, c),
        Command::Wh(c) => free::wh_cmd(&mut ctx, c),
        Command::Qm(c) => free::qm_cmd(&mut ctx, c),
        Command::Norm(c) => free::norm_cmd(&mut ctx, c),
        Command::Gp(c) => graphs::gp_cmd(&mut ctx, c),
        Command::Verify { suite, timings } => {
            let suite: Suite = suite.parse()?;
            let reports = run_suite(suite, ctx.cfg.seed);
            let mut status = Status::Ok;
            for r in &reports {
                let mut body = json!({
                    "id": r.id,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "seed": ctx.cfg.seed,
                    "limit_ms": r.limit_ms,
                });
                if *timings {
                    body["elapsed_ms"] = json!(r.elapsed_ms);
                }
                ctx.out.emit("verify", body)?;
                if !r.passed {
                    status = Status::Violation;
                }
            }
            Ok(status)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let cutoff = e.chain().any(|c| {
        matches!(
            c.downcast_ref::<autqm::Error>(),
            Some(autqm::Error::Cutoff { .. })
        )
    });
    if cutoff {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Ok(Status::Cutoff) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
