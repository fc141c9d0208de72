use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use confscreen::report::commands::{run, Command, Format, Invocation};

#[derive(Parser)]
#[command(
    name = "confscreen",
    version,
    about = "Validity screen and selective-prediction criterion for LLM confidence logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Md,
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Item-level CSV (model,family,track,item_id,correct,keep,bet)
    #[arg(long)]
    input: Option<PathBuf>,
    /// TOML config; keys are ScreenConfig field names plus `tracks`
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "md")]
    format: FormatArg,
    /// Write all artifacts into this directory instead of printing
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (results do not depend on this)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// VRS table: validity indices and tier per model
    Screen(Common),
    /// AUROC, selective gain and risk-coverage data per model
    Selective(Common),
    /// Criterion-validation statistics across models
    Stats {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        bootstrap_n: usize,
        /// Model-level summary CSV instead of item data
        #[arg(long, conflicts_with = "input")]
        summary: Option<PathBuf>,
    },
    /// Split-half cross-validation of screen against criterion
    Splithalf {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1_000)]
        splits: usize,
    },
    /// Generate a synthetic cohort from a profile file
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        profiles: PathBuf,
    },
}

fn invocation(command: Command, common: &Common) -> Invocation {
    let mut inv = Invocation::new(command);
    inv.input = common.input.clone();
    inv.config = common.config.clone();
    inv.seed = common.seed;
    inv.format = match common.format {
        FormatArg::Md => Format::Md,
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    inv
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (inv, common) = match &cli.command {
        Cmd::Screen(c) => (invocation(Command::Screen, c), c),
        Cmd::Selective(c) => (invocation(Command::Selective, c), c),
        Cmd::Stats {
            common,
            bootstrap_n,
            summary,
        } => {
            let mut inv = invocation(Command::Stats, common);
            inv.bootstrap_n = *bootstrap_n;
            inv.summary = summary.clone();
            (inv, common)
        }
        Cmd::Splithalf { common, splits } => {
            let mut inv = invocation(Command::SplitHalf, common);
            inv.splits = *splits;
            (inv, common)
        }
        Cmd::Synth { common, profiles } => {
            let mut inv = invocation(Command::Synth, common);
            inv.profiles = Some(profiles.clone());
            (inv, common)
        }
    };

    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }

    let result = run(&inv).and_then(|out| match &common.out {
        Some(dir) => out.write_to(dir),
        None => match std::io::stdout().lock().write_all(out.primary.as_bytes()) {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
