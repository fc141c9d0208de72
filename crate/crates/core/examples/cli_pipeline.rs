//! The CLI commands driven as a library: synthesize a cohort, then screen,
//! evaluate, test and cross-validate it, writing every artifact to a
//! directory.
//!
//!     cargo run --release --example cli_pipeline -- [out_dir]

use std::path::{Path, PathBuf};

use confscreen::report::commands::{run as run_command, Command, Invocation};
use confscreen::Result;

pub fn run(out: &Path) -> Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut synth = Invocation::new(Command::Synth);
    synth.profiles = Some(data.join("cohort.toml"));
    synth.config = Some(data.join("screen.toml"));
    let cohort_dir = out.join("synth");
    run_command(&synth)?.write_to(&cohort_dir)?;
    let items = cohort_dir.join("synthetic.csv");

    for command in [Command::Screen, Command::Selective, Command::Stats, Command::SplitHalf] {
        let mut inv = Invocation::new(command);
        inv.input = Some(items.clone());
        inv.config = Some(data.join("screen.toml"));
        inv.bootstrap_n = 2_000;
        inv.splits = 200;
        let output = run_command(&inv)?;
        output.write_to(&out.join(command.name()))?;
        let names: Vec<&str> = output.files.iter().map(|(n, _)| n.as_str()).collect();
        println!("{}: {}", command.name(), names.join(", "));
        if command == Command::Screen {
            print!("{}", output.primary);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("confscreen-out"));
    run(&out)?;
    println!("artifacts in {}", out.display());
    Ok(())
}
