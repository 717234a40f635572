//! `hybrid`: run a scenario file and write its artifacts plus `manifest.json`.
//!
//! Exit status: 0 when every check passes, 2 when a check fails, 1 on
//! configuration or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hybrid_bracket::scenario::{run, Command, Manifest, RunOutput, Scenario};

#[derive(Parser)]
#[command(name = "hybrid", version, about = "Scenario runner for the hybrid quantum-classical bracket")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Evolve an observable or state with the truncated series and track expectations.
    Evolve(Common),
    /// Compare the spin-orbit closed forms against the series.
    SpinOrbit(Common),
    /// Find the first time a trajectory loses positivity.
    Positivity(Common),
    /// Jacobi residuals of the canonical and rival brackets on random triples.
    Jacobi(Common),
    /// Scan the three-parameter bracket family and the tensor/functional checks.
    Uniqueness(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario TOML file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of sampled phase-space points.
    #[arg(long)]
    points: Option<usize>,
    /// Print nothing except errors.
    #[arg(long)]
    quiet: bool,
}

impl Sub {
    fn split(self) -> (Command, Common) {
        match self {
            Sub::Evolve(c) => (Command::Evolve, c),
            Sub::SpinOrbit(c) => (Command::SpinOrbit, c),
            Sub::Positivity(c) => (Command::Positivity, c),
            Sub::Jacobi(c) => (Command::Jacobi, c),
            Sub::Uniqueness(c) => (Command::Uniqueness, c),
        }
    }
}

fn load(opts: &Common) -> Result<(Scenario, String), String> {
    let text = fs::read_to_string(&opts.config).map_err(|e| format!("{}: {e}", opts.config.display()))?;
    let mut scenario = Scenario::from_toml(&text).map_err(|e| format!("{}: {e}", opts.config.display()))?;
    if let Some(seed) = opts.seed {
        scenario.seed = Some(seed);
    }
    if let Some(points) = opts.points {
        scenario.points.count = points;
    }
    scenario.validate().map_err(|e| e.to_string())?;
    Ok((scenario, text))
}

fn write_all(dir: &Path, manifest: &Manifest, out: &RunOutput) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for f in &out.files {
        fs::write(dir.join(&f.name), &f.contents)?;
    }
    let mut json = serde_json::to_string_pretty(manifest).map_err(std::io::Error::other)?;
    json.push('\n');
    fs::write(dir.join("manifest.json"), json)
}

fn main() -> ExitCode {
    let (cmd, opts) = Cli::parse().command.split();
    let (scenario, text) = match load(&opts) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let out = match run(cmd, &scenario) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let manifest = Manifest::new(&scenario.name, cmd.name(), &text, scenario.seed, &out);
    if let Err(e) = write_all(&opts.out, &manifest, &out) {
        eprintln!("error: {}: {e}", opts.out.display());
        return ExitCode::from(1);
    }
    if !opts.quiet {
        for note in &out.notes {
            println!("note: {note}");
        }
        for c in &out.checks {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        println!("wrote {} files to {}", out.files.len() + 1, opts.out.display());
    }
    if out.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
