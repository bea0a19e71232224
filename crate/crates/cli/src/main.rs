use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cvqt_cli::{cmd_calibrate, cmd_run, cmd_sweep, cmd_table1, Outcome, Result, RunConfig};

#[derive(Parser)]
#[command(name = "cvqt", version, about = "Continuous-variable teleportation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// `key = value` configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the CSV here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides the `seed` key
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// `key=value`, applied after the file; repeatable
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Recompute the derived circuit-table values against the printed ones
    Table1,
    /// Free-space fidelity sweep over y, bath and squeezing grids
    Sweep,
    /// End-to-end teleportation run
    Run,
    /// Zero-input noise calibration
    Calibrate,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::parse(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    for o in &cli.overrides {
        cfg.apply_override(o)?;
    }
    if let Some(seed) = cli.seed {
        cfg.set("seed", &seed.to_string())?;
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = load(cli)?;
    let outcome = match cli.command {
        Command::Table1 => cmd_table1(&cfg)?,
        Command::Sweep => cmd_sweep(&cfg)?,
        Command::Run => cmd_run(&cfg)?,
        Command::Calibrate => cmd_calibrate(&cfg)?,
    };
    match &cli.out {
        Some(path) => outcome.table.write_to(io::BufWriter::new(fs::File::create(path)?))?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            outcome.table.write_to(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => ExitCode::from(outcome.status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
