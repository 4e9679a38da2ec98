//! `funk` — batch front end for the closed-geodesic transform experiments.
//!
//! One command = one experiment = one JSON report on stdout (or `--output`).
//! Exit status: 0 when every checked invariant passes, 1 when a verdict
//! fails, 2 for invalid input.

mod commands;
mod report;

use clap::{Parser, Subcommand};
use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "funk",
    version,
    about = "Closed-geodesic tomography experiments on S², CPⁿ, and restricted root systems"
)]
struct Cli {
    /// Write the JSON report to this path instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Write the assembled operator matrix as CSV (sphere kernel, cpn rank)
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root-system checks and the bundled symmetric-space table
    Roots {
        #[command(subcommand)]
        cmd: commands::roots::RootsCmd,
    },
    /// Great-circle transform experiments on S²
    Sphere {
        #[command(subcommand)]
        cmd: commands::sphere::SphereCmd,
    },
    /// Geometry and transform experiments on CPⁿ
    Cpn {
        #[command(subcommand)]
        cmd: commands::cpn::CpnCmd,
    },
}

fn dispatch(cli: &Cli) -> Result<(report::Report, Option<String>), Box<dyn Error>> {
    match &cli.command {
        Command::Roots { cmd } => commands::roots::run(cmd),
        Command::Sphere { cmd } => commands::sphere::run(cmd),
        Command::Cpn { cmd } => commands::cpn::run(cmd),
    }
}

fn run(cli: &Cli) -> Result<bool, Box<dyn Error>> {
    let (report, csv) = dispatch(cli)?;
    match (&cli.csv, csv) {
        (Some(path), Some(payload)) => std::fs::write(path, payload)?,
        (Some(_), None) => {
            return Err("--csv is not supported for this command".into());
        }
        _ => {}
    }
    let mut json = report::to_json(&report)?;
    json.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
