//! Command-line front end for the complaint anomaly pipeline.

mod config;
mod report;
mod stages;
mod svg;

use clap::{Parser, Subcommand};

use crate::config::{Flags, RunConfig};

#[derive(Parser)]
#[command(name = "meritscan", version, about = "Detect systematic non-meritorious complaints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the complaint export, select records and discount amounts.
    Ingest(Flags),
    /// Clean the selected narratives.
    Clean(Flags),
    /// Build feature matrices, narrative quantities and Cobb-Douglas fits.
    Featurize(Flags),
    /// Run the repeated train/test classification study.
    Train(Flags),
    /// Compute I-, S- and B-indices over each run's predicted-meritorious set.
    Indices(Flags),
    /// Render tables and SVG plots from the computed artifacts.
    Report(Flags),
    /// Every stage in order.
    Run(Flags),
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let (flags, stage): (&Flags, fn(&RunConfig) -> anyhow::Result<()>) = match &cli.command {
        Command::Ingest(f) => (f, stages::ingest),
        Command::Clean(f) => (f, stages::clean),
        Command::Featurize(f) => (f, stages::featurize),
        Command::Train(f) => (f, stages::train),
        Command::Indices(f) => (f, stages::indices),
        Command::Report(f) => (f, stages::report),
        Command::Run(f) => (f, stages::run_all),
    };
    stage(&RunConfig::resolve(flags)?)
}
