use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "signalsim", version, about = "Simulate and compare signal controllers at a four-way intersection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one controller (or all of them) over a scenario and write reports.
    Run(RunArgs),
    /// Run all six controllers on identical arrivals and print the comparison.
    Compare(CompareArgs),
    /// Generate the 625-rule fuzzy rule base by repeated simulation.
    BuildRulebase(BuildArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ControllerArg {
    Fixed,
    Pretimed,
    Segmental,
    Fuzzy,
    Realtime,
    Fuzzyreal,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long, default_value = "abshar_synthetic")]
    scenario: String,

    /// Rule-base CSV; required by the fuzzy and fuzzyreal controllers.
    #[arg(long, value_name = "FILE")]
    rulebase: Option<PathBuf>,

    /// Overrides the scenario's master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Directory for the summary and series files.
    #[arg(long, env = "SIGNALSIM_OUT", default_value = "signalsim-out")]
    out: PathBuf,

    /// Periods per segment for the segmental controller.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    segment_len: u32,

    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    controller: ControllerArg,

    #[command(flatten)]
    common: ScenarioArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    common: ScenarioArgs,
}

#[derive(Debug, Args)]
struct BuildArgs {
    /// Simulations per state.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    reps: u32,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output CSV. Spread statistics go next to it as `<stem>.stats.json`.
    #[arg(long, default_value = "rulebase.csv")]
    out: PathBuf,

    /// Take turn fractions from this scenario (file or bundled name)
    /// instead of all-straight traffic.
    #[arg(long)]
    scenario: Option<String>,

    /// Suppress progress output.
    #[arg(long, short)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => commands::run(args.controller, &args.common, false),
        Command::Compare(args) => commands::run(ControllerArg::All, &args.common, true),
        Command::BuildRulebase(args) => commands::build_rulebase(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
