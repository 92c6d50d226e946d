use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use vsslab::cli::{run_command, CliCommand, CommonArgs};

#[derive(Parser)]
#[command(name = "vsslab", version, about = "Sliding-mode / multimodel depth-control laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SharedArgs {
    /// Scenario file (flat `key = value`); defaults apply when omitted
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output directory for artifacts
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated signals to plot (z, u, s, validities)
    #[arg(long, value_delimiter = ',')]
    plots: Vec<String>,
    /// Settling band as a fraction of the reference scale
    #[arg(long, default_value_t = vsslab::defaults::SETTLE_BAND)]
    band: f64,
}

impl SharedArgs {
    fn into_common(self) -> CommonArgs {
        CommonArgs {
            scenario_path: self.scenario,
            out_dir: self.out,
            seed: self.seed,
            plots: self.plots,
            band: self.band,
        }
    }
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Run one scenario and emit its trace, metrics, and plots
    Simulate(SharedArgs),
    /// Run all five controllers on one base scenario and tabulate metrics
    Compare(SharedArgs),
    /// Run every applicable stability check on the scenario's bank
    Stability(SharedArgs),
    /// Cartesian sweep over `sweep.<key> = v1, v2, ...` axes
    Sweep(SharedArgs),
}

fn main() {
    let cli = Cli::parse();
    let cmd = match cli.command {
        Command::Simulate(a) => CliCommand::Simulate(a.into_common()),
        Command::Compare(a) => CliCommand::Compare(a.into_common()),
        Command::Stability(a) => CliCommand::Stability(a.into_common()),
        Command::Sweep(a) => CliCommand::Sweep(a.into_common()),
    };
    match run_command(&cmd) {
        Ok(artifacts) => {
            print!("{}", artifacts.summary);
            if !artifacts.summary.ends_with('\n') {
                println!();
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
