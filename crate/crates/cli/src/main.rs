//! `eac`: run, compare and validate coverage scenarios.
//!
//! Exit codes: 0 on success, 1 for an invalid scenario or command line,
//! 2 when a run or file write fails.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eac_core::controllers::ControllerKind;
use eac_core::engine::run_scenario;
use eac_core::output::{comparison_table, summary_text, sweep_table, write_run};
use eac_core::scenario::{load_scenario, to_toml_string, BUNDLED};
use eac_core::study::{compare_controllers, sweep_connectivity};
use eac_core::Error;

#[derive(Parser)]
#[command(
    name = "eac",
    version,
    about = "Energy-aware coverage control simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trace, summary and SVG snapshots.
    Run {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
        /// Override the controller named in the file.
        #[arg(long)]
        controller: Option<ControllerKind>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Steps to draw. Defaults to the initial and final partitions.
        #[arg(long, value_delimiter = ',')]
        svg_steps: Option<Vec<u32>>,
        #[arg(long, conflicts_with = "svg_steps")]
        no_svg: bool,
    },
    /// Run the same scenario under several controllers.
    Compare {
        scenario: String,
        #[arg(long, value_delimiter = ',', default_value = "EAC,ATC,WMTC,PBC")]
        controllers: Vec<ControllerKind>,
    },
    /// Re-run a scenario on disk graphs of several radii.
    SweepConnectivity {
        scenario: String,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
    },
    /// Parse a scenario and print it with all defaults resolved.
    Validate { scenario: String },
    /// List the bundled scenarios.
    List,
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run {
            scenario,
            controller,
            out,
            svg_steps,
            no_svg,
        } => {
            let mut config = load_scenario(&scenario)?;
            if let Some(kind) = controller {
                config.controller = kind;
            }
            let trace = run_scenario(&config)?;
            let steps = match (no_svg, svg_steps) {
                (true, _) => Vec::new(),
                (false, Some(steps)) => steps,
                (false, None) => vec![0, trace.steps()],
            };
            let written = write_run(&config, &trace, &out, &steps)?;
            print!("{}", summary_text(&config, &trace));
            for path in written {
                println!("wrote {}", path.display());
            }
        }
        Command::Compare {
            scenario,
            controllers,
        } => {
            let config = load_scenario(&scenario)?;
            print!(
                "{}",
                comparison_table(&compare_controllers(&config, &controllers)?)
            );
        }
        Command::SweepConnectivity { scenario, radii } => {
            let config = load_scenario(&scenario)?;
            print!("{}", sweep_table(&sweep_connectivity(&config, &radii)?));
        }
        Command::Validate { scenario } => {
            let config = load_scenario(&scenario)?;
            let graph = config.validate()?;
            println!(
                "ok: {} robots, {} controller, lambda2 {:.6}",
                config.robots.len(),
                config.controller,
                graph.algebraic_connectivity()
            );
            print!("{}", to_toml_string(&config));
        }
        Command::List => {
            for (name, _) in BUNDLED {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
