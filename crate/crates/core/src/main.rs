use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anharm_om::scenario::{run_scenario, Scenario, ScenarioConfig, ScenarioError};
use clap::Parser;

/// Run a named anharmonic-optomechanics scenario and write CSV, SVG and a
/// JSON summary.
#[derive(Debug, Parser)]
#[command(name = "anharm-om", version)]
struct Cli {
    /// One of: blockade-laser-sweep, blockade-map, thermal-sweep,
    /// laser-freq-alt, amplification, lasing-map, validate.
    scenario: String,
    /// INI-style config file; may be empty to keep the defaults.
    #[arg(long)]
    config: PathBuf,
    /// Override a value, e.g. `--set drive.omega_l=498`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, env = "ANHARM_OM_WORKERS", default_value_t = default_workers())]
    workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(cli: &Cli) -> Result<i32, ScenarioError> {
    let scenario: Scenario = cli.scenario.parse()?;
    let text = std::fs::read_to_string(&cli.config).map_err(|e| ScenarioError::Config {
        location: cli.config.display().to_string(),
        message: format!("cannot read config: {e}"),
    })?;
    let path = cli.config.display().to_string();
    let config = ScenarioConfig::resolve(scenario, Some((&text, &path)), &cli.overrides)?;
    let outcome = run_scenario(&config, cli.workers)?;
    let written = outcome.artifacts.write_to(&cli.out)?;
    // A closed stdout (e.g. piped into `head`) must not abort the run.
    let mut stdout = std::io::stdout().lock();
    let _ = write!(stdout, "{}", outcome.report);
    for path in written {
        let _ = writeln!(stdout, "wrote {}", path.display());
    }
    if outcome.failed_points > 0 {
        eprintln!("{} of {} points failed", outcome.failed_points, outcome.total_points);
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(&cli).unwrap_or_else(|e| {
        eprintln!("anharm-om: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
