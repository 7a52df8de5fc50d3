//! Run a named scenario from code, with overrides, and write its artifacts.
//!
//! Run with `cargo run --release --example scenario_runner -- [out_dir]`.

use anharm_om::scenario::{run_scenario, Scenario, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/thermal-sweep".into());
    let overrides = vec!["sweep.omega_l=480:500:81".to_string()];
    let config = ScenarioConfig::resolve(Scenario::ThermalSweep, None, &overrides)?;
    let outcome = run_scenario(&config, 2)?;
    print!("{}", outcome.report);
    for path in outcome.artifacts.write_to(out.as_ref())? {
        println!("wrote {}", path.display());
    }
    std::process::exit(outcome.exit_code());
}
