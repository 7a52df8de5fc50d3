//! Explicit time evolution of the rate equations relaxing onto the
//! stationary solution.
//!
//! Run with `cargo run --release --example rate_ladder_relaxation`.

use anharm_om::oracle::evolve_rate_ladder;
use anharm_om::rates::{raman_rates, total_rates};
use anharm_om::steady_state::{mechanical_population, solve_populations};
use anharm_om::{BathConfig, DriveConfig, Hybrid, MorseParams, PopulationVector, PositionMatrix};

fn main() -> anharm_om::Result<()> {
    let morse = MorseParams::new(20.0, 2.0)?;
    let k = morse.truncation(16);
    let x = PositionMatrix::from_morse(&morse, k)?;
    let drive = DriveConfig::from_population(494.7, 1.0, 2.0);
    let ladder = total_rates(raman_rates(&morse, &Hybrid::PLASMONIC_DIELECTRIC, &drive, k)?, &BathConfig::new(0.05, 0.05))?;
    let stationary = solve_populations(&ladder, &x)?;

    let run = evolve_rate_ladder(&ladder, &x, &PopulationVector::ground(k), 400.0, 0.01, 4000)?;
    println!("   t        n_x        ‖p - p_stat‖∞");
    for (t, p) in run.times.iter().zip(&run.populations) {
        let gap = p.as_slice().iter().zip(stationary.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("{t:>6.0} {:>10.6} {gap:>14.3e}", mechanical_population(p, &x));
    }
    println!("stationary n_x = {:.6}", mechanical_population(&stationary, &x));
    Ok(())
}
