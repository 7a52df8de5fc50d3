//! Vibrational amplification past the harmonic instability: the Morse
//! ladder saturates where the harmonic estimate diverges.
//!
//! Run with `cargo run --release --example amplification`.

use anharm_om::scenario::amplification::{amplification_point, harmonic_threshold};
use anharm_om::{BathConfig, DriveConfig, MorseParams, SingleMode};

fn main() -> anharm_om::Result<()> {
    let spectrum = SingleMode::PLASMON;
    let bath = BathConfig::new(0.05, 0.05);
    let omega_l = 570.0;
    let threshold = harmonic_threshold(&spectrum, omega_l, 20.0, 2.0, bath.gamma).expect("blue-detuned drive");
    println!("harmonic threshold at |α|² = {threshold:.4}");

    let ladders = [MorseParams::new(20.0, 0.1)?, MorseParams::new(20.0, 0.2)?];
    println!("\n |α|²   n_x(0.1)  mean field   n_x(0.2)  mean field   harmonic");
    for i in 1..=12 {
        let population = 0.1 * i as f64;
        let drive = DriveConfig::from_population(omega_l, population, 2.0);
        let [a, b] = ladders.map(|m| amplification_point(&m, &spectrum, &drive, &bath, 120));
        let show = |v: Option<f64>| v.map_or("      -".to_string(), |v| format!("{v:>9.3}"));
        println!(
            "{population:>5.1} {} {} {} {} {}",
            show(a.n_x),
            show(a.meanfield),
            show(b.n_x),
            show(b.meanfield),
            show(a.harmonic)
        );
    }
    Ok(())
}
