//! Phonon blockade: a laser sweep over the Fano trough suppresses the
//! mechanical population and drives g2(0) below 1.
//!
//! Run with `cargo run --release --example phonon_blockade`.

use anharm_om::optics::find_trough;
use anharm_om::rates::dressed_frequencies;
use anharm_om::scenario::blockade::blockade_point;
use anharm_om::{BathConfig, DriveConfig, Hybrid, MorseParams};

fn main() -> anharm_om::Result<()> {
    let morse = MorseParams::new(20.0, 2.0)?;
    let spectrum = Hybrid::PLASMONIC_DIELECTRIC;
    let bath = BathConfig::new(0.05, 0.05);
    let truncation = morse.truncation(16);
    let reference = DriveConfig::from_population(501.0, 4.0, 2.0);

    let dressed = dressed_frequencies(&morse, &reference, 3)?;
    let trough = find_trough(&spectrum, 475.0, 500.0, 1e-3).omega;
    println!("{truncation} bound levels; dressed Stokes transitions {:.3} and {:.3} THz", dressed[1] - dressed[0], dressed[2] - dressed[1]);
    println!("Fano trough at {trough:.3} THz");

    let mut best_n = (0.0, f64::INFINITY);
    let mut best_g = (0.0, f64::INFINITY);
    println!("\n ω_l (THz)     n_x       g2(0)");
    for i in 0..=70 {
        let omega_l = 475.0 + 0.5 * i as f64;
        let drive = DriveConfig { omega_l, ..reference };
        let s = blockade_point(&morse, &spectrum, &drive, &bath, truncation)?;
        let g2 = s.g2_0.unwrap_or(f64::NAN);
        if i % 5 == 0 {
            println!("{omega_l:>9.1} {:>10.5} {g2:>10.5}", s.n_x);
        }
        if s.n_x < best_n.1 {
            best_n = (omega_l, s.n_x);
        }
        if g2 < best_g.1 {
            best_g = (omega_l, g2);
        }
    }
    println!("\nn_x minimum {:.4} at {} THz (first Stokes line in the trough)", best_n.1, best_n.0);
    println!("g2(0) minimum {:.4} at {} THz (second Stokes line in the trough)", best_g.1, best_g.0);
    Ok(())
}
