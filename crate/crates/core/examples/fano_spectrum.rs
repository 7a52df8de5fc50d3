//! Optical spectra seen by the vibrational ladder: the single plasmonic
//! Lorentzian and the hybrid plasmonic-dielectric Fano profile.
//!
//! Run with `cargo run --release --example fano_spectrum`.

use anharm_om::optics::{find_peak, find_trough};
use anharm_om::{DrivenMode, Hybrid, SingleMode, Spectrum};

fn main() {
    let single = SingleMode::PLASMON;
    let broad = Hybrid::PLASMONIC_DIELECTRIC;
    let narrow = broad.with_driven(DrivenMode::Narrow);

    let peak = find_peak(&broad, 470.0, 500.0, 1e-3);
    let trough = find_trough(&broad, 470.0, 500.0, 1e-3);
    println!("plasmon-driven hybrid: peak {:.3} THz (S = {:.4}), trough {:.3} THz (S = {:.2e})", peak.omega, peak.value, trough.omega, trough.value);
    println!("  peak/trough contrast {:.0}", peak.value / trough.value);
    let p = find_peak(&narrow, 470.0, 500.0, 1e-3);
    println!("dielectric-mode response: single peak {:.3} THz (S = {:.3})", p.omega, p.value);

    println!("\n ω (THz)   single      hybrid(broad)  hybrid(narrow)");
    for i in 0..=16 {
        let w = 476.0 + i as f64;
        println!("{w:>7.1} {:>10.5} {:>14.5} {:>14.5}", single.density(w), broad.density(w), narrow.density(w));
    }
}
