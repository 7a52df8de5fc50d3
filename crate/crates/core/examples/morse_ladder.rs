//! Morse level spectrum, position elements and their grid-oracle check.
//!
//! Run with `cargo run --release --example morse_ladder`.

use anharm_om::oracle::richardson_spectrum;
use anharm_om::{MorseParams, PositionMatrix};

fn main() -> anharm_om::Result<()> {
    let morse = MorseParams::new(20.0, 0.2)?;
    println!(
        "ω_b = 20 THz, δω_b = 0.2 THz: λ = {}, ã = {:.4}, {} bound states",
        morse.lambda(),
        morse.a_tilde(),
        morse.bound_state_count()?
    );

    println!("\n k   ω_k (THz)   ω_k+1 - ω_k   x_k,k     x_k+1,k");
    for k in 0..6 {
        let w = morse.eigenfrequency(k)?;
        let gap = morse.eigenfrequency(k + 1)? - w;
        println!(
            "{k:>2} {w:>11.4} {gap:>13.4} {:>9.5} {:>10.5}",
            morse.position_element(k, k)?,
            morse.position_element(k + 1, k)?
        );
    }

    let x = PositionMatrix::from_morse(&morse, 8)?;
    let harmonic = PositionMatrix::harmonic(8);
    println!("\nneighbor weights |x_k+1,k|² against the harmonic k+1:");
    for k in 0..7 {
        println!("  k = {k}: {:.5} vs {}", x.neighbor_weight(k), harmonic.neighbor_weight(k));
    }

    let oracle = richardson_spectrum(&morse, 9, 0.01)?;
    let mut worst = 0.0_f64;
    for n in 0..9 {
        worst = worst.max(((oracle.eigenvalues[n] - morse.eigenfrequency(n)?) / morse.eigenfrequency(n)?).abs());
    }
    let mut worst_x = 0.0_f64;
    for n in 0..9 {
        for m in 0..9 {
            worst_x = worst_x.max((oracle.elements.get(n, m).abs() - morse.position_element(n, m)?.abs()).abs());
        }
    }
    println!("\ngrid oracle, 9 levels: max relative eigenvalue error {worst:.2e}, max |x| error {worst_x:.2e}");
    Ok(())
}
