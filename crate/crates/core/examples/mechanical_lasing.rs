//! Classical trajectories below and above the lasing onset, and the onset
//! itself for the harmonic and Morse restoring forces.
//!
//! Run with `cargo run --release --example mechanical_lasing`.

use anharm_om::lasing::{integrate_trajectory, lasing_onset, OptomechSystem, RestoringForce, TrajectoryOptions};

fn system(population: f64, delta_omega_b: f64) -> OptomechSystem {
    OptomechSystem::from_population(550.0, 570.0, 60.0, population, 2.0, 0.05, 20.0, RestoringForce::for_anharmonicity(20.0, delta_omega_b))
}

fn main() -> anharm_om::Result<()> {
    let opts = TrajectoryOptions::default();
    for delta in [0.0, 0.1, 0.2] {
        let onset = lasing_onset(|p| system(p, delta), 0.25, 0.35, 1e-5, &opts)?;
        println!("δω_b = {delta}: onset at |α|² = {onset:.5}");
        for population in [0.25, 0.4, 0.6] {
            let run = integrate_trajectory(&system(population, delta), &opts)?;
            println!(
                "  |α|² = {population}: σ_x = {:.3e}, ⟨x⟩ = {:+.3}, n_coh = {:.2}, realized |α|² = {:.3}, lasing = {}",
                run.stats.sigma_x,
                run.stats.x_mean,
                run.stats.n_coh,
                run.realized_population,
                run.is_lasing()
            );
        }
    }
    Ok(())
}
