//! Strong-drive regime: mean-field amplification and classical lasing
//! trajectories.

pub mod meanfield;
pub mod trajectory;

pub use meanfield::{harmonic_population, meanfield_steady, MeanFieldParams, MeanFieldSolution};
pub use trajectory::{
    envelope_growth, integrate_from, integrate_trajectory, lasing_onset, oscillation_stats, OptomechSystem, OscillationStats, RestoringForce,
    Sample, TrajectoryOptions, TrajectoryResult, TrajectoryState,
};
