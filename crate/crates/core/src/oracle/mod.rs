//! Brute-force validators that share no numerics with the production
//! paths: grid diagonalization of the Schrödinger problem, numeric position
//! elements and explicit evolution of the rate ladder.

pub mod evolve;
pub mod grid;

pub use evolve::{evolve_rate_ladder, RateEvolution};
pub use grid::{
    domain_for, grid_diagonalize, numeric_position_elements, overlap_matrix, richardson_spectrum, GridEigen, GridSpec,
    OracleSpectrum,
};
