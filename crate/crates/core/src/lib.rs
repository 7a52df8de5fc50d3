//! Anharmonic molecular optomechanics.
//!
//! A Morse vibrational ladder coupled to a structured optical reservoir:
//! level spectrum and position elements ([`morse`]), cavity spectra
//! ([`optics`]), Raman rate ladders ([`rates`]), stationary populations and
//! intensity correlations ([`steady_state`]), strong-drive amplification and
//! classical lasing trajectories ([`lasing`]), brute-force validators
//! ([`oracle`]) and the scenario runner behind the `anharm-om` binary
//! ([`scenario`]).

// Guards are written `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod lasing;
pub mod linalg;
pub mod morse;
pub mod optics;
pub mod oracle;
pub mod rates;
pub mod scenario;
pub mod steady_state;

pub use error::{Error, Result};
pub use morse::{MorseParams, PositionMatrix};
pub use optics::{DrivenMode, Hybrid, OpticalSpectrum, SingleMode, Spectrum};
pub use rates::{BathConfig, DriveConfig, RateLadder};
pub use steady_state::{PopulationVector, SteadyStateResult};
