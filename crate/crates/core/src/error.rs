use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("harmonic oscillator has an unbounded ladder; supply an explicit truncation")]
    HarmonicUnbounded,

    #[error("level index {index} outside the bound ladder (last bound state is {last})")]
    OutOfRange { index: usize, last: usize },

    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no stationary distribution: rate matrix is singular")]
    NoStationaryDistribution,

    #[error("stationary solve residual {residual:e} exceeds tolerance")]
    ResidualTooLarge { residual: f64 },

    #[error("intensity correlation undefined for zero mechanical population")]
    UndefinedCorrelation,

    #[error("thermal rates already applied to this ladder")]
    ThermalAlreadyApplied,

    #[error("thermal rates have not been applied to this ladder")]
    ThermalMissing,

    #[error("no stationary mean-field solution")]
    NoMeanFieldSolution,

    #[error("trajectory escaped or diverged at tau = {tau}")]
    Diverged { tau: f64 },

    #[error("averaging window too short: {periods:.1} mechanical periods, need {required}")]
    WindowTooShort { periods: f64, required: f64 },

    #[error("grid too small: eigenvector {state} has boundary amplitude {amplitude:e}")]
    GridTooSmall { state: usize, amplitude: f64 },

    #[error("time step {dt} too large for rate scale {max_rate} (need dt <= {limit})")]
    StepTooLarge { dt: f64, max_rate: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
