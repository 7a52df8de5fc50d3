//! Classical optomechanical trajectories in normalized time `τ = ω_b t`:
//!
//! ```text
//! dα/dτ = -i(Δ/ω_b)α - i(g0/ω_b) x α - i(Ω/ω_b) - (κ/2ω_b)α
//! dx/dτ = 2p - (γ/2ω_b) x
//! dp/dτ = -(g0/ω_b)|α|² - F(x) - (γ/2ω_b) p
//! ```
//!
//! with `F(x) = x/2` or the Morse force `(1 - e^{-ãx}) e^{-ãx} / 2ã`.
//! Positions are in units of `x_zpf` and `Δ = ω_a - ω_l`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default step: one thousandth of a mechanical period.
pub const DEFAULT_DTAU: f64 = TAU / 1000.0;

/// Largest accepted step.
pub const MAX_DTAU: f64 = 0.01;

/// Minimum number of mechanical periods in an averaging window.
pub const MIN_WINDOW_PERIODS: f64 = 50.0;

/// Escape distance in units of the Morse length `1/ã`.
pub const DISSOCIATION_GUARD: f64 = 5.0;

/// `σ_x` above which a trajectory counts as lasing.
pub const ONSET_SIGMA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RestoringForce {
    Harmonic,
    Morse { a_tilde: f64 },
}

impl RestoringForce {
    /// Morse force for anharmonicity `δω_b`, harmonic when it is zero.
    pub fn for_anharmonicity(omega_b: f64, delta_omega_b: f64) -> Self {
        if delta_omega_b > 0.0 {
            RestoringForce::Morse { a_tilde: (delta_omega_b / omega_b).sqrt() }
        } else {
            RestoringForce::Harmonic
        }
    }

    #[inline]
    pub fn force(&self, x: f64) -> f64 {
        match *self {
            RestoringForce::Harmonic => 0.5 * x,
            RestoringForce::Morse { a_tilde } => {
                let e = (-a_tilde * x).exp();
                -(-a_tilde * x).exp_m1() * e / (2.0 * a_tilde)
            }
        }
    }

    fn escape_distance(&self) -> f64 {
        match *self {
            RestoringForce::Harmonic => 1e12,
            RestoringForce::Morse { a_tilde } => DISSOCIATION_GUARD / a_tilde,
        }
    }
}

/// Parameters of the driven optomechanical system (THz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechSystem {
    /// `Δ = ω_a - ω_l`
    pub detuning: f64,
    pub kappa: f64,
    /// Drive amplitude `Ω`.
    pub drive: f64,
    pub g0: f64,
    pub gamma: f64,
    pub omega_b: f64,
    pub force: RestoringForce,
}

impl OptomechSystem {
    /// Drive chosen so that the bare cavity holds `population` photons,
    /// `Ω = |α| sqrt(Δ² + κ²/4)`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_population(
        omega_a: f64,
        omega_l: f64,
        kappa: f64,
        population: f64,
        g0: f64,
        gamma: f64,
        omega_b: f64,
        force: RestoringForce,
    ) -> Self {
        let detuning = omega_a - omega_l;
        let drive = population.max(0.0).sqrt() * (detuning * detuning + 0.25 * kappa * kappa).sqrt();
        Self { detuning, kappa, drive, g0, gamma, omega_b, force }
    }

    /// Stationary cavity amplitude with the mechanics held at `x = 0`.
    pub fn bare_cavity_amplitude(&self) -> Complex64 {
        Complex64::new(0.0, -self.drive) / Complex64::new(0.5 * self.kappa, self.detuning)
    }

    fn derivative(&self, s: &TrajectoryState) -> [f64; 4] {
        let w = self.omega_b;
        let damp = 0.5 * self.gamma / w;
        let alpha = s.alpha;
        let rotation = Complex64::new(0.5 * self.kappa / w, (self.detuning + self.g0 * s.x) / w);
        let d_alpha = -rotation * alpha - Complex64::new(0.0, self.drive / w);
        let dx = 2.0 * s.p - damp * s.x;
        let dp = -(self.g0 / w) * alpha.norm_sqr() - self.force.force(s.x) - damp * s.p;
        [d_alpha.re, d_alpha.im, dx, dp]
    }

    fn rk4(&self, s: &TrajectoryState, h: f64) -> TrajectoryState {
        let shift = |s: &TrajectoryState, k: &[f64; 4], f: f64| TrajectoryState {
            alpha: s.alpha + Complex64::new(k[0], k[1]) * f,
            x: s.x + k[2] * f,
            p: s.p + k[3] * f,
            tau: s.tau + f,
        };
        let k1 = self.derivative(s);
        let k2 = self.derivative(&shift(s, &k1, 0.5 * h));
        let k3 = self.derivative(&shift(s, &k2, 0.5 * h));
        let k4 = self.derivative(&shift(s, &k3, h));
        let comb = |i: usize| (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) * h / 6.0;
        TrajectoryState {
            alpha: s.alpha + Complex64::new(comb(0), comb(1)),
            x: s.x + comb(2),
            p: s.p + comb(3),
            tau: s.tau + h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub alpha: Complex64,
    pub x: f64,
    pub p: f64,
    pub tau: f64,
}

impl TrajectoryState {
    pub const REST: TrajectoryState = TrajectoryState { alpha: Complex64::new(0.0, 0.0), x: 0.0, p: 0.0, tau: 0.0 };

    fn is_finite(&self) -> bool {
        self.alpha.re.is_finite() && self.alpha.im.is_finite() && self.x.is_finite() && self.p.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryOptions {
    pub dtau: f64,
    /// Length of each statistics window in mechanical periods.
    pub window_periods: usize,
    /// Relative agreement of `σ_x` between consecutive windows.
    pub tolerance: f64,
    /// `σ_x` below this counts as quiescent and agreeing.
    pub quiet_floor: f64,
    /// No steady state is declared before this many mechanical periods.
    pub min_periods: usize,
    /// Hard cap on the integration length in mechanical periods.
    pub max_periods: usize,
    /// Keep every n-th step in the returned series (0 keeps none).
    pub sample_stride: usize,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            dtau: DEFAULT_DTAU,
            window_periods: 100,
            tolerance: 0.01,
            quiet_floor: 1e-9,
            min_periods: 1000,
            max_periods: 20_000,
            sample_stride: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub tau: f64,
    pub x: f64,
    pub cavity_population: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationStats {
    pub sigma_x: f64,
    pub x_mean: f64,
    /// `σ_x² / 4`
    pub n_coh: f64,
}

impl OscillationStats {
    fn from_moments(mean: f64, variance: f64) -> Self {
        let sigma_x = variance.max(0.0).sqrt();
        Self { sigma_x, x_mean: mean, n_coh: sigma_x * sigma_x / 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryResult {
    pub samples: Vec<Sample>,
    pub stats: OscillationStats,
    /// Mean `|α|²` over the final window.
    pub realized_population: f64,
    /// Whether two consecutive windows agreed before `max_periods`.
    pub converged: bool,
    /// `ln(σ_last/σ_previous)` per unit `τ` over the final two windows.
    pub growth_rate: f64,
    pub final_state: TrajectoryState,
}

fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// Temporal mean and standard deviation of `x` over the final
/// `1 - settle_fraction` of a uniformly sampled series with spacing `dtau`.
pub fn oscillation_stats(x: &[f64], dtau: f64, settle_fraction: f64) -> Result<OscillationStats> {
    if !(0.0..1.0).contains(&settle_fraction) {
        return Err(Error::InvalidParameter { name: "settle_fraction", reason: format!("must lie in [0, 1), got {settle_fraction}") });
    }
    let start = (x.len() as f64 * settle_fraction).floor() as usize;
    let window = &x[start.min(x.len())..];
    let periods = window.len() as f64 * dtau / TAU;
    if periods < MIN_WINDOW_PERIODS || window.is_empty() {
        return Err(Error::WindowTooShort { periods, required: MIN_WINDOW_PERIODS });
    }
    let (mean, var) = mean_and_variance(window);
    Ok(OscillationStats::from_moments(mean, var))
}

/// Integrate from rest with fixed-step RK4 until two consecutive windows
/// report the same `σ_x`.
pub fn integrate_trajectory(system: &OptomechSystem, opts: &TrajectoryOptions) -> Result<TrajectoryResult> {
    integrate_from(system, TrajectoryState::REST, opts)
}

pub fn integrate_from(system: &OptomechSystem, start: TrajectoryState, opts: &TrajectoryOptions) -> Result<TrajectoryResult> {
    if !(opts.dtau > 0.0 && opts.dtau <= MAX_DTAU) {
        return Err(Error::InvalidParameter { name: "dtau", reason: format!("must lie in (0, {MAX_DTAU}], got {}", opts.dtau) });
    }
    if (opts.window_periods as f64) < MIN_WINDOW_PERIODS {
        return Err(Error::WindowTooShort { periods: opts.window_periods as f64, required: MIN_WINDOW_PERIODS });
    }
    let window_steps = (opts.window_periods as f64 * TAU / opts.dtau).round() as usize;
    let window_tau = window_steps as f64 * opts.dtau;
    let max_windows = (opts.max_periods / opts.window_periods).max(2);
    let min_windows = opts.min_periods.div_ceil(opts.window_periods).max(2);
    let escape = system.force.escape_distance();

    let mut state = start;
    let mut samples = Vec::new();
    let mut xs = vec![0.0; window_steps];
    let mut previous: Option<OscillationStats> = None;
    let mut step = 0usize;
    for window in 0..max_windows {
        let mut population = 0.0;
        for slot in xs.iter_mut() {
            state = system.rk4(&state, opts.dtau);
            step += 1;
            if !state.is_finite() || state.x.abs() > escape {
                return Err(Error::Diverged { tau: state.tau });
            }
            *slot = state.x;
            population += state.alpha.norm_sqr();
            if opts.sample_stride > 0 && step.is_multiple_of(opts.sample_stride) {
                samples.push(Sample { tau: state.tau, x: state.x, cavity_population: state.alpha.norm_sqr() });
            }
        }
        let (mean, var) = mean_and_variance(&xs);
        let stats = OscillationStats::from_moments(mean, var);
        let realized_population = population / window_steps as f64;
        let growth_rate = previous.map_or(0.0, |prev| growth(prev.sigma_x, stats.sigma_x, window_tau));
        if let Some(prev) = previous {
            let scale = stats.sigma_x.max(prev.sigma_x);
            let quiet = scale < opts.quiet_floor;
            let agree = (stats.sigma_x - prev.sigma_x).abs() <= opts.tolerance * scale;
            if window + 1 >= min_windows && (quiet || agree) {
                return Ok(TrajectoryResult { samples, stats, realized_population, converged: true, growth_rate, final_state: state });
            }
        }
        if window + 1 == max_windows {
            return Ok(TrajectoryResult { samples, stats, realized_population, converged: false, growth_rate, final_state: state });
        }
        previous = Some(stats);
    }
    unreachable!("max_windows >= 2")
}

fn growth(before: f64, after: f64, span: f64) -> f64 {
    if before > 0.0 && after > 0.0 {
        (after / before).ln() / span
    } else {
        0.0
    }
}

impl TrajectoryResult {
    /// Lasing if the final window oscillates beyond [`ONSET_SIGMA`] or the
    /// envelope was still growing when the run stopped.
    pub fn is_lasing(&self) -> bool {
        self.stats.sigma_x > ONSET_SIGMA || (!self.converged && self.growth_rate > 0.0)
    }
}

/// Exponential rate of the oscillation envelope of a trajectory started at
/// rest, measured over two windows after `settle_periods`.
pub fn envelope_growth(system: &OptomechSystem, settle_periods: usize, opts: &TrajectoryOptions) -> Result<f64> {
    let run = TrajectoryOptions {
        min_periods: settle_periods + 2 * opts.window_periods,
        max_periods: settle_periods + 2 * opts.window_periods,
        sample_stride: 0,
        tolerance: 0.0,
        quiet_floor: 0.0,
        ..*opts
    };
    Ok(integrate_trajectory(system, &run)?.growth_rate)
}

/// Smallest cavity population at which the rest state starts to lase,
/// located by bisection on the sign of [`envelope_growth`] within
/// `[lo, hi]`. `system_at` builds the system for a given population.
pub fn lasing_onset(
    system_at: impl Fn(f64) -> OptomechSystem,
    lo: f64,
    hi: f64,
    tolerance: f64,
    opts: &TrajectoryOptions,
) -> Result<f64> {
    let settle = 2 * opts.window_periods;
    let grows = |n: f64| -> Result<bool> { Ok(envelope_growth(&system_at(n), settle, opts)? > 0.0) };
    let (mut lo, mut hi) = (lo, hi);
    if grows(lo)? || !grows(hi)? {
        return Err(Error::InvalidParameter { name: "onset bracket", reason: format!("[{lo}, {hi}] does not bracket the onset") });
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if grows(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
