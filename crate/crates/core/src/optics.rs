//! Optical spectral densities `S_opt(ω)` seen by the vibrational ladder.
//!
//! Spectra are dimensionful (1/THz): a single Lorentzian mode peaks at
//! `2/κ`. The hybrid resonator couples a broad (plasmonic) mode to a narrow
//! (dielectric) one and produces a Fano peak/trough pair near the narrow
//! mode.

use num_complex::Complex64;

/// Finite-difference step used for spectral slopes, in THz.
pub const SLOPE_STEP: f64 = 1e-4;

/// A scalar spectral density evaluated at optical frequencies (THz).
pub trait Spectrum: Send + Sync {
    fn density(&self, omega: f64) -> f64;

    /// Local slope `dS/dω`, see [`spectrum_slope`].
    fn slope(&self, omega: f64) -> f64 {
        spectrum_slope(|w| self.density(w), omega)
    }
}

impl<S: Spectrum + ?Sized> Spectrum for &S {
    fn density(&self, omega: f64) -> f64 {
        (**self).density(omega)
    }
}

/// Central difference with step [`SLOPE_STEP`].
pub fn spectrum_slope(spec: impl Fn(f64) -> f64, omega: f64) -> f64 {
    (spec(omega + SLOPE_STEP) - spec(omega - SLOPE_STEP)) / (2.0 * SLOPE_STEP)
}

/// Single Lorentzian cavity mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleMode {
    pub omega_1: f64,
    pub kappa_1: f64,
}

impl SingleMode {
    /// Plasmonic mode at 550 THz with a 60 THz linewidth.
    pub const PLASMON: SingleMode = SingleMode { omega_1: 550.0, kappa_1: 60.0 };

    pub fn new(omega_1: f64, kappa_1: f64) -> Self {
        assert!(kappa_1 > 0.0, "linewidth must be positive");
        Self { omega_1, kappa_1 }
    }
}

impl Spectrum for SingleMode {
    fn density(&self, omega: f64) -> f64 {
        let half = 0.5 * self.kappa_1;
        let detuning = omega - self.omega_1;
        half / (detuning * detuning + half * half)
    }
}

/// Which hybrid mode the laser populates, i.e. whose response is read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DrivenMode {
    /// Response of the broad mode 1:
    /// `Im[(ω-ω2-iκ2/2) / ((ω-ω1-iκ1/2)(ω-ω2-iκ2/2) - f^2)]`.
    /// Shows the Fano peak/trough; reduces to the mode-1 Lorentzian at `f = 0`.
    #[default]
    Broad,
    /// Response of the narrow mode 2:
    /// `Im[(ω-ω1-iκ1/2) / ((ω-ω1-iκ1/2)(ω-ω2-iκ2/2) - f^2)]`.
    /// A single dressed Lorentzian; reduces to the mode-2 Lorentzian at `f = 0`.
    Narrow,
}

/// Two coupled modes with frequencies `ω1, ω2`, linewidths `κ1, κ2` and
/// coupling `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hybrid {
    pub omega_1: f64,
    pub omega_2: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    pub f: f64,
    pub driven: DrivenMode,
}

impl Hybrid {
    /// Plasmonic mode at 550 THz (κ = 60 THz) coupled with f = 15 THz to a
    /// dielectric mode at 486 THz (κ = 0.15 THz).
    pub const PLASMONIC_DIELECTRIC: Hybrid = Hybrid {
        omega_1: 550.0,
        omega_2: 486.0,
        kappa_1: 60.0,
        kappa_2: 0.15,
        f: 15.0,
        driven: DrivenMode::Broad,
    };

    pub fn new(omega_1: f64, omega_2: f64, kappa_1: f64, kappa_2: f64, f: f64) -> Self {
        assert!(kappa_1 > 0.0 && kappa_2 > 0.0, "linewidths must be positive");
        assert!(f >= 0.0, "coupling must be non-negative");
        Self { omega_1, omega_2, kappa_1, kappa_2, f, driven: DrivenMode::Broad }
    }

    pub fn with_driven(mut self, driven: DrivenMode) -> Self {
        self.driven = driven;
        self
    }
}

impl Spectrum for Hybrid {
    fn density(&self, omega: f64) -> f64 {
        let a = Complex64::new(omega - self.omega_1, -0.5 * self.kappa_1);
        let b = Complex64::new(omega - self.omega_2, -0.5 * self.kappa_2);
        let numerator = match self.driven {
            DrivenMode::Broad => b,
            DrivenMode::Narrow => a,
        };
        (numerator / (a * b - self.f * self.f)).im
    }
}

/// Either spectrum type, selected at runtime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalSpectrum {
    Single(SingleMode),
    Hybrid(Hybrid),
}

impl Spectrum for OpticalSpectrum {
    fn density(&self, omega: f64) -> f64 {
        match self {
            OpticalSpectrum::Single(s) => s.density(omega),
            OpticalSpectrum::Hybrid(h) => h.density(omega),
        }
    }
}

/// Location and value of an extremum found by a grid scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub omega: f64,
    pub value: f64,
}

fn scan(spec: &dyn Spectrum, lo: f64, hi: f64, step: f64, better: impl Fn(f64, f64) -> bool) -> Extremum {
    let n = ((hi - lo) / step).round() as usize;
    let mut best = Extremum { omega: lo, value: spec.density(lo) };
    for i in 1..=n {
        let omega = lo + i as f64 * step;
        let value = spec.density(omega);
        if better(value, best.value) {
            best = Extremum { omega, value };
        }
    }
    best
}

/// Minimum of the spectrum on a uniform grid over `[lo, hi]`.
pub fn find_trough(spec: &dyn Spectrum, lo: f64, hi: f64, step: f64) -> Extremum {
    scan(spec, lo, hi, step, |v, b| v < b)
}

/// Maximum of the spectrum on a uniform grid over `[lo, hi]`.
pub fn find_peak(spec: &dyn Spectrum, lo: f64, hi: f64, step: f64) -> Extremum {
    scan(spec, lo, hi, step, |v, b| v > b)
}
