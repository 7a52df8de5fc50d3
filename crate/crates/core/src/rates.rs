//! Stokes / anti-Stokes rate ladder.
//!
//! The coherent cavity field dresses every vibrational level through the
//! diagonal position element, `ω̃_k = ω_k - α² g0 x_{k,k}/x_zpf`, and the
//! Raman rates sample the optical spectrum at the emitted-photon frequency:
//!
//! ```text
//! Γ+(k) = (α g0)^2 S(ω_l - (ω̃_{k+1} - ω̃_k))     k < K-1
//! Γ-(k) = (α g0)^2 S(ω_l + (ω̃_k - ω̃_{k-1}))     k >= 1
//! ```
//!
//! A thermal bath adds `n_th γ` upward and `(n_th + 1) γ` downward.

use crate::error::{Error, Result};
use crate::morse::MorseParams;
use crate::optics::Spectrum;

/// Coherent drive of the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    /// Laser frequency (THz).
    pub omega_l: f64,
    /// Real coherent amplitude `α >= 0`.
    pub alpha: f64,
    /// Single-phonon coupling (THz).
    pub g0: f64,
}

impl DriveConfig {
    pub fn new(omega_l: f64, alpha: f64, g0: f64) -> Self {
        assert!(alpha >= 0.0, "coherent amplitude must be non-negative");
        Self { omega_l, alpha, g0 }
    }

    /// Drive specified by the cavity population `|α|^2`.
    pub fn from_population(omega_l: f64, population: f64, g0: f64) -> Self {
        Self::new(omega_l, population.max(0.0).sqrt(), g0)
    }

    pub fn cavity_population(&self) -> f64 {
        self.alpha * self.alpha
    }

    /// Effective coupling `g = α g0`.
    pub fn g(&self) -> f64 {
        self.alpha * self.g0
    }

    /// Prefactor `α² g0` of the level dressing.
    pub fn dressing_strength(&self) -> f64 {
        self.alpha * self.alpha * self.g0
    }
}

/// Unstructured mechanical bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathConfig {
    pub gamma: f64,
    pub n_th: f64,
}

impl BathConfig {
    pub fn new(gamma: f64, n_th: f64) -> Self {
        assert!(gamma >= 0.0 && n_th >= 0.0, "bath parameters must be non-negative");
        Self { gamma, n_th }
    }
}

/// Dressed level frequencies `ω̃_k` for `k < truncation`, using the exact
/// digamma diagonal elements.
pub fn dressed_frequencies(morse: &MorseParams, drive: &DriveConfig, truncation: usize) -> Result<Vec<f64>> {
    if truncation == 0 {
        return Ok(Vec::new());
    }
    if let Ok(count) = morse.bound_state_count() {
        if truncation > count {
            return Err(Error::OutOfRange { index: truncation - 1, last: count - 1 });
        }
    }
    let strength = drive.dressing_strength();
    (0..truncation)
        .map(|k| {
            let bare = morse.eigenfrequency(k)?;
            if strength == 0.0 {
                return Ok(bare);
            }
            Ok(bare - strength * morse.position_element(k, k)?)
        })
        .collect()
}

/// Approximate Stokes transition frequency `ω̃_{k+1} - ω̃_k`, with the
/// dressing taken as a level-independent shift.
pub fn stokes_transition_approx(morse: &MorseParams, drive: &DriveConfig, k: usize) -> f64 {
    morse.omega_b() - drive.dressing_strength() * morse.diagonal_step_approx()
        - (k as f64 + 1.0) * 2.0 * morse.delta_omega_b()
}

/// Per-level rates for a truncated ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct RateLadder {
    omega_tilde: Vec<f64>,
    gamma_plus: Vec<f64>,
    gamma_minus: Vec<f64>,
    bath: Option<BathConfig>,
}

impl RateLadder {
    /// Ladder from explicit optomechanical rates. `gamma_plus[K-1]` and
    /// `gamma_minus[0]` are ignored by every consumer.
    pub fn from_rates(omega_tilde: Vec<f64>, gamma_plus: Vec<f64>, gamma_minus: Vec<f64>) -> Result<Self> {
        let k = gamma_plus.len();
        if gamma_minus.len() != k || (!omega_tilde.is_empty() && omega_tilde.len() != k) {
            return Err(Error::InvalidParameter {
                name: "rates",
                reason: "rate arrays must share the ladder length".into(),
            });
        }
        if gamma_plus.iter().chain(&gamma_minus).any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "rates",
                reason: "rates must be finite and non-negative".into(),
            });
        }
        Ok(Self { omega_tilde, gamma_plus, gamma_minus, bath: None })
    }

    pub fn truncation(&self) -> usize {
        self.gamma_plus.len()
    }

    pub fn omega_tilde(&self) -> &[f64] {
        &self.omega_tilde
    }

    pub fn gamma_plus(&self) -> &[f64] {
        &self.gamma_plus
    }

    pub fn gamma_minus(&self) -> &[f64] {
        &self.gamma_minus
    }

    pub fn bath(&self) -> Option<BathConfig> {
        self.bath
    }

    pub fn has_thermal(&self) -> bool {
        self.bath.is_some()
    }

    /// Total upward rate `Γ̄+(k) = Γ+(k) + n_th γ`.
    pub fn bar_plus(&self, k: usize) -> f64 {
        let thermal = self.bath.map_or(0.0, |b| b.n_th * b.gamma);
        self.gamma_plus[k] + thermal
    }

    /// Total downward rate `Γ̄-(k) = Γ-(k) + (n_th + 1) γ`.
    pub fn bar_minus(&self, k: usize) -> f64 {
        let thermal = self.bath.map_or(0.0, |b| (b.n_th + 1.0) * b.gamma);
        self.gamma_minus[k] + thermal
    }

    /// Attach the thermal bath; applying it twice is an error.
    pub fn with_thermal(mut self, bath: BathConfig) -> Result<Self> {
        if self.bath.is_some() {
            return Err(Error::ThermalAlreadyApplied);
        }
        self.bath = Some(bath);
        Ok(self)
    }
}

/// Neighbor-transition Raman rates of the truncated ladder.
pub fn raman_rates(
    morse: &MorseParams,
    spec: &dyn Spectrum,
    drive: &DriveConfig,
    truncation: usize,
) -> Result<RateLadder> {
    let omega_tilde = dressed_frequencies(morse, drive, truncation)?;
    let g2 = drive.g() * drive.g();
    let mut gamma_plus = vec![0.0; truncation];
    let mut gamma_minus = vec![0.0; truncation];
    if g2 > 0.0 {
        for k in 0..truncation.saturating_sub(1) {
            let transition = omega_tilde[k + 1] - omega_tilde[k];
            gamma_plus[k] = g2 * spec.density(drive.omega_l - transition);
            gamma_minus[k + 1] = g2 * spec.density(drive.omega_l + transition);
        }
    }
    RateLadder::from_rates(omega_tilde, gamma_plus, gamma_minus)
}

/// [`RateLadder::with_thermal`] as a free function.
pub fn total_rates(ladder: RateLadder, bath: &BathConfig) -> Result<RateLadder> {
    ladder.with_thermal(*bath)
}

/// Optomechanical jump rates between every pair of levels, including the
/// `|x_{k,j}/x_zpf|^2` weight. `rates[k][j]` is the rate from `j` to `k`.
///
/// Only used to cross-check the neighbor-only ladder.
pub fn all_pairs_rates(
    morse: &MorseParams,
    spec: &dyn Spectrum,
    drive: &DriveConfig,
    truncation: usize,
) -> Result<Vec<Vec<f64>>> {
    let omega_tilde = dressed_frequencies(morse, drive, truncation)?;
    let g2 = drive.g() * drive.g();
    let mut rates = vec![vec![0.0; truncation]; truncation];
    for (k, row) in rates.iter_mut().enumerate() {
        for (j, rate) in row.iter_mut().enumerate() {
            if j == k {
                continue;
            }
            let x = morse.position_element(k, j)?;
            *rate = g2 * x * x * spec.density(drive.omega_l - (omega_tilde[k] - omega_tilde[j]));
        }
    }
    Ok(rates)
}

/// Reference rates and spectral slopes of the linearized ladder:
/// `Γ+(k) ≈ Γ+ + η+ (k+1) g² 2δω_b` and `Γ-(k) ≈ Γ- - η- k g² 2δω_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedRates {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    /// Stokes reference frequency `ω_l - ω_b + α² g0 Δx` (THz).
    pub stokes_reference: f64,
    /// Anti-Stokes reference frequency `ω_l + ω_b - α² g0 Δx` (THz).
    pub anti_stokes_reference: f64,
}

impl LinearizedRates {
    pub fn stokes(&self, k: usize, g: f64, delta_omega_b: f64) -> f64 {
        self.gamma_plus + self.eta_plus * (k as f64 + 1.0) * g * g * 2.0 * delta_omega_b
    }

    pub fn anti_stokes(&self, k: usize, g: f64, delta_omega_b: f64) -> f64 {
        self.gamma_minus - self.eta_minus * k as f64 * g * g * 2.0 * delta_omega_b
    }
}

/// Expand the spectrum around the first Stokes and anti-Stokes lines.
///
/// For the harmonic oscillator the slopes are reported as zero and the
/// reference frequencies are the undressed sidebands `ω_l ∓ ω_b`.
pub fn linearized_params(morse: &MorseParams, spec: &dyn Spectrum, drive: &DriveConfig) -> LinearizedRates {
    let g2 = drive.g() * drive.g();
    let shift = drive.dressing_strength() * morse.diagonal_step_approx();
    let stokes_reference = drive.omega_l - morse.omega_b() + shift;
    let anti_stokes_reference = drive.omega_l + morse.omega_b() - shift;
    let (eta_plus, eta_minus) = if morse.is_harmonic() {
        (0.0, 0.0)
    } else {
        (spec.slope(stokes_reference), spec.slope(anti_stokes_reference))
    };
    LinearizedRates {
        gamma_plus: g2 * spec.density(stokes_reference),
        gamma_minus: g2 * spec.density(anti_stokes_reference),
        eta_plus,
        eta_minus,
        stokes_reference,
        anti_stokes_reference,
    }
}
