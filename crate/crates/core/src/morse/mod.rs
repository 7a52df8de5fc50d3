//! Morse oscillator ladder.
//!
//! Frequencies are ν = ω/2π in THz and positions are measured in units of
//! the harmonic zero-point fluctuation `x_zpf`, so the mass, ħ, the well
//! depth and the Morse range parameter never appear in absolute units.
//! With `λ = (ω_b/δω_b - 1)/2` the ladder holds `ceil(λ)` bound states
//! (`floor(λ) + 1` unless `λ` is an integer) and the dimensionless range
//! parameter is `ã = sqrt(δω_b/ω_b)`.

pub mod special;

use crate::error::{Error, Result};
use special::{digamma, log_gamma_ratio};

/// Default number of simulated levels.
pub const DEFAULT_TRUNCATION: usize = 16;

/// Mechanical oscillator parameters. `delta_omega_b == 0` selects the
/// harmonic oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    omega_b: f64,
    delta_omega_b: f64,
    lambda: f64,
    a_tilde: f64,
}

impl MorseParams {
    pub fn new(omega_b: f64, delta_omega_b: f64) -> Result<Self> {
        if !(omega_b > 0.0 && omega_b.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "omega_b",
                reason: format!("must be positive and finite, got {omega_b}"),
            });
        }
        if !(delta_omega_b >= 0.0 && delta_omega_b < omega_b) {
            return Err(Error::InvalidParameter {
                name: "delta_omega_b",
                reason: format!("must satisfy 0 <= delta_omega_b < omega_b, got {delta_omega_b}"),
            });
        }
        let lambda = if delta_omega_b > 0.0 {
            (omega_b / delta_omega_b - 1.0) / 2.0
        } else {
            f64::INFINITY
        };
        Ok(Self {
            omega_b,
            delta_omega_b,
            lambda,
            a_tilde: (delta_omega_b / omega_b).sqrt(),
        })
    }

    pub fn harmonic(omega_b: f64) -> Result<Self> {
        Self::new(omega_b, 0.0)
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn delta_omega_b(&self) -> f64 {
        self.delta_omega_b
    }

    /// Real-valued `λ = (ω_b/δω_b - 1)/2`; infinite for the harmonic case.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Normalized range parameter `ã = a·x_zpf = sqrt(δω_b/ω_b)`.
    pub fn a_tilde(&self) -> f64 {
        self.a_tilde
    }

    pub fn is_harmonic(&self) -> bool {
        self.delta_omega_b == 0.0
    }

    /// Number of bound states, `floor(λ) + 1`. For integer `λ` the level
    /// `n = λ` sits exactly at the dissociation threshold and is not
    /// normalizable, so it is excluded: the count is `ceil(λ)` in both cases.
    pub fn bound_state_count(&self) -> Result<usize> {
        if self.is_harmonic() {
            return Err(Error::HarmonicUnbounded);
        }
        Ok(self.lambda.ceil() as usize)
    }

    /// Largest usable truncation not exceeding `requested`.
    pub fn truncation(&self, requested: usize) -> usize {
        match self.bound_state_count() {
            Ok(n) => requested.min(n),
            Err(_) => requested,
        }
    }

    fn check_level(&self, k: usize) -> Result<()> {
        if self.is_harmonic() {
            return Ok(());
        }
        let last = self.bound_state_count()? - 1;
        if k > last {
            Err(Error::OutOfRange { index: k, last })
        } else {
            Ok(())
        }
    }

    /// Largest `k` for which `ω_{k+1} > ω_k`.
    pub fn monotonic_bound(&self) -> f64 {
        if self.is_harmonic() {
            f64::INFINITY
        } else {
            self.omega_b / (2.0 * self.delta_omega_b) - 0.5
        }
    }

    /// `ω_k = ω_b (k + 1/2) - δω_b (k + 1/2)^2`.
    pub fn eigenfrequency(&self, k: usize) -> Result<f64> {
        self.check_level(k)?;
        let v = k as f64 + 0.5;
        Ok(self.omega_b * v - self.delta_omega_b * v * v)
    }

    /// Position matrix element `<φ_n| x |φ_m> / x_zpf`.
    pub fn position_element(&self, n: usize, m: usize) -> Result<f64> {
        self.check_level(n)?;
        self.check_level(m)?;
        if self.is_harmonic() {
            return Ok(if n.abs_diff(m) == 1 {
                (n.max(m) as f64).sqrt()
            } else {
                0.0
            });
        }
        if n == m {
            return self.diagonal_element(n);
        }
        let (hi, lo) = if n > m { (n, m) } else { (m, n) };
        let big_n = self.lambda;
        let d = hi - lo;
        let (hi_f, lo_f) = (hi as f64, lo as f64);
        let radial = (big_n - hi_f) * (big_n - lo_f);
        if radial <= 0.0 {
            // top state exactly at the dissociation threshold
            return Ok(0.0);
        }
        // ln[Γ(2N-hi+1) hi! / (Γ(2N-lo+1) lo!)]
        let log_ratio = log_gamma_ratio(lo_f + 1.0, d)? - log_gamma_ratio(2.0 * big_n - hi_f + 1.0, d)?;
        let sign = if d % 2 == 1 { 1.0 } else { -1.0 };
        let prefactor = 2.0 / (d as f64 * (2.0 * big_n - hi_f - lo_f)) / self.a_tilde;
        Ok(sign * prefactor * (radial * log_ratio.exp()).sqrt())
    }

    fn diagonal_element(&self, n: usize) -> Result<f64> {
        let two_n = 2.0 * self.lambda;
        let nf = n as f64;
        let bracket = (two_n + 1.0).ln() + digamma(two_n - nf + 1.0)?
            - digamma(two_n - 2.0 * nf + 1.0)?
            - digamma(two_n - 2.0 * nf)?;
        Ok(bracket / self.a_tilde)
    }

    /// Large-λ approximation of the diagonal element,
    /// `sqrt(ω_b/δω_b) [2 ln((λ+1/2)/λ) + (3 + 2/λ) n/(2λ+1)]`.
    ///
    /// Returns 0 for the harmonic oscillator, where the diagonal vanishes.
    pub fn diagonal_element_approx(&self, n: usize) -> f64 {
        if self.is_harmonic() {
            return 0.0;
        }
        let l = self.lambda;
        (2.0 * ((l + 0.5) / l).ln() + (3.0 + 2.0 / l) * n as f64 / (2.0 * l + 1.0)) / self.a_tilde
    }

    /// Per-level step of the approximate diagonal element,
    /// `sqrt(ω_b/δω_b) (3 + 2/λ)/(2λ + 1)`.
    pub fn diagonal_step_approx(&self) -> f64 {
        if self.is_harmonic() {
            return 0.0;
        }
        let l = self.lambda;
        (3.0 + 2.0 / l) / (2.0 * l + 1.0) / self.a_tilde
    }
}

/// Dense table of `x_{n,m}/x_zpf` for the lowest `K` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionMatrix {
    size: usize,
    data: Vec<f64>,
}

impl PositionMatrix {
    pub fn from_morse(params: &MorseParams, size: usize) -> Result<Self> {
        let mut data = vec![0.0; size * size];
        for n in 0..size {
            for m in 0..=n {
                let v = params.position_element(n, m)?;
                data[n * size + m] = v;
                data[m * size + n] = v;
            }
        }
        Ok(Self { size, data })
    }

    /// Harmonic elements `sqrt(max(n, m))` on the first off-diagonals.
    pub fn harmonic(size: usize) -> Self {
        let mut data = vec![0.0; size * size];
        for k in 1..size {
            let v = (k as f64).sqrt();
            data[k * size + k - 1] = v;
            data[(k - 1) * size + k] = v;
        }
        Self { size, data }
    }

    /// Table filled from `f(n, m)`, e.g. numerically integrated elements.
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; size * size];
        for n in 0..size {
            for m in 0..size {
                data[n * size + m] = f(n, m);
            }
        }
        Self { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.data[n * self.size + m]
    }

    /// Squared neighbor element `|x_{k+1,k}|^2`, the weight carried by the
    /// Stokes transition out of level `k`.
    #[inline]
    pub fn neighbor_weight(&self, k: usize) -> f64 {
        let x = self.get(k + 1, k);
        x * x
    }
}
