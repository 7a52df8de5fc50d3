//! Anharmonicity-corrected mean-field equation for the mechanical
//! population,
//!
//! ```text
//! dn/dt = a n² + b n + c
//! a = 4 g² δω_b (η- + 2η+)
//! b = -[(γ + Γ- - Γ+) - 2 g² δω_b (η- + 5η+)]
//! c = Γ+ + γ n_th + 2 g² δω_b η+
//! ```
//!
//! obtained by closing `⟨n²⟩ = n + 2n²` on a thermal state.

use crate::error::{Error, Result};
use crate::morse::MorseParams;
use crate::optics::Spectrum;
use crate::rates::{linearized_params, BathConfig, DriveConfig, LinearizedRates};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldParams {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    /// Effective coupling `α g0`.
    pub g: f64,
    pub delta_omega_b: f64,
    pub gamma: f64,
    pub n_th: f64,
}

impl MeanFieldParams {
    pub fn from_linearized(lin: &LinearizedRates, g: f64, delta_omega_b: f64, bath: &BathConfig) -> Self {
        Self {
            gamma_plus: lin.gamma_plus,
            gamma_minus: lin.gamma_minus,
            eta_plus: lin.eta_plus,
            eta_minus: lin.eta_minus,
            g,
            delta_omega_b,
            gamma: bath.gamma,
            n_th: bath.n_th,
        }
    }

    /// Linearize the given spectrum and drive.
    pub fn build(morse: &MorseParams, spec: &dyn Spectrum, drive: &DriveConfig, bath: &BathConfig) -> Self {
        let lin = linearized_params(morse, spec, drive);
        Self::from_linearized(&lin, drive.g(), morse.delta_omega_b(), bath)
    }

    /// `(a, b, c)` of `dn/dt = a n² + b n + c`.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        let g2d = self.g * self.g * self.delta_omega_b;
        let a = 4.0 * g2d * (self.eta_minus + 2.0 * self.eta_plus);
        let b = -((self.gamma + self.gamma_minus - self.gamma_plus) - 2.0 * g2d * (self.eta_minus + 5.0 * self.eta_plus));
        let c = self.gamma_plus + self.gamma * self.n_th + 2.0 * g2d * self.eta_plus;
        (a, b, c)
    }

    /// Net linear damping `γ + Γ- - Γ+`; negative beyond the harmonic threshold.
    pub fn harmonic_damping(&self) -> f64 {
        self.gamma + self.gamma_minus - self.gamma_plus
    }
}

/// Stationary mean-field population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldSolution {
    pub n_x: f64,
    /// Linear coefficient `b > 0`: the population grows at small `n`, and
    /// only the quadratic term holds it.
    pub linearly_unstable: bool,
}

/// Root of `a n² + b n + c = 0` continuous with `-c/b` as `a → 0`.
pub fn meanfield_steady(params: &MeanFieldParams) -> Result<MeanFieldSolution> {
    let (a, b, c) = params.coefficients();
    let linearly_unstable = b > 0.0;
    let n_x = if a == 0.0 {
        if b < 0.0 {
            -c / b
        } else {
            return Err(Error::NoMeanFieldSolution);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(Error::NoMeanFieldSolution);
        }
        // q/a and c/q are the two roots; c/q → -c/b when a → 0.
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return Err(Error::NoMeanFieldSolution);
        }
        let continuous = c / q;
        let other = q / a;
        match (continuous >= 0.0, other >= 0.0) {
            (true, _) => continuous,
            (false, true) => other,
            (false, false) => return Err(Error::NoMeanFieldSolution),
        }
    };
    if !n_x.is_finite() {
        return Err(Error::NoMeanFieldSolution);
    }
    Ok(MeanFieldSolution { n_x, linearly_unstable })
}

/// Harmonic reference `(Γ+ + γ n_th)/(γ + Γ- - Γ+)`; errors past threshold.
pub fn harmonic_population(params: &MeanFieldParams) -> Result<f64> {
    let damping = params.harmonic_damping();
    if damping <= 0.0 {
        return Err(Error::NoMeanFieldSolution);
    }
    Ok((params.gamma_plus + params.gamma * params.n_th) / damping)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gp: f64, gm: f64, ep: f64, em: f64, d: f64) -> MeanFieldParams {
        MeanFieldParams {
            gamma_plus: gp,
            gamma_minus: gm,
            eta_plus: ep,
            eta_minus: em,
            g: 1.0,
            delta_omega_b: d,
            gamma: 0.05,
            n_th: 0.05,
        }
    }

    #[test]
    fn harmonic_limit() {
        let p = params(0.02, 0.01, -1e-3, 1e-3, 0.0);
        let n = meanfield_steady(&p).unwrap().n_x;
        assert!((n - (0.02 + 0.0025) / (0.05 + 0.01 - 0.02)).abs() < 1e-14);
        assert_eq!(n, harmonic_population(&p).unwrap());
    }

    #[test]
    fn cooling_limit() {
        let p = params(0.0, 0.3, 0.0, 0.0, 0.0);
        let n = meanfield_steady(&p).unwrap().n_x;
        assert!((n - 0.0025 / 0.35).abs() < 1e-15);
        assert!(n <= 0.05);
    }

    #[test]
    fn harmonic_divergence() {
        let at = |gp: f64| meanfield_steady(&params(gp, 0.01, 0.0, 0.0, 0.0));
        let near = at(0.06 * (1.0 - 1e-3)).unwrap().n_x;
        let nearer = at(0.06 * (1.0 - 1e-6)).unwrap().n_x;
        assert!(nearer > 100.0 * near);
        assert!(at(0.07).is_err());
    }

    #[test]
    fn root_is_continuous_in_anharmonicity() {
        let base = params(0.04, 0.01, -2e-3, 1e-3, 0.0);
        let n0 = meanfield_steady(&base).unwrap().n_x;
        let gap = |d: f64| (meanfield_steady(&MeanFieldParams { delta_omega_b: d, ..base }).unwrap().n_x - n0).abs();
        let (g5, g7, g9) = (gap(1e-5), gap(1e-7), gap(1e-9));
        assert!(g5 > g7 && g7 > g9, "{g5} {g7} {g9}");
        assert!(g9 / n0 < 1e-8);
    }

    #[test]
    fn saturation_beyond_threshold() {
        // Negative Stokes slope: gain drops for higher levels.
        let p = params(0.1, 0.01, -0.01, 0.0, 0.2);
        let sol = meanfield_steady(&p).unwrap();
        assert!(sol.linearly_unstable);
        let (a, b, c) = p.coefficients();
        let n = sol.n_x;
        assert!(n > 0.0 && (a * n * n + b * n + c).abs() < 1e-12);
        // stable: derivative of the flow is negative at the root
        assert!(2.0 * a * n + b < 0.0);
    }
}
