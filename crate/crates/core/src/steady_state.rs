//! Stationary populations of the rate ladder and the position-quadrature
//! readouts `n_x` and `g²_x(0)`.
//!
//! Level `k` is pumped to `k+1` at `|x_{k+1,k}|² Γ̄+(k)` and relaxed from
//! `k+1` to `k` at `|x_{k+1,k}|² Γ̄-(k+1)`. The stationary system replaces
//! the last balance equation with `Σ p_k = 1`.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::morse::PositionMatrix;
use crate::rates::RateLadder;

/// Tolerance on `‖M p - e_K‖∞ / max(1, ‖M‖∞)` after the stationary solve.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Level occupation probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationVector(Vec<f64>);

impl PopulationVector {
    /// Wrap probabilities without renormalizing.
    pub fn new(p: Vec<f64>) -> Self {
        Self(p)
    }

    /// All population in the ground state.
    pub fn ground(size: usize) -> Self {
        let mut p = vec![0.0; size];
        if size > 0 {
            p[0] = 1.0;
        }
        Self(p)
    }

    /// Truncated geometric distribution `p_k ∝ (n/(n+1))^k`.
    pub fn thermal(n_th: f64, size: usize) -> Self {
        let ratio = n_th / (n_th + 1.0);
        let raw: Vec<f64> = (0..size).map(|k| ratio.powi(k as i32)).collect();
        let total: f64 = raw.iter().sum();
        Self(raw.into_iter().map(|v| v / total).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Mean level index `Σ k p_k`.
    pub fn mean_level(&self) -> f64 {
        self.0.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for PopulationVector {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Stationary populations together with both readouts.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateResult {
    pub populations: PopulationVector,
    pub n_x: f64,
    /// `None` when `n_x == 0`.
    pub g2_0: Option<f64>,
}

fn check_sizes(ladder: &RateLadder, elements: &PositionMatrix) -> Result<usize> {
    let k = ladder.truncation();
    if k < 2 {
        return Err(Error::InvalidParameter { name: "truncation", reason: format!("need at least 2 levels, got {k}") });
    }
    if elements.size() < k {
        return Err(Error::InvalidParameter {
            name: "elements",
            reason: format!("position matrix has {} levels, ladder has {k}", elements.size()),
        });
    }
    Ok(k)
}

/// Stationary populations of the weighted birth-death ladder.
pub fn solve_populations(ladder: &RateLadder, elements: &PositionMatrix) -> Result<PopulationVector> {
    if !ladder.has_thermal() {
        return Err(Error::ThermalMissing);
    }
    let size = check_sizes(ladder, elements)?;
    let mut m = DenseMatrix::zeros(size);
    for k in 0..size - 1 {
        let w = elements.neighbor_weight(k);
        let up = w * ladder.bar_plus(k);
        let down = w * ladder.bar_minus(k + 1);
        m.add(k + 1, k, up);
        m.add(k, k, -up);
        m.add(k, k + 1, down);
        m.add(k + 1, k + 1, -down);
    }
    m.row_mut(size - 1).fill(1.0);
    let mut rhs = vec![0.0; size];
    rhs[size - 1] = 1.0;

    let p = m.solve(&rhs).ok_or(Error::NoStationaryDistribution)?;
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoStationaryDistribution);
    }
    let residual = m.mul_vec(&p).iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if residual > RESIDUAL_TOLERANCE * m.norm_inf().max(1.0) {
        return Err(Error::ResidualTooLarge { residual });
    }
    Ok(PopulationVector(p.into_iter().map(|v| v.max(0.0)).collect()))
}

/// `n_x = Σ_i p_i Σ_{k<i} x_{ik}²`.
pub fn mechanical_population(p: &PopulationVector, elements: &PositionMatrix) -> f64 {
    p.as_slice()
        .iter()
        .enumerate()
        .map(|(i, pi)| pi * (0..i).map(|k| elements.get(i, k).powi(2)).sum::<f64>())
        .sum()
}

/// Unnormalized `G² = Σ_i p_i Σ_{l<i} T_{il}²` with the two-step lowering
/// amplitude `T_{il} = Σ_{l<k<i} x_{ik} x_{kl}`.
pub fn second_moment(p: &PopulationVector, elements: &PositionMatrix) -> f64 {
    p.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, pi)| **pi != 0.0)
        .map(|(i, pi)| {
            let lowered: f64 = (0..i)
                .map(|l| {
                    let t: f64 = (l + 1..i).map(|k| elements.get(i, k) * elements.get(k, l)).sum();
                    t * t
                })
                .sum();
            pi * lowered
        })
        .sum()
}

/// `g²_x(0) = G² / n_x²`.
pub fn intensity_correlation(p: &PopulationVector, elements: &PositionMatrix) -> Result<f64> {
    let n_x = mechanical_population(p, elements);
    if n_x <= 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(second_moment(p, elements) / (n_x * n_x))
}

/// Solve and evaluate both readouts.
pub fn steady_state(ladder: &RateLadder, elements: &PositionMatrix) -> Result<SteadyStateResult> {
    let populations = solve_populations(ladder, elements)?;
    let n_x = mechanical_population(&populations, elements);
    let g2_0 = intensity_correlation(&populations, elements).ok();
    Ok(SteadyStateResult { populations, n_x, g2_0 })
}

/// Closed-form three-level populations and harmonic readouts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevel {
    pub p: [f64; 3],
    /// `p1 + 2 p2`
    pub n_x: f64,
    /// `2 p2 / n_x²`, `NaN` when `n_x == 0`.
    pub g2: f64,
}

/// Three-level stationary solution from the total rates
/// `Γ̄+(0), Γ̄+(1), Γ̄-(1), Γ̄-(2)`.
pub fn three_level_analytic(plus_0: f64, plus_1: f64, minus_1: f64, minus_2: f64) -> Result<ThreeLevel> {
    let d = minus_1 * minus_2 + minus_2 * plus_0 + plus_0 * plus_1;
    if !(d > 0.0) {
        return Err(Error::NoStationaryDistribution);
    }
    let p = [minus_1 * minus_2 / d, minus_2 * plus_0 / d, plus_0 * plus_1 / d];
    let n_x = p[1] + 2.0 * p[2];
    let g2 = if n_x > 0.0 { 2.0 * p[2] / (n_x * n_x) } else { f64::NAN };
    Ok(ThreeLevel { p, n_x, g2 })
}

/// Three-level `g²` written in rates:
/// `2Γ̄+(1)[Γ̄-(1)Γ̄-(2) + Γ̄+(0)(Γ̄-(2) + Γ̄+(1))] / (Γ̄+(0)(Γ̄-(2) + 2Γ̄+(1))²)`.
pub fn g2_three_level(plus_0: f64, plus_1: f64, minus_1: f64, minus_2: f64) -> Result<f64> {
    let denom = plus_0 * (minus_2 + 2.0 * plus_1).powi(2);
    if !(denom > 0.0) {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(2.0 * plus_1 * (minus_1 * minus_2 + plus_0 * (minus_2 + plus_1)) / denom)
}

/// Both estimates of `g²` for a level-independent anti-Stokes rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormG2 {
    /// Exact three-level expression with `Γ̄-(1) = Γ̄-(2) = Γ̄-`.
    pub first_line: f64,
    /// `2Γ̄+(1)/Γ̄+(0) (1 + Γ̄+(0)/Γ̄-)`, valid for weak pumping.
    pub crude: f64,
}

pub fn g2_closed_form(plus_0: f64, plus_1: f64, minus: f64) -> Result<ClosedFormG2> {
    if !(plus_0 > 0.0 && minus > 0.0) {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(ClosedFormG2 {
        first_line: g2_three_level(plus_0, plus_1, minus, minus)?,
        crude: 2.0 * plus_1 / plus_0 * (1.0 + plus_0 / minus),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::MorseParams;
    use crate::rates::BathConfig;

    fn ladder(plus: Vec<f64>, minus: Vec<f64>, bath: BathConfig) -> RateLadder {
        RateLadder::from_rates(vec![], plus, minus).unwrap().with_thermal(bath).unwrap()
    }

    fn cold() -> BathConfig {
        BathConfig::new(0.0, 0.0)
    }

    #[test]
    fn two_level_balance() {
        let l = ladder(vec![0.3, 0.0], vec![0.0, 1.1], BathConfig::new(0.2, 0.1));
        let p = solve_populations(&l, &PositionMatrix::harmonic(2)).unwrap();
        assert!((p[1] / p[0] - l.bar_plus(0) / l.bar_minus(1)).abs() < 1e-14);
        assert!((p.total() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn thermal_ladder_is_geometric() {
        let l = ladder(vec![0.0; 16], vec![0.0; 16], BathConfig::new(0.05, 0.05));
        let p = solve_populations(&l, &PositionMatrix::harmonic(16)).unwrap();
        for k in 0..15 {
            assert!((p[k + 1] - p[k] * 0.05 / 1.05).abs() < 1e-15, "k={k}");
        }
        assert!((p[1] / p[0] - 0.05 / 1.05).abs() < 1e-12);
    }

    #[test]
    fn missing_bath_and_singular_ladder() {
        let raw = RateLadder::from_rates(vec![], vec![0.0; 3], vec![0.0; 3]).unwrap();
        assert_eq!(solve_populations(&raw, &PositionMatrix::harmonic(3)), Err(Error::ThermalMissing));
        let dead = raw.with_thermal(cold()).unwrap();
        assert_eq!(solve_populations(&dead, &PositionMatrix::harmonic(3)), Err(Error::NoStationaryDistribution));
    }

    #[test]
    fn thermal_readouts() {
        let x = PositionMatrix::harmonic(16);
        let p = PopulationVector::thermal(0.05, 16);
        assert!((mechanical_population(&p, &x) - 0.05).abs() < 1e-6);
        let x = PositionMatrix::harmonic(24);
        let p = PopulationVector::thermal(0.05, 24);
        assert!((intensity_correlation(&p, &x).unwrap() - 2.0).abs() < 0.02);
    }

    #[test]
    fn pure_states() {
        let x = PositionMatrix::harmonic(4);
        let ground = PopulationVector::ground(4);
        assert_eq!(mechanical_population(&ground, &x), 0.0);
        assert_eq!(intensity_correlation(&ground, &x), Err(Error::UndefinedCorrelation));
        let single = PopulationVector::new(vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(intensity_correlation(&single, &x).unwrap(), 0.0);
        // Fock |n>: g2 = n(n-1)/n² = 1 - 1/n
        let fock3 = PopulationVector::new(vec![0.0, 0.0, 0.0, 1.0]);
        assert!((intensity_correlation(&fock3, &x).unwrap() - 2.0 / 3.0).abs() < 1e-14);
    }

    // ⟨X⁻ᵀ X⁻⟩ and ⟨X⁻ᵀX⁻ᵀX⁻X⁻⟩ built from explicit matrix products, with
    // X⁻ the strictly upper triangle of the position matrix (the lowering part).
    fn operator_readouts(p: &PopulationVector, x: &PositionMatrix) -> (f64, f64) {
        let k = p.len();
        let lower = |i: usize, j: usize| if i < j { x.get(i, j) } else { 0.0 };
        let mut two = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                two[i * k + j] = (0..k).map(|m| lower(m, j) * lower(i, m)).sum();
            }
        }
        let mut n = 0.0;
        let mut g = 0.0;
        for s in 0..k {
            n += p[s] * (0..k).map(|j| lower(j, s).powi(2)).sum::<f64>();
            g += p[s] * (0..k).map(|j| two[j * k + s].powi(2)).sum::<f64>();
        }
        (n, g)
    }

    #[test]
    fn readouts_match_operator_products() {
        let m = MorseParams::new(20.0, 2.0).unwrap();
        let x = PositionMatrix::from_morse(&m, 5).unwrap();
        for p in [
            PopulationVector::thermal(0.3, 5),
            PopulationVector::new(vec![0.1, 0.2, 0.3, 0.25, 0.15]),
        ] {
            let (n, g) = operator_readouts(&p, &x);
            assert!((mechanical_population(&p, &x) - n).abs() < 1e-12);
            assert!((second_moment(&p, &x) - g).abs() < 1e-12);
        }
    }

    #[test]
    fn three_level_examples() {
        let t = three_level_analytic(1.0, 1.0, 1.0, 1.0).unwrap();
        for p in t.p {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!((t.g2 - 2.0 / 3.0).abs() < 1e-15);
        let t = three_level_analytic(0.0, 0.0, 1.0, 2.0).unwrap();
        assert_eq!(t.p, [1.0, 0.0, 0.0]);
        assert!(three_level_analytic(0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn three_level_matches_solver() {
        let (p0, p1, m1, m2) = (1.0, 0.3, 2.0, 2.5);
        let l = ladder(vec![p0, p1, 0.0], vec![0.0, m1, m2], cold());
        let x = PositionMatrix::harmonic(3);
        let p = solve_populations(&l, &x).unwrap();
        let t = three_level_analytic(p0, p1, m1, m2).unwrap();
        for k in 0..3 {
            assert!((p[k] - t.p[k]).abs() < 1e-12);
        }
        let g2 = intensity_correlation(&p, &x).unwrap();
        assert!((g2 - t.g2).abs() < 1e-12);
        assert!((g2_three_level(p0, p1, m1, m2).unwrap() - g2).abs() < 1e-12);
    }

    #[test]
    fn closed_forms() {
        let c = g2_closed_form(1.0, 1.0, 1.0).unwrap();
        assert!((c.first_line - 2.0 / 3.0).abs() < 1e-15);
        let c = g2_closed_form(0.01, 0.01, 1e6).unwrap();
        assert!((c.crude - 2.0).abs() < 1e-6);
        assert!((c.first_line - 2.0).abs() < 1e-6);
        assert!(g2_closed_form(0.0, 1.0, 1.0).is_err());
    }
}
