//! Finite-difference Schrödinger problem on a uniform grid.
//!
//! In zpf units the Hamiltonian is `H/ħ = ω_b (-d²/dx² + U(x))` with
//! `U = (1 - e^{-ãx})²/(4ã²)` (or `x²/4` for the harmonic switch), which
//! reproduces `ω_b (k + 1/2)` in the harmonic limit. The second-difference
//! stencil with Dirichlet walls gives a symmetric tridiagonal matrix whose
//! lowest eigenvalues are found by Sturm-sequence bisection and whose
//! eigenvectors come from inverse iteration.

use crate::error::{Error, Result};
use crate::morse::{MorseParams, PositionMatrix};

/// Relative boundary amplitude accepted for every returned eigenvector.
pub const BOUNDARY_DECAY: f64 = 1e-8;

/// Uniform grid; the two end points carry the Dirichlet walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min < 0.0 && 0.0 < x_max) || n_points < 5 {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need x_min < 0 < x_max and at least 5 points, got [{x_min}, {x_max}] with {n_points}"),
            });
        }
        Ok(Self { x_min, x_max, n_points })
    }

    /// Grid with roughly the requested spacing.
    pub fn with_spacing(x_min: f64, x_max: f64, spacing: f64) -> Result<Self> {
        let n = ((x_max - x_min) / spacing).ceil() as usize + 1;
        Self::new(x_min, x_max, n)
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Same domain with every interval halved.
    pub fn refined(&self) -> Self {
        Self { n_points: 2 * self.n_points - 1, ..*self }
    }

    /// Interior nodes (the walls are excluded).
    pub fn interior(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..self.n_points - 1).map(|i| self.x_min + i as f64 * h).collect()
    }
}

/// Dimensionless potential `U(x)`.
pub fn potential(morse: &MorseParams, x: f64) -> f64 {
    if morse.is_harmonic() {
        0.25 * x * x
    } else {
        let a = morse.a_tilde();
        let v = -(-a * x).exp_m1();
        v * v / (4.0 * a * a)
    }
}

/// Lowest eigenpairs on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEigen {
    pub grid: GridSpec,
    pub x: Vec<f64>,
    /// THz
    pub eigenvalues: Vec<f64>,
    /// L²-normalized on the grid (`Σ ψ² h = 1`), sign fixed by the
    /// outermost lobe.
    pub vectors: Vec<Vec<f64>>,
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn build(morse: &MorseParams, grid: &GridSpec, x: &[f64]) -> Self {
        let h = grid.spacing();
        let w = morse.omega_b();
        let kinetic = 2.0 / (h * h);
        Self {
            diag: x.iter().map(|&xi| w * (kinetic + potential(morse, xi))).collect(),
            off: -w / (h * h),
        }
    }

    /// Number of eigenvalues strictly below `shift`.
    fn count_below(&self, shift: f64) -> usize {
        let b2 = self.off * self.off;
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut q = 1.0;
        let mut count = 0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - shift } else { d - shift - b2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// k-th smallest eigenvalue by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let spread = 2.0 * self.off.abs();
        let mut lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - spread;
        let mut hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + spread;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solve `(T - shift) y = rhs` with partial pivoting. The factor has
    /// two superdiagonals after row exchanges.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let b = self.off;
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut u1 = vec![b; n];
        let mut u2 = vec![0.0; n];
        let mut lower = vec![b; n];
        let mut y = rhs.to_vec();
        let floor = f64::EPSILON * (self.diag.iter().cloned().fold(0.0, f64::max) + b.abs());
        for i in 0..n.saturating_sub(1) {
            // rows i and i+1; row i+1 is (lower[i], d[i+1], u1[i+1])
            if lower[i].abs() > d[i].abs() {
                let (ri_d, ri_u1, ri_u2) = (d[i], u1[i], u2[i]);
                d[i] = lower[i];
                u1[i] = d[i + 1];
                u2[i] = if i + 1 < n - 1 { u1[i + 1] } else { 0.0 };
                lower[i] = ri_d;
                d[i + 1] = ri_u1;
                if i + 1 < n - 1 {
                    u1[i + 1] = ri_u2;
                }
                y.swap(i, i + 1);
            }
            if d[i].abs() < floor {
                d[i] = floor;
            }
            let factor = lower[i] / d[i];
            d[i + 1] -= factor * u1[i];
            if i + 1 < n - 1 {
                u1[i + 1] -= factor * u2[i];
            }
            y[i + 1] -= factor * y[i];
        }
        if d[n - 1].abs() < floor {
            d[n - 1] = floor;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            if i + 1 < n {
                acc -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= u2[i] * x[i + 2];
            }
            x[i] = acc / d[i];
        }
        x
    }

    fn eigenvector(&self, eigenvalue: f64) -> Vec<f64> {
        let n = self.diag.len();
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * ((i as f64) * 0.618).sin()).collect();
        for _ in 0..3 {
            v = self.shifted_solve(eigenvalue, &v);
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
        }
        v
    }
}

/// Flip `v` so that its outermost significant lobe is positive.
fn fix_sign(v: &mut [f64]) {
    let peak = v.iter().map(|a| a.abs()).fold(0.0, f64::max);
    if let Some(last) = v.iter().rev().find(|a| a.abs() > 1e-3 * peak) {
        if *last < 0.0 {
            v.iter_mut().for_each(|a| *a = -*a);
        }
    }
}

/// Lowest `n_states` eigenpairs on `grid`. Fails with
/// [`Error::GridTooSmall`] if any eigenvector has not decayed at a wall.
pub fn grid_diagonalize(morse: &MorseParams, grid: &GridSpec, n_states: usize) -> Result<GridEigen> {
    let x = grid.interior();
    let h = grid.spacing();
    let t = Tridiagonal::build(morse, grid, &x);
    let mut eigenvalues = Vec::with_capacity(n_states);
    let mut vectors = Vec::with_capacity(n_states);
    for k in 0..n_states {
        let e = t.eigenvalue(k);
        let mut v = t.eigenvector(e);
        let peak = v.iter().map(|a| a.abs()).fold(0.0, f64::max);
        let edge = v[0].abs().max(v[v.len() - 1].abs()) / peak;
        if edge > BOUNDARY_DECAY {
            return Err(Error::GridTooSmall { state: k, amplitude: edge });
        }
        let scale = 1.0 / h.sqrt();
        v.iter_mut().for_each(|a| *a *= scale);
        fix_sign(&mut v);
        eigenvalues.push(e);
        vectors.push(v);
    }
    Ok(GridEigen { grid: *grid, x, eigenvalues, vectors })
}

/// Trapezoidal `⟨φ_n|x|φ_m⟩` (the walls contribute zero).
pub fn numeric_position_elements(eig: &GridEigen) -> PositionMatrix {
    let h = eig.grid.spacing();
    PositionMatrix::from_fn(eig.vectors.len(), |n, m| {
        eig.vectors[n].iter().zip(&eig.vectors[m]).zip(&eig.x).map(|((a, b), x)| a * b * x).sum::<f64>() * h
    })
}

/// Trapezoidal overlaps `⟨φ_n|φ_m⟩`.
pub fn overlap_matrix(eig: &GridEigen) -> PositionMatrix {
    let h = eig.grid.spacing();
    PositionMatrix::from_fn(eig.vectors.len(), |n, m| {
        eig.vectors[n].iter().zip(&eig.vectors[m]).map(|(a, b)| a * b).sum::<f64>() * h
    })
}

/// Classical turning points of level `k` for the dimensionless energy.
fn turning_points(morse: &MorseParams, energy: f64) -> (f64, f64) {
    if morse.is_harmonic() {
        let r = 2.0 * energy.sqrt();
        return (-r, r);
    }
    let a = morse.a_tilde();
    let s = 2.0 * a * energy.sqrt();
    (-(1.0 + s).ln() / a, -(1.0 - s).ln() / a)
}

/// Distance beyond a turning point where the WKB tunnelling exponent
/// `∫ sqrt(U - E) dx` reaches `target`.
fn decay_margin(morse: &MorseParams, energy: f64, from: f64, direction: f64, target: f64) -> f64 {
    let step = 0.01;
    let mut action = 0.0;
    let mut d = 0.0;
    while action < target && d < 1e4 {
        d += step;
        action += (potential(morse, from + direction * d) - energy).max(0.0).sqrt() * step;
    }
    d
}

/// Domain that holds the lowest `n_states` levels with a WKB decay of
/// about `e^{-25}` at both walls.
pub fn domain_for(morse: &MorseParams, n_states: usize) -> (f64, f64) {
    let top = n_states.saturating_sub(1) as f64 + 0.5;
    let energy = top - morse.a_tilde().powi(2) * top * top;
    let (left, right) = turning_points(morse, energy);
    let target = 25.0;
    let x_min = left - decay_margin(morse, energy, left, -1.0, target) - 1.0;
    let x_max = right + decay_margin(morse, energy, right, 1.0, target) + 1.0;
    (x_min.min(-1.0), x_max.max(1.0))
}

/// Richardson-extrapolated spectrum and position elements from grids at
/// spacing `h` and `h/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    pub eigenvalues: Vec<f64>,
    pub elements: PositionMatrix,
    pub coarse: GridEigen,
    pub fine: GridEigen,
}

impl OracleSpectrum {
    pub fn n_states(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Diagonalize on two nested grids and cancel the `h²` error. The domain
/// is widened until every eigenvector passes the wall-decay check.
pub fn richardson_spectrum(morse: &MorseParams, n_states: usize, spacing: f64) -> Result<OracleSpectrum> {
    let (mut x_min, mut x_max) = domain_for(morse, n_states);
    for _ in 0..8 {
        let grid = GridSpec::with_spacing(x_min, x_max, spacing)?;
        let coarse = match grid_diagonalize(morse, &grid, n_states) {
            Ok(c) => c,
            Err(Error::GridTooSmall { .. }) => {
                x_min *= 1.5;
                x_max *= 1.5;
                continue;
            }
            Err(e) => return Err(e),
        };
        let fine = grid_diagonalize(morse, &grid.refined(), n_states)?;
        let eigenvalues = coarse
            .eigenvalues
            .iter()
            .zip(&fine.eigenvalues)
            .map(|(c, f)| (4.0 * f - c) / 3.0)
            .collect();
        let (ec, ef) = (numeric_position_elements(&coarse), numeric_position_elements(&fine));
        let elements = PositionMatrix::from_fn(n_states, |n, m| (4.0 * ef.get(n, m) - ec.get(n, m)) / 3.0);
        return Ok(OracleSpectrum { eigenvalues, elements, coarse, fine });
    }
    Err(Error::GridTooSmall { state: n_states.saturating_sub(1), amplitude: f64::NAN })
}
