//! Explicit time evolution of the population rate equations,
//!
//! ```text
//! dp_k/dt = J_{k-1} - J_k,   J_k = |x_{k+1,k}|² (Γ̄+(k) p_k - Γ̄-(k+1) p_{k+1})
//! ```
//!
//! integrated with classical RK4. Built from the flux form so it shares no
//! code with the stationary solve.

use crate::error::{Error, Result};
use crate::morse::PositionMatrix;
use crate::rates::RateLadder;
use crate::steady_state::PopulationVector;

/// `dt` must stay below this fraction of the inverse fastest rate.
pub const STABILITY_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct RateEvolution {
    pub times: Vec<f64>,
    pub populations: Vec<PopulationVector>,
}

impl RateEvolution {
    pub fn last(&self) -> &PopulationVector {
        self.populations.last().expect("evolution stores the initial state")
    }
}

struct Fluxes {
    up: Vec<f64>,
    down: Vec<f64>,
}

impl Fluxes {
    fn derivative(&self, p: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for k in 0..self.up.len() {
            let j = self.up[k] * p[k] - self.down[k] * p[k + 1];
            out[k] -= j;
            out[k + 1] += j;
        }
    }
}

/// Integrate from `p0` up to `t_max`, recording every `record_every` steps
/// (and the final state).
pub fn evolve_rate_ladder(
    ladder: &RateLadder,
    elements: &PositionMatrix,
    p0: &PopulationVector,
    t_max: f64,
    dt: f64,
    record_every: usize,
) -> Result<RateEvolution> {
    if !ladder.has_thermal() {
        return Err(Error::ThermalMissing);
    }
    let size = ladder.truncation();
    if p0.len() != size || elements.size() < size {
        return Err(Error::InvalidParameter { name: "p0", reason: "length must match the ladder".into() });
    }
    let fluxes = Fluxes {
        up: (0..size - 1).map(|k| elements.neighbor_weight(k) * ladder.bar_plus(k)).collect(),
        down: (0..size - 1).map(|k| elements.neighbor_weight(k) * ladder.bar_minus(k + 1)).collect(),
    };
    let max_rate = (0..size)
        .map(|k| {
            let out_up = if k + 1 < size { fluxes.up[k] } else { 0.0 };
            let out_down = if k > 0 { fluxes.down[k - 1] } else { 0.0 };
            out_up + out_down
        })
        .fold(0.0, f64::max);
    let limit = if max_rate > 0.0 { STABILITY_FRACTION / max_rate } else { f64::INFINITY };
    if !(dt > 0.0) || dt > limit {
        return Err(Error::StepTooLarge { dt, max_rate, limit });
    }

    let steps = (t_max / dt).ceil() as usize;
    let mut p = p0.as_slice().to_vec();
    let mut times = vec![0.0];
    let mut populations = vec![p0.clone()];
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; size], vec![0.0; size], vec![0.0; size], vec![0.0; size]);
    let mut tmp = vec![0.0; size];
    for step in 1..=steps {
        fluxes.derivative(&p, &mut k1);
        tmp.iter_mut().zip(&p).zip(&k1).for_each(|((t, p), k)| *t = p + 0.5 * dt * k);
        fluxes.derivative(&tmp, &mut k2);
        tmp.iter_mut().zip(&p).zip(&k2).for_each(|((t, p), k)| *t = p + 0.5 * dt * k);
        fluxes.derivative(&tmp, &mut k3);
        tmp.iter_mut().zip(&p).zip(&k3).for_each(|((t, p), k)| *t = p + dt * k);
        fluxes.derivative(&tmp, &mut k4);
        for i in 0..size {
            p[i] += dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        if step == steps || (record_every > 0 && step % record_every == 0) {
            times.push(step as f64 * dt);
            populations.push(PopulationVector::new(p.clone()));
        }
    }
    Ok(RateEvolution { times, populations })
}
