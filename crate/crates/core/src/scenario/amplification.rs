//! Strong-drive amplification: full ladder against the mean-field and
//! harmonic estimates as the cavity population grows.

use serde_json::json;

use super::{finish, par_map, Artifacts, LinePlot, PointStatus, RunOutcome, ScenarioConfig, Series, StatusLog, Table};
use crate::error::Result;
use crate::lasing::{harmonic_population, meanfield_steady, MeanFieldParams};
use crate::morse::{MorseParams, PositionMatrix};
use crate::optics::Spectrum;
use crate::rates::{raman_rates, total_rates, BathConfig, DriveConfig};
use crate::steady_state::{mechanical_population, solve_populations};

/// Mean-field estimates are compared with the ladder only below this
/// population, where the thermal-state closure is meaningful.
pub const COMPARISON_CEILING: f64 = 30.0;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplificationPoint {
    pub n_x: Option<f64>,
    pub mean_level: Option<f64>,
    pub meanfield: Option<f64>,
    pub linearly_unstable: Option<bool>,
    pub harmonic: Option<f64>,
    pub status: PointStatus,
}

/// Ladder, mean-field and harmonic populations at one drive.
pub fn amplification_point(
    morse: &MorseParams,
    spectrum: &dyn Spectrum,
    drive: &DriveConfig,
    bath: &BathConfig,
    truncation: usize,
) -> AmplificationPoint {
    let ladder = || -> Result<(f64, f64)> {
        let k = morse.truncation(truncation);
        let elements = PositionMatrix::from_morse(morse, k)?;
        let rates = total_rates(raman_rates(morse, spectrum, drive, k)?, bath)?;
        let p = solve_populations(&rates, &elements)?;
        Ok((mechanical_population(&p, &elements), p.mean_level()))
    };
    let mf = meanfield_steady(&MeanFieldParams::build(morse, spectrum, drive, bath)).ok();
    let harmonic = MorseParams::harmonic(morse.omega_b())
        .ok()
        .and_then(|h| harmonic_population(&MeanFieldParams::build(&h, spectrum, drive, bath)).ok());
    let (n_x, mean_level, status) = match ladder() {
        Ok((n, k)) => (Some(n), Some(k), PointStatus::OK),
        Err(e) => (None, None, PointStatus::failed(e)),
    };
    AmplificationPoint {
        n_x,
        mean_level,
        meanfield: mf.map(|m| m.n_x),
        linearly_unstable: mf.map(|m| m.linearly_unstable),
        harmonic,
        status,
    }
}

/// Cavity population at which the harmonic Stokes gain equals the total
/// damping, `g0² |α|² (S(ω_l - ω_b) - S(ω_l + ω_b)) = γ`.
pub fn harmonic_threshold(spectrum: &dyn Spectrum, omega_l: f64, omega_b: f64, g0: f64, gamma: f64) -> Option<f64> {
    let contrast = spectrum.density(omega_l - omega_b) - spectrum.density(omega_l + omega_b);
    (contrast > 0.0 && g0 > 0.0).then(|| gamma / (g0 * g0 * contrast))
}

pub(crate) fn run(config: &ScenarioConfig) -> RunOutcome {
    let pops = config.sweeps.population.values();
    let deltas = &config.sweeps.anharmonicities;
    let points: Vec<(f64, f64)> = deltas.iter().flat_map(|&d| pops.iter().map(move |&p| (d, p))).collect();
    let results = par_map(&points, |&(d, p)| {
        let drive = DriveConfig::from_population(config.drive.omega_l, p, config.drive.g0);
        match MorseParams::new(config.omega_b, d) {
            Ok(m) => amplification_point(&m, &config.spectrum, &drive, &config.bath, config.truncation),
            Err(e) => AmplificationPoint {
                n_x: None,
                mean_level: None,
                meanfield: None,
                linearly_unstable: None,
                harmonic: None,
                status: PointStatus::failed(e),
            },
        }
    });

    let mut log = StatusLog::default();
    let mut table = Table::new(&[
        "delta_omega_b_THz",
        "cavity_population",
        "n_x",
        "mean_level",
        "n_x_meanfield",
        "meanfield_linearly_unstable",
        "n_x_harmonic",
        "status",
    ]);
    for ((d, p), r) in points.iter().zip(&results) {
        let status = log.record(&r.status);
        table.push(vec![
            (*d).into(),
            (*p).into(),
            r.n_x.into(),
            r.mean_level.into(),
            r.meanfield.into(),
            r.linearly_unstable.map_or(super::Cell::Empty, Into::into),
            r.harmonic.into(),
            status,
        ]);
    }

    let threshold = harmonic_threshold(&config.spectrum, config.drive.omega_l, config.omega_b, config.drive.g0, config.bath.gamma);
    let per_delta: Vec<_> = deltas
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let rows = &results[i * pops.len()..(i + 1) * pops.len()];
            let max_n = rows.iter().filter_map(|r| r.n_x).fold(f64::NAN, f64::max);
            let worst = pops
                .iter()
                .zip(rows)
                .filter_map(|(p, r)| match (r.n_x, r.meanfield) {
                    (Some(n), Some(m)) if n < COMPARISON_CEILING => Some((*p, (m - n).abs() / n)),
                    _ => None,
                })
                .fold(None, |b: Option<(f64, f64)>, c| match b {
                    Some(b) if b.1 >= c.1 => Some(b),
                    _ => Some(c),
                });
            json!({
                "delta_omega_b_THz": d,
                "max_n_x": max_n,
                "max_meanfield_relative_deviation_below_ceiling": worst.map(|w| json!({ "cavity_population": w.0, "value": w.1 })),
            })
        })
        .collect();
    let derived = json!({
        "harmonic_threshold_population": threshold,
        "comparison_ceiling": COMPARISON_CEILING,
        "per_anharmonicity": per_delta,
    });

    let mut series = Vec::new();
    let cap = results.iter().filter_map(|r| r.n_x).fold(0.0, f64::max) * 1.5;
    for (i, d) in deltas.iter().enumerate() {
        let rows = &results[i * pops.len()..(i + 1) * pops.len()];
        let pts = |pick: fn(&AmplificationPoint) -> Option<f64>| -> Vec<(f64, f64)> {
            pops.iter().zip(rows).map(|(p, r)| (*p, pick(r).filter(|v| *v <= cap).unwrap_or(f64::NAN))).collect()
        };
        series.push(Series { name: format!("ladder δω_b={d}"), points: pts(|r| r.n_x) });
        series.push(Series { name: format!("mean field δω_b={d}"), points: pts(|r| r.meanfield) });
        if i == 0 {
            series.push(Series { name: "harmonic".into(), points: pts(|r| r.harmonic) });
        }
    }
    let plot = LinePlot {
        title: format!("Amplification at ω_l = {} THz", config.drive.omega_l),
        x_label: "cavity population |α|²".into(),
        y_label: "n_x".into(),
        series,
    };
    let mut report = format!(
        "amplification: harmonic threshold at |α|² = {}\n",
        threshold.map_or("none".into(), super::format_g)
    );
    for (i, d) in deltas.iter().enumerate() {
        let last = &results[(i + 1) * pops.len() - 1];
        report += &format!(
            "  δω_b = {d:<5} n_x at |α|² = {}: {}\n",
            super::format_g(pops[pops.len() - 1]),
            last.n_x.map_or("-".into(), super::format_g)
        );
    }
    let mut artifacts = Artifacts::default();
    artifacts.add("amplification.csv", table.to_csv());
    artifacts.add("amplification.svg", plot.render());
    finish(config, artifacts, log, derived, report)
}
