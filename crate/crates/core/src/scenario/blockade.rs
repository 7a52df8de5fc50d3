//! Weak-drive ladder scenarios: laser-frequency sweeps, anharmonicity ×
//! population maps and the thermal-population comparison.

use serde_json::{json, Value};

use super::{finish, par_map, Artifacts, Heatmap, LinePlot, PointStatus, RunOutcome, ScenarioConfig, Series, StatusLog, Table};
use crate::error::Result;
use crate::morse::{MorseParams, PositionMatrix};
use crate::optics::{find_peak, find_trough, OpticalSpectrum, Spectrum};
use crate::rates::{dressed_frequencies, raman_rates, total_rates, BathConfig, DriveConfig};
use crate::steady_state::{steady_state, SteadyStateResult};

/// Stationary ladder readouts for one parameter point.
pub fn blockade_point(
    morse: &MorseParams,
    spectrum: &dyn Spectrum,
    drive: &DriveConfig,
    bath: &BathConfig,
    truncation: usize,
) -> Result<SteadyStateResult> {
    let k = morse.truncation(truncation);
    let elements = PositionMatrix::from_morse(morse, k)?;
    let ladder = total_rates(raman_rates(morse, spectrum, drive, k)?, bath)?;
    steady_state(&ladder, &elements)
}

type PointResult = (Option<f64>, Option<f64>, PointStatus);

fn readouts(r: Result<SteadyStateResult>) -> PointResult {
    match r {
        Ok(s) => (Some(s.n_x), s.g2_0, PointStatus::OK),
        Err(e) => (None, None, PointStatus::failed(e)),
    }
}

/// Location and value of the smallest finite entry.
fn minimum(xs: &[f64], values: impl Iterator<Item = Option<f64>>) -> Option<(f64, f64)> {
    xs.iter()
        .zip(values)
        .filter_map(|(x, v)| v.filter(|v| v.is_finite()).map(|v| (*x, v)))
        .fold(None, |best: Option<(f64, f64)>, p| match best {
            Some(b) if b.1 <= p.1 => Some(b),
            _ => Some(p),
        })
}

fn extremum_json(m: Option<(f64, f64)>, key: &str) -> Value {
    m.map_or(Value::Null, |(x, v)| json!({ key: x, "value": v }))
}

fn sweep(config: &ScenarioConfig, bath: &BathConfig, omegas: &[f64]) -> Vec<PointResult> {
    let morse = config.morse();
    par_map(omegas, |&omega_l| {
        let drive = DriveConfig { omega_l, ..config.drive };
        readouts(blockade_point(&morse, &config.spectrum, &drive, bath, config.truncation))
    })
}

/// Spectral features and dressed transitions relevant to the blockade.
fn spectral_features(config: &ScenarioConfig) -> Value {
    let morse = config.morse();
    let k = morse.truncation(config.truncation);
    let dressed = dressed_frequencies(&morse, &config.drive, k.min(3)).unwrap_or_default();
    let first = dressed.get(1).zip(dressed.first()).map(|(a, b)| a - b);
    let second = dressed.get(2).zip(dressed.get(1)).map(|(a, b)| a - b);
    let (trough, peak) = match config.spectrum {
        OpticalSpectrum::Hybrid(h) => {
            let (lo, hi) = (h.omega_2 - 15.0, h.omega_2 + 15.0);
            (Some(find_trough(&config.spectrum, lo, hi, 1e-3)), Some(find_peak(&config.spectrum, lo, hi, 1e-3)))
        }
        OpticalSpectrum::Single(_) => (None, None),
    };
    json!({
        "lambda": morse.lambda(),
        "bound_states": morse.bound_state_count().ok(),
        "truncation": k,
        "first_stokes_transition_THz": first,
        "second_stokes_transition_THz": second,
        "dressed_spacing_difference_THz": first.zip(second).map(|(a, b)| a - b),
        "spectrum_trough": trough.map(|t| json!({ "omega_THz": t.omega, "value": t.value })),
        "spectrum_peak": peak.map(|p| json!({ "omega_THz": p.omega, "value": p.value })),
        "laser_for_first_stokes_in_trough_THz": trough.zip(first).map(|(t, f)| t.omega + f),
        "laser_for_second_stokes_in_trough_THz": trough.zip(second).map(|(t, s)| t.omega + s),
    })
}

pub(crate) fn laser_sweep(config: &ScenarioConfig) -> RunOutcome {
    let omegas = config.sweeps.omega_l.values();
    let results = sweep(config, &config.bath, &omegas);
    let mut log = StatusLog::default();
    let mut table = Table::new(&["omega_l_THz", "n_x", "g2_0", "status"]);
    for (w, (n, g, status)) in omegas.iter().zip(&results) {
        let status = log.record(status);
        table.push(vec![(*w).into(), (*n).into(), (*g).into(), status]);
    }
    let n_min = minimum(&omegas, results.iter().map(|r| r.0));
    let g_min = minimum(&omegas, results.iter().map(|r| r.1));
    let plot = LinePlot {
        title: format!("Laser sweep, δω_b = {} THz, |α|² = {}", config.delta_omega_b, config.drive.cavity_population()),
        x_label: "laser frequency ω_l (THz)".into(),
        y_label: "n_x, g2(0)".into(),
        series: vec![
            Series { name: "n_x".into(), points: curve(&omegas, results.iter().map(|r| r.0)) },
            Series { name: "g2(0)".into(), points: curve(&omegas, results.iter().map(|r| r.1)) },
        ],
    };
    let mut derived = spectral_features(config);
    derived["n_x_minimum"] = extremum_json(n_min, "omega_l_THz");
    derived["g2_minimum"] = extremum_json(g_min, "omega_l_THz");
    derived["minimum_separation_THz"] = json!(n_min.zip(g_min).map(|(n, g)| n.0 - g.0));

    let mut report = format!("laser sweep over {} frequencies\n", omegas.len());
    if let Some((w, v)) = n_min {
        report += &format!("  n_x minimum   {} at ω_l = {} THz\n", super::format_g(v), super::format_g(w));
    }
    if let Some((w, v)) = g_min {
        report += &format!("  g2(0) minimum {} at ω_l = {} THz\n", super::format_g(v), super::format_g(w));
    }
    let mut artifacts = Artifacts::default();
    artifacts.add("laser_sweep.csv", table.to_csv());
    artifacts.add("laser_sweep.svg", plot.render());
    finish(config, artifacts, log, derived, report)
}

fn curve(xs: &[f64], ys: impl Iterator<Item = Option<f64>>) -> Vec<(f64, f64)> {
    xs.iter().zip(ys).map(|(x, y)| (*x, y.unwrap_or(f64::NAN))).collect()
}

/// `(n_th, n_x minimum, g2 minimum)`, each minimum as `(ω_l, value)`.
type Minima = (f64, Option<(f64, f64)>, Option<(f64, f64)>);

pub(crate) fn thermal(config: &ScenarioConfig) -> RunOutcome {
    let omegas = config.sweeps.omega_l.values();
    let mut log = StatusLog::default();
    let mut table = Table::new(&["n_th", "omega_l_THz", "n_x", "g2_0", "status"]);
    let (mut n_series, mut g_series, mut minima) = (Vec::new(), Vec::new(), Vec::new());
    for &n_th in &config.sweeps.n_th {
        let bath = BathConfig { n_th, ..config.bath };
        let results = sweep(config, &bath, &omegas);
        for (w, (n, g, status)) in omegas.iter().zip(&results) {
            let status = log.record(status);
            table.push(vec![n_th.into(), (*w).into(), (*n).into(), (*g).into(), status]);
        }
        let n_min = minimum(&omegas, results.iter().map(|r| r.0));
        let g_min = minimum(&omegas, results.iter().map(|r| r.1));
        minima.push((n_th, n_min, g_min));
        n_series.push(Series { name: format!("n_th = {n_th}"), points: curve(&omegas, results.iter().map(|r| r.0)) });
        g_series.push(Series { name: format!("n_th = {n_th}"), points: curve(&omegas, results.iter().map(|r| r.1)) });
    }
    let deepens = |pick: fn(&Minima) -> Option<(f64, f64)>| {
        let mut sorted: Vec<_> = minima.iter().collect();
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
        sorted.windows(2).all(|w| matches!((pick(w[0]), pick(w[1])), (Some(a), Some(b)) if b.1 < a.1))
    };
    let derived = json!({
        "minima": minima.iter().map(|(n_th, n, g)| json!({
            "n_th": n_th,
            "n_x_minimum": extremum_json(*n, "omega_l_THz"),
            "g2_minimum": extremum_json(*g, "omega_l_THz"),
        })).collect::<Vec<_>>(),
        "n_x_minimum_deepens_as_n_th_drops": deepens(|m| m.1),
        "g2_minimum_deepens_as_n_th_drops": deepens(|m| m.2),
    });
    let mut report = String::from("thermal sweep minima\n");
    for (n_th, n, g) in &minima {
        let fmt = |m: &Option<(f64, f64)>| m.map_or("-".to_string(), |m| super::format_g(m.1));
        report += &format!("  n_th = {n_th:<6} min n_x {:<12} min g2(0) {}\n", fmt(n), fmt(g));
    }
    let plot = |series, y: &str, title: &str| LinePlot {
        title: title.into(),
        x_label: "laser frequency ω_l (THz)".into(),
        y_label: y.into(),
        series,
    };
    let mut artifacts = Artifacts::default();
    artifacts.add("thermal.csv", table.to_csv());
    artifacts.add("thermal_n_x.svg", plot(n_series, "n_x", "Mechanical population vs bath population").render());
    artifacts.add("thermal_g2.svg", plot(g_series, "g2(0)", "Intensity correlation vs bath population").render());
    finish(config, artifacts, log, derived, report)
}

pub(crate) fn map(config: &ScenarioConfig) -> RunOutcome {
    let deltas = config.sweeps.delta_omega_b.values();
    let pops = config.sweeps.population.values();
    let points: Vec<(f64, f64)> = pops.iter().flat_map(|&p| deltas.iter().map(move |&d| (d, p))).collect();
    let results = par_map(&points, |&(d, p)| {
        let morse = match MorseParams::new(config.omega_b, d) {
            Ok(m) => m,
            Err(e) => return readouts(Err(e)),
        };
        let drive = DriveConfig::from_population(config.drive.omega_l, p, config.drive.g0);
        readouts(blockade_point(&morse, &config.spectrum, &drive, &config.bath, config.truncation))
    });
    let mut log = StatusLog::default();
    let mut table = Table::new(&["delta_omega_b_THz", "cavity_population", "n_x", "g2_0", "status"]);
    for ((d, p), (n, g, status)) in points.iter().zip(&results) {
        let status = log.record(status);
        table.push(vec![(*d).into(), (*p).into(), (*n).into(), (*g).into(), status]);
    }
    let best = points
        .iter()
        .zip(&results)
        .filter_map(|(pt, r)| r.1.map(|g| (*pt, g)))
        .fold(None, |b: Option<((f64, f64), f64)>, c| match b {
            Some(b) if b.1 <= c.1 => Some(b),
            _ => Some(c),
        });
    let sub_poissonian = results.iter().filter(|r| r.1.is_some_and(|g| g < 1.0)).count();
    let ridge: Vec<Value> = pops
        .iter()
        .enumerate()
        .map(|(iy, p)| {
            let row = &results[iy * deltas.len()..(iy + 1) * deltas.len()];
            let m = minimum(&deltas, row.iter().map(|r| r.1));
            json!({ "cavity_population": p, "g2_argmin_delta_omega_b_THz": m.map(|m| m.0), "g2_min": m.map(|m| m.1) })
        })
        .collect();
    let derived = json!({
        "omega_l_THz": config.drive.omega_l,
        "g2_minimum": best.map(|((d, p), g)| json!({ "delta_omega_b_THz": d, "cavity_population": p, "value": g })),
        "sub_poissonian_points": sub_poissonian,
        "g2_ridge": ridge,
    });
    let report = format!(
        "map at ω_l = {} THz: {} of {} points sub-Poissonian{}\n",
        config.drive.omega_l,
        sub_poissonian,
        points.len(),
        best.map_or(String::new(), |((d, p), g)| format!(", min g2(0) {} at δω_b = {}, |α|² = {}", super::format_g(g), super::format_g(d), super::format_g(p)))
    );
    let heat = |pick: fn(&PointResult) -> Option<f64>, title: &str| Heatmap {
        title: title.into(),
        x_label: "anharmonicity δω_b (THz)".into(),
        y_label: "cavity population |α|²".into(),
        xs: deltas.clone(),
        ys: pops.clone(),
        values: results.iter().map(pick).collect(),
    };
    let mut artifacts = Artifacts::default();
    artifacts.add("map.csv", table.to_csv());
    artifacts.add("map_g2.svg", heat(|r| r.1, &format!("g2(0) at ω_l = {} THz", config.drive.omega_l)).render());
    artifacts.add("map_n_x.svg", heat(|r| r.0, &format!("n_x at ω_l = {} THz", config.drive.omega_l)).render());
    finish(config, artifacts, log, derived, report)
}
