//! Classical lasing map: oscillation amplitude over anharmonicity and
//! cavity population, plus the onset population for each anharmonicity.

use serde_json::json;

use super::{finish, par_map, Artifacts, Cell, LinePlot, PointStatus, RunOutcome, ScenarioConfig, Series, StatusLog, Table};
use crate::error::Result;
use crate::lasing::{integrate_trajectory, lasing_onset, OptomechSystem, RestoringForce, TrajectoryResult};

/// Trajectory system for anharmonicity `delta` at bare cavity population
/// `population`, using the configured cavity, drive and bath.
pub fn system_for(config: &ScenarioConfig, delta: f64, population: f64) -> OptomechSystem {
    let (omega_a, kappa) = config.cavity();
    OptomechSystem::from_population(
        omega_a,
        config.drive.omega_l,
        kappa,
        population,
        config.drive.g0,
        config.bath.gamma,
        config.omega_b,
        RestoringForce::for_anharmonicity(config.omega_b, delta),
    )
}

enum Job {
    Point(f64, f64),
    Onset(f64),
}

enum Outcome {
    Point(Result<TrajectoryResult>),
    Onset(Result<f64>),
}

pub(crate) fn run(config: &ScenarioConfig) -> RunOutcome {
    let pops = config.sweeps.population.values();
    let deltas = &config.sweeps.anharmonicities;
    let t = &config.trajectory;
    let jobs: Vec<Job> = deltas
        .iter()
        .map(|&d| Job::Onset(d))
        .chain(deltas.iter().flat_map(|&d| pops.iter().map(move |&p| Job::Point(d, p))))
        .collect();
    let outcomes = par_map(&jobs, |job| match *job {
        Job::Point(d, p) => Outcome::Point(integrate_trajectory(&system_for(config, d, p), &t.options)),
        Job::Onset(d) => Outcome::Onset(lasing_onset(|p| system_for(config, d, p), t.onset_lo, t.onset_hi, t.onset_tolerance, &t.options)),
    });

    let mut log = StatusLog::default();
    let mut onsets_table = Table::new(&["delta_omega_b_THz", "onset_population", "status"]);
    let mut onsets = Vec::new();
    let mut table = Table::new(&[
        "delta_omega_b_THz",
        "cavity_population",
        "realized_population",
        "sigma_x",
        "x_mean",
        "n_coh",
        "lasing",
        "converged",
        "status",
    ]);
    let mut sigma: Vec<Vec<(f64, f64)>> = vec![Vec::new(); deltas.len()];
    let mut n_coh: Vec<Vec<(f64, f64)>> = vec![Vec::new(); deltas.len()];
    for (job, outcome) in jobs.iter().zip(&outcomes) {
        match (job, outcome) {
            (Job::Onset(d), Outcome::Onset(r)) => {
                let status = log.record(&r.as_ref().map_or_else(PointStatus::failed, |_| PointStatus::OK));
                onsets_table.push(vec![(*d).into(), r.as_ref().ok().copied().into(), status]);
                onsets.push(json!({ "delta_omega_b_THz": d, "onset_population": r.as_ref().ok() }));
            }
            (Job::Point(d, p), Outcome::Point(r)) => {
                let i = deltas.iter().position(|x| x == d).expect("listed");
                match r {
                    Ok(run) => {
                        let status = log.record(&PointStatus::OK);
                        table.push(vec![
                            (*d).into(),
                            (*p).into(),
                            run.realized_population.into(),
                            run.stats.sigma_x.into(),
                            run.stats.x_mean.into(),
                            run.stats.n_coh.into(),
                            run.is_lasing().into(),
                            run.converged.into(),
                            status,
                        ]);
                        sigma[i].push((*p, run.stats.sigma_x));
                        n_coh[i].push((*p, run.stats.n_coh));
                    }
                    Err(e) => {
                        let status = log.record(&PointStatus::failed(e));
                        let mut row = vec![(*d).into(), (*p).into()];
                        row.extend(std::iter::repeat_n(Cell::Empty, 6));
                        row.push(status);
                        table.push(row);
                        sigma[i].push((*p, f64::NAN));
                        n_coh[i].push((*p, f64::NAN));
                    }
                }
            }
            _ => unreachable!("outcomes follow jobs"),
        }
    }

    let label = |d: f64| if d == 0.0 { "harmonic".to_string() } else { format!("δω_b = {}", super::format_g(d)) };
    let plot = |data: &[Vec<(f64, f64)>], y: &str, title: &str| LinePlot {
        title: title.into(),
        x_label: "cavity population |α|²".into(),
        y_label: y.into(),
        series: deltas.iter().zip(data).map(|(d, pts)| Series { name: label(*d), points: pts.clone() }).collect(),
    };
    let max_n_coh: Vec<_> = deltas
        .iter()
        .zip(&n_coh)
        .map(|(d, pts)| json!({ "delta_omega_b_THz": d, "max_n_coh": pts.iter().map(|p| p.1).fold(f64::NAN, f64::max) }))
        .collect();
    let derived = json!({ "onsets": onsets, "max_n_coh": max_n_coh });
    let mut report = String::from("lasing onsets (bare cavity population)\n");
    for (job, outcome) in jobs.iter().zip(&outcomes) {
        if let (Job::Onset(d), Outcome::Onset(r)) = (job, outcome) {
            let v = r.as_ref().map_or_else(|e| format!("error: {e}"), |v| super::format_g(*v));
            report += &format!("  {:<12} {v}\n", label(*d));
        }
    }
    let mut artifacts = Artifacts::default();
    artifacts.add("lasing_map.csv", table.to_csv());
    artifacts.add("onsets.csv", onsets_table.to_csv());
    artifacts.add("lasing_sigma.svg", plot(&sigma, "σ_x / x_zpf", "Oscillation amplitude").render());
    artifacts.add("lasing_n_coh.svg", plot(&n_coh, "n_x,coh", "Coherent-equivalent population").render());
    finish(config, artifacts, log, derived, report)
}
