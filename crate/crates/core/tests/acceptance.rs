//! Acceptance gate. Runs with `harness = false` so every criterion prints
//! one PASS/FAIL line; the process exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use anharm_om::lasing::{
    harmonic_population, integrate_trajectory, MeanFieldParams, OptomechSystem, RestoringForce, TrajectoryOptions, TrajectoryResult,
};
use anharm_om::morse::{MorseParams, PositionMatrix};
use anharm_om::optics::SingleMode;
use anharm_om::oracle::richardson_spectrum;
use anharm_om::rates::{BathConfig, DriveConfig, RateLadder};
use anharm_om::scenario::amplification::harmonic_threshold;
use anharm_om::scenario::lasing::system_for;
use anharm_om::scenario::{run_scenario, RunOutcome, Scenario, ScenarioConfig};
use anharm_om::steady_state::{g2_closed_form, g2_three_level, steady_state, three_level_analytic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const OMEGA_B: f64 = 20.0;
const ANHARMONICITIES: [f64; 3] = [0.1, 0.2, 2.0];
/// Minimum g2(0) of the default laser sweep, recorded on the first verified run.
const G2_BASELINE: f64 = 0.86574193;
const G2_BASELINE_TOLERANCE: f64 = 1e-6;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Self::new(false, format!("error: {e}"))
    }
}

/// Joins sub-checks; the verdict passes only if all of them do.
#[derive(Default)]
struct Parts(Vec<(bool, String)>);

impl Parts {
    fn check(&mut self, pass: bool, what: impl Into<String>) -> &mut Self {
        self.0.push((pass, what.into()));
        self
    }

    fn verdict(&self) -> Verdict {
        let pass = self.0.iter().all(|p| p.0);
        let detail = self
            .0
            .iter()
            .map(|(ok, s)| if *ok { s.clone() } else { format!("[FAILED] {s}") })
            .collect::<Vec<_>>()
            .join("; ");
        Verdict::new(pass, detail)
    }
}

fn run(config: &ScenarioConfig, workers: usize) -> RunOutcome {
    run_scenario(config, workers).expect("thread pool")
}

fn defaults(s: Scenario) -> ScenarioConfig {
    ScenarioConfig::resolve(s, None, &[]).expect("defaults resolve")
}

fn summary(out: &RunOutcome) -> Value {
    serde_json::from_slice(out.artifacts.get("summary.json").expect("summary")).expect("json")
}

fn rows(out: &RunOutcome, name: &str) -> Vec<HashMap<String, String>> {
    let mut reader = csv::Reader::from_reader(out.artifacts.get(name).expect("artifact"));
    let header: Vec<String> = reader.headers().expect("header").iter().map(String::from).collect();
    reader
        .records()
        .map(|r| header.iter().cloned().zip(r.expect("record").iter().map(String::from)).collect())
        .collect()
}

fn num(row: &HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap_or(f64::NAN)
}

fn c1_spectrum() -> Verdict {
    let start = Instant::now();
    let mut parts = Parts::default();
    for d in ANHARMONICITIES {
        let r = (|| {
            let morse = MorseParams::new(OMEGA_B, d)?;
            let kmax = (morse.lambda() / 2.0).floor() as usize;
            let oracle = richardson_spectrum(&morse, kmax + 1, 0.01)?;
            let mut worst = 0.0_f64;
            for (k, e) in oracle.eigenvalues.iter().enumerate() {
                let exact = morse.eigenfrequency(k)?;
                worst = worst.max(((e - exact) / exact).abs());
            }
            anharm_om::Result::Ok((kmax, worst))
        })();
        match r {
            Ok((kmax, worst)) => parts.check(worst < 1e-6, format!("δω_b={d}: k≤{kmax} max rel err {worst:.2e} < 1e-6")),
            Err(e) => parts.check(false, format!("δω_b={d}: {e}")),
        };
    }
    let t = start.elapsed();
    parts.check(t < Duration::from_secs(10), format!("{:.2} s < 10 s", t.as_secs_f64())).verdict()
}

fn c2_elements() -> Verdict {
    let start = Instant::now();
    let mut parts = Parts::default();
    for d in ANHARMONICITIES {
        let r = (|| {
            let morse = MorseParams::new(OMEGA_B, d)?;
            let n = morse.bound_state_count()?.min(9);
            let oracle = richardson_spectrum(&morse, n, 0.01)?;
            let mut worst = 0.0_f64;
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((morse.position_element(i, j)?.abs() - oracle.elements.get(i, j).abs()).abs());
                }
            }
            anharm_om::Result::Ok((n - 1, worst))
        })();
        match r {
            Ok((top, worst)) => parts.check(worst < 1e-6, format!("δω_b={d}: n,m≤{top} max abs diff {worst:.2e} < 1e-6")),
            Err(e) => parts.check(false, format!("δω_b={d}: {e}")),
        };
    }
    match MorseParams::new(OMEGA_B, 1e-8 * OMEGA_B) {
        Ok(m) => {
            let worst = (0..9)
                .map(|k| m.position_element(k, k + 1).map_or(f64::INFINITY, |x| (x - ((k + 1) as f64).sqrt()).abs()))
                .fold(0.0, f64::max);
            parts.check(worst < 1e-3, format!("harmonic limit max |x_k,k+1 - sqrt(k+1)| {worst:.2e} < 1e-3"));
        }
        Err(e) => {
            parts.check(false, format!("harmonic limit: {e}"));
        }
    }
    let t = start.elapsed();
    parts.check(t < Duration::from_secs(10), format!("{:.2} s < 10 s", t.as_secs_f64())).verdict()
}

fn c3_bound_states() -> Verdict {
    match MorseParams::new(OMEGA_B, 0.2).and_then(|m| m.bound_state_count()) {
        Ok(n) => Verdict::new(n == 50, format!("ω_b=20, δω_b=0.2: {n} bound states (expected 50)")),
        Err(e) => Verdict::error(e),
    }
}

fn c4_thermal() -> Verdict {
    let r = (|| {
        let ladder = RateLadder::from_rates(vec![], vec![0.0; 24], vec![0.0; 24])?.with_thermal(BathConfig::new(0.05, 0.05))?;
        steady_state(&ladder, &PositionMatrix::harmonic(24))
    })();
    match r {
        Ok(s) => {
            let g2 = s.g2_0.unwrap_or(f64::NAN);
            let mut parts = Parts::default();
            parts
                .check((s.n_x - 0.05).abs() < 1e-4, format!("n_x {:.10} = 0.05 ± 1e-4", s.n_x))
                .check((g2 - 2.0).abs() < 0.02, format!("g2(0) {g2:.10} = 2 ± 0.02"));
            parts.verdict()
        }
        Err(e) => Verdict::error(e),
    }
}

fn c5_three_level() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e7e1);
    let x = PositionMatrix::harmonic(3);
    let (mut p_err, mut g_err, mut g_eq_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut draw = || 10f64.powf(rng.gen_range(-2.0..2.0));
    for _ in 0..100 {
        let (p0, p1, m1, m2, m) = (draw(), draw(), draw(), draw(), draw());
        let r = (|| {
            let solve = |plus: Vec<f64>, minus: Vec<f64>| {
                RateLadder::from_rates(vec![], plus, minus)?.with_thermal(BathConfig::new(0.0, 0.0)).and_then(|l| steady_state(&l, &x))
            };
            let s = solve(vec![p0, p1, 0.0], vec![0.0, m1, m2])?;
            let t = three_level_analytic(p0, p1, m1, m2)?;
            let pe = (0..3).map(|k| (s.populations.as_slice()[k] - t.p[k]).abs()).fold(0.0, f64::max);
            let ge = (s.g2_0.unwrap_or(f64::NAN) - g2_three_level(p0, p1, m1, m2)?).abs();
            let eq = solve(vec![p0, p1, 0.0], vec![0.0, m, m])?;
            let ee = (eq.g2_0.unwrap_or(f64::NAN) - g2_closed_form(p0, p1, m)?.first_line).abs();
            anharm_om::Result::Ok((pe, ge, ee))
        })();
        match r {
            Ok((pe, ge, ee)) => {
                p_err = p_err.max(pe);
                g_err = g_err.max(ge);
                g_eq_err = g_eq_err.max(ee);
            }
            Err(e) => return Verdict::error(e),
        }
    }
    let mut parts = Parts::default();
    parts
        .check(p_err < 1e-12, format!("populations max err {p_err:.1e}"))
        .check(g_err < 1e-12, format!("g2 (general rates) max err {g_err:.1e}"))
        .check(g_eq_err < 1e-12, format!("g2 first line (equal Γ̄-) max err {g_eq_err:.1e}"));
    let mut v = parts.verdict();
    v.detail += " (100 seeded tuples, tol 1e-12)";
    v
}

fn c6_blockade() -> Verdict {
    let start = Instant::now();
    let config = defaults(Scenario::BlockadeLaserSweep);
    let out = run(&config, 1);
    let t = start.elapsed();
    let s = &summary(&out)["derived"];
    let f = |v: &Value| v.as_f64().unwrap_or(f64::NAN);
    let (n_at, g_at, g_min) = (f(&s["n_x_minimum"]["omega_l_THz"]), f(&s["g2_minimum"]["omega_l_THz"]), f(&s["g2_minimum"]["value"]));
    let separation = n_at - g_at;
    let width = (f(&s["spectrum_peak"]["omega_THz"]) - f(&s["spectrum_trough"]["omega_THz"])).abs();
    let dressed = f(&s["dressed_spacing_difference_THz"]);
    let range = config.sweeps.omega_l;
    let two_delta = 2.0 * config.delta_omega_b;
    let mut parts = Parts::default();
    parts
        .check(out.failed_points == 0, format!("{} points, {} failed", out.total_points, out.failed_points))
        .check(n_at > range.min && n_at < range.max, format!("(a) interior n_x minimum at ω_l = {n_at:.1}"))
        .check(g_min < 1.0 && g_at < n_at, format!("(b) g2(0) minimum {g_min:.8} < 1 at ω_l = {g_at:.1}"))
        .check(
            (separation - two_delta).abs() <= width,
            format!("separation {separation:.2} vs 2δω_b = {two_delta} within Fano width {width:.2}"),
        )
        .check(
            (separation - dressed).abs() <= width,
            format!("separation vs dressed spacing difference {dressed:.3} within Fano width"),
        )
        .check(
            (g_min - G2_BASELINE).abs() < G2_BASELINE_TOLERANCE,
            format!("g2 minimum matches baseline {G2_BASELINE}"),
        )
        .check(t < Duration::from_secs(60), format!("{:.2} s < 60 s", t.as_secs_f64()));
    parts.verdict()
}

fn c7_thermal_monotone() -> Verdict {
    let out = run(&defaults(Scenario::ThermalSweep), 1);
    let s = &summary(&out)["derived"];
    let mut minima: Vec<(f64, f64, f64)> = s["minima"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|m| {
                    let f = |v: &Value| v.as_f64().unwrap_or(f64::NAN);
                    (f(&m["n_th"]), f(&m["n_x_minimum"]["value"]), f(&m["g2_minimum"]["value"]))
                })
                .collect()
        })
        .unwrap_or_default();
    minima.sort_by(|a, b| b.0.total_cmp(&a.0));
    let deepens = |pick: fn(&(f64, f64, f64)) -> f64| minima.windows(2).all(|w| pick(&w[1]) < pick(&w[0]));
    let list = |pick: fn(&(f64, f64, f64)) -> f64| minima.iter().map(|m| format!("{:.4}", pick(m))).collect::<Vec<_>>().join(" > ");
    let mut parts = Parts::default();
    parts
        .check(minima.len() == 3 && out.failed_points == 0, format!("n_th {:?}", minima.iter().map(|m| m.0).collect::<Vec<_>>()))
        .check(deepens(|m| m.1), format!("min n_x {}", list(|m| m.1)))
        .check(deepens(|m| m.2), format!("min g2(0) {}", list(|m| m.2)));
    parts.verdict()
}

fn c8_meanfield(amp: &RunOutcome, config: &ScenarioConfig) -> Verdict {
    let mut parts = Parts::default();
    parts.check(amp.failed_points == 0, format!("{} points, {} failed", amp.total_points, amp.failed_points));
    let table = rows(amp, "amplification.csv");
    for d in &config.sweeps.anharmonicities {
        let (mut worst, mut at, mut compared) = (0.0_f64, f64::NAN, 0);
        for r in table.iter().filter(|r| num(r, "delta_omega_b_THz") == *d) {
            let (n, mf) = (num(r, "n_x"), num(r, "n_x_meanfield"));
            if n < 30.0 {
                compared += 1;
                let dev = if mf.is_finite() { (mf - n).abs() / n } else { f64::INFINITY };
                if dev > worst {
                    worst = dev;
                    at = num(r, "cavity_population");
                }
            }
        }
        parts.check(
            compared > 0 && worst < 0.2,
            format!("δω_b={d}: {compared} points with n_x < 30, worst |MF-n_x|/n_x {:.1}% at |α|²={at} (< 20%)", 100.0 * worst),
        );
    }

    let spec = SingleMode::PLASMON;
    let bath = config.bath;
    let omega_l = config.drive.omega_l;
    let g0 = config.drive.g0;
    match harmonic_threshold(&spec, omega_l, OMEGA_B, g0, bath.gamma) {
        Some(th) => {
            let harmonic = MorseParams::harmonic(OMEGA_B).expect("harmonic");
            let at = |gap: f64| {
                let drive = DriveConfig::from_population(omega_l, th * (1.0 - gap), g0);
                harmonic_population(&MeanFieldParams::build(&harmonic, &spec, &drive, &bath)).unwrap_or(f64::NAN)
            };
            let gaps = [1e-2, 1e-4, 1e-6, 1e-8];
            let values: Vec<f64> = gaps.iter().map(|g| at(*g)).collect();
            let grows = values.windows(2).all(|w| w[1] > 10.0 * w[0]);
            let beyond = {
                let drive = DriveConfig::from_population(omega_l, th * 1.01, g0);
                harmonic_population(&MeanFieldParams::build(&harmonic, &spec, &drive, &bath)).is_err()
            };
            parts.check(
                grows && values.iter().all(|v| v.is_finite()),
                format!(
                    "harmonic n_x at threshold·(1-ε), ε=1e-2..1e-8: {}",
                    values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
                ),
            );
            parts.check(beyond, format!("no harmonic steady state 1% past threshold |α|²={th:.7}"));
        }
        None => {
            parts.check(false, "no harmonic threshold");
        }
    }
    parts.verdict()
}

fn c9_suppression(amp: &RunOutcome, config: &ScenarioConfig) -> Verdict {
    let th = harmonic_threshold(&config.spectrum, config.drive.omega_l, OMEGA_B, config.drive.g0, config.bath.gamma).unwrap_or(f64::NAN);
    let table = rows(amp, "amplification.csv");
    let series = |d: f64| -> Vec<(f64, f64)> {
        table
            .iter()
            .filter(|r| num(r, "delta_omega_b_THz") == d && num(r, "cavity_population") > th)
            .map(|r| (num(r, "cavity_population"), num(r, "n_x")))
            .collect()
    };
    let (weak, strong) = (series(0.1), series(0.2));
    let finite = weak.iter().chain(&strong).all(|p| p.1.is_finite());
    let ordered = weak.len() == strong.len() && weak.iter().zip(&strong).all(|(a, b)| a.0 == b.0 && b.1 <= a.1);
    let max = |s: &[(f64, f64)]| s.iter().map(|p| p.1).fold(f64::NAN, f64::max);
    let mut parts = Parts::default();
    parts
        .check(!weak.is_empty() && finite, format!("{} drives above threshold {th:.4}, all n_x finite", weak.len()))
        .check(max(&weak) > 10.0 && max(&strong) > 10.0, format!("max n_x {:.2} (0.1), {:.2} (0.2) > 10", max(&weak), max(&strong)))
        .check(ordered, "n_x(0.2) ≤ n_x(0.1) at every matched drive");
    parts.verdict()
}

fn c10_lasing(out: &RunOutcome, elapsed: Duration, config: &ScenarioConfig) -> Verdict {
    let mut parts = Parts::default();
    parts.check(out.failed_points == 0, format!("{} jobs, {} failed", out.total_points, out.failed_points));
    let onsets: Vec<(f64, f64)> = rows(out, "onsets.csv").iter().map(|r| (num(r, "delta_omega_b_THz"), num(r, "onset_population"))).collect();
    let onset_of = |d: f64| onsets.iter().find(|o| o.0 == d).map_or(f64::NAN, |o| o.1);
    let table = rows(out, "lasing_map.csv");
    for d in &config.sweeps.anharmonicities {
        let onset = onset_of(*d);
        let pts: Vec<_> = table.iter().filter(|r| num(r, "delta_omega_b_THz") == *d).collect();
        let below_quiet = pts.iter().filter(|r| num(r, "cavity_population") <= 0.9 * onset).all(|r| num(r, "sigma_x") < 1e-6);
        let below_off = pts.iter().filter(|r| num(r, "cavity_population") < onset).all(|r| r["lasing"] == "false");
        let above_on = pts.iter().filter(|r| num(r, "cavity_population") > onset).all(|r| r["lasing"] == "true" && num(r, "sigma_x") > 0.0);
        let n_coh = pts.iter().map(|r| num(r, "n_coh")).fold(f64::NAN, f64::max);
        parts.check(
            onset.is_finite() && below_quiet && below_off && above_on,
            format!("δω_b={d}: onset {onset:.6}, σ_x < 1e-6 up to 0.9·onset, quiet below and lasing above, max n_coh {n_coh:.2}"),
        );
        if *d == 0.2 {
            parts.check(n_coh >= 5.0, format!("δω_b=0.2 n_coh {n_coh:.2} ≥ 5"));
        }
    }
    let (h, a, b) = (onset_of(0.0), onset_of(0.1), onset_of(0.2));
    parts
        .check(h < a && a < b, format!("onsets ordered {h:.6} < {a:.6} < {b:.6}"))
        .check(elapsed < Duration::from_secs(300), format!("{:.1} s < 300 s", elapsed.as_secs_f64()));
    parts.verdict()
}

fn c11_harmonic_equivalence() -> Verdict {
    let config = defaults(Scenario::LasingMap);
    let opts = TrajectoryOptions { sample_stride: 1, ..config.trajectory.options };
    let population = 0.4;
    let harmonic = system_for(&config, 0.0, population);
    let with_a = |a_tilde: f64| OptomechSystem { force: RestoringForce::Morse { a_tilde }, ..harmonic };
    // Deviation against the harmonic run over its full length.
    let deviation = |h: &TrajectoryResult, a_tilde: f64| -> anharm_om::Result<(f64, usize)> {
        let m = integrate_trajectory(&with_a(a_tilde), &opts)?;
        let n = h.samples.len().min(m.samples.len());
        Ok((h.samples[..n].iter().zip(&m.samples[..n]).map(|(a, b)| (a.x - b.x).abs()).fold(0.0, f64::max), n))
    };
    let r = integrate_trajectory(&harmonic, &opts).and_then(|h| {
        let (dx, n) = deviation(&h, 1e-6)?;
        // Same run one decade closer to the harmonic limit: a tenfold drop
        // shows the gap is first order in ã rather than integration noise.
        let (dx_finer, _) = deviation(&h, 1e-7)?;
        Ok((h.stats.sigma_x, dx, dx_finer, n))
    });
    match r {
        Ok((sigma, dx, dx_finer, n)) => {
            let periods = n as f64 * opts.dtau / std::f64::consts::TAU;
            Verdict::new(
                dx < 1e-4 && sigma > 1.0,
                format!(
                    "|α|²={population}: σ_x {sigma:.3}, max |Δx| {dx:.3e} over {periods:.0} periods (< 1e-4); at ã=1e-7 {dx_finer:.3e}"
                ),
            )
        }
        Err(e) => Verdict::error(e),
    }
}

fn c12_determinism(lasing_first: &RunOutcome, amp_first: &RunOutcome) -> Verdict {
    let mut parts = Parts::default();
    let compare = |a: &RunOutcome, b: &RunOutcome| a.artifacts.files == b.artifacts.files;
    for s in Scenario::ALL {
        let config = defaults(s);
        let (a, b) = match s {
            Scenario::LasingMap => (None, run(&config, 3)),
            Scenario::Amplification => (None, run(&config, 3)),
            _ => (Some(run(&config, 1)), run(&config, 4)),
        };
        let first = match s {
            Scenario::LasingMap => lasing_first,
            Scenario::Amplification => amp_first,
            _ => a.as_ref().expect("first run"),
        };
        let csvs = first.artifacts.files.iter().filter(|f| f.0.ends_with(".csv")).count();
        parts.check(compare(first, &b) && csvs > 0, format!("{s}: {csvs} csv + all other artifacts identical"));
    }
    parts.verdict()
}

type Criterion<'a> = (usize, &'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() {
    // `cargo test` forwards harness flags; only a name filter is honoured.
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let wanted = |n: usize| filter.as_deref().is_none_or(|f| format!("criterion_{n}").contains(f));

    let amp_config = defaults(Scenario::Amplification);
    let lasing_config = defaults(Scenario::LasingMap);
    let amp = (wanted(8) || wanted(9) || wanted(12)).then(|| run(&amp_config, 1));
    let lasing = (wanted(10) || wanted(12)).then(|| {
        let start = Instant::now();
        let out = run(&lasing_config, 1);
        (out, start.elapsed())
    });

    let criteria: Vec<Criterion> = vec![
        (1, "Morse spectrum oracle", Box::new(c1_spectrum)),
        (2, "matrix-element oracle", Box::new(c2_elements)),
        (3, "bound-state count", Box::new(c3_bound_states)),
        (4, "thermal baseline", Box::new(c4_thermal)),
        (5, "three-level closed forms", Box::new(c5_three_level)),
        (6, "blockade laser sweep", Box::new(c6_blockade)),
        (7, "thermal monotonicity", Box::new(c7_thermal_monotone)),
        (8, "mean field vs ladder", Box::new(|| c8_meanfield(amp.as_ref().expect("run"), &amp_config))),
        (9, "amplification suppression", Box::new(|| c9_suppression(amp.as_ref().expect("run"), &amp_config))),
        (10, "lasing onset and amplitude", Box::new(|| {
            let (out, t) = lasing.as_ref().expect("run");
            c10_lasing(out, *t, &lasing_config)
        })),
        (11, "harmonic-limit trajectory", Box::new(c11_harmonic_equivalence)),
        (12, "determinism across workers", Box::new(|| {
            c12_determinism(&lasing.as_ref().expect("run").0, amp.as_ref().expect("run"))
        })),
    ];

    let mut failed = Vec::new();
    for (n, name, check) in criteria.iter().filter(|c| wanted(c.0)) {
        let start = Instant::now();
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {tag} {name} ({:.2} s): {}", start.elapsed().as_secs_f64(), v.detail);
        if !v.pass {
            failed.push(*n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
