//! Flat INI-style scenario configuration.
//!
//! Values are layered: built-in defaults, scenario defaults, the config
//! file, then `--set section.key=value` overrides. Every key a file or
//! override mentions must exist in the defaults, so typos are rejected with
//! the offending location instead of being ignored.

use std::collections::BTreeMap;
use std::fmt;

use super::ScenarioError;

/// Defaults shared by every scenario. This table is also the schema.
pub const BASE_DEFAULTS: &str = "\
[morse]
omega_b = 20
delta_omega_b = 2
# requested ladder size, capped at the bound-state count
truncation = 16

[spectrum]
# hybrid | single
kind = hybrid
omega_1 = 550
omega_2 = 486
kappa_1 = 60
kappa_2 = 0.15
coupling = 15
# broad | narrow: which hybrid mode the laser drives
driven = broad

[drive]
omega_l = 501
population = 4
g0 = 2

[bath]
gamma = 0.05
n_th = 0.05

[sweep]
# ranges are min:max:points
omega_l = 475:510:351
delta_omega_b = 0.5:3:26
population = 0.25:6:24
n_th = 0.05, 0.02, 0.01
# 0 selects the harmonic oscillator
anharmonicities = 0.1, 0.2

[trajectory]
steps_per_period = 1000
window_periods = 100
tolerance = 0.01
min_periods = 1000
max_periods = 20000
onset_lo = 0.25
onset_hi = 0.35
onset_tolerance = 1e-5
";

/// Where a value came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Default,
    File { path: String, line: usize },
    Override(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => write!(f, "<defaults>"),
            Origin::File { path, line } => write!(f, "{path}:{line}"),
            Origin::Override(arg) => write!(f, "--set {arg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    origin: Origin,
}

/// A resolved set of `section.key` values.
#[derive(Debug, Clone, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

fn config_error(origin: &Origin, field: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Config { location: format!("{origin}: {field}"), message: message.into() }
}

/// Parse INI text into `(section.key, value, line)` triples.
fn parse_ini(text: &str, path: &str) -> Result<Vec<(String, String, Origin)>, ScenarioError> {
    let mut section: Option<String> = None;
    let mut out: Vec<(String, String, Origin)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let origin = Origin::File { path: path.to_string(), line: index + 1 };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| config_error(&origin, "section", "missing closing ']'"))?;
            section = Some(name.trim().to_string());
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| config_error(&origin, line, "expected 'key = value'"))?;
        let section = section.as_deref().ok_or_else(|| config_error(&origin, key.trim(), "key outside any [section]"))?;
        let full = format!("{section}.{}", key.trim());
        if out.iter().any(|(k, _, _)| *k == full) {
            return Err(config_error(&origin, &full, "duplicate key"));
        }
        out.push((full, value.trim().to_string(), origin));
    }
    Ok(out)
}

impl RawConfig {
    /// Built-in defaults with scenario-specific replacements applied.
    pub fn defaults(scenario_overrides: &str) -> Self {
        let mut cfg = RawConfig { entries: BTreeMap::new() };
        let base = parse_ini(BASE_DEFAULTS, "<defaults>").expect("built-in defaults parse");
        for (key, value, _) in base {
            cfg.entries.insert(key, Entry { value, origin: Origin::Default });
        }
        let extra = parse_ini(scenario_overrides, "<defaults>").expect("scenario defaults parse");
        for (key, value, _) in extra {
            let slot = cfg.entries.get_mut(&key).expect("scenario default names a known key");
            slot.value = value;
        }
        cfg
    }

    fn set(&mut self, key: &str, value: String, origin: Origin) -> Result<(), ScenarioError> {
        match self.entries.get_mut(key) {
            Some(slot) => {
                *slot = Entry { value, origin };
                Ok(())
            }
            None => Err(config_error(&origin, key, "unknown key")),
        }
    }

    /// Overlay a config file's contents.
    pub fn apply_file(&mut self, text: &str, path: &str) -> Result<(), ScenarioError> {
        for (key, value, origin) in parse_ini(text, path)? {
            self.set(&key, value, origin)?;
        }
        Ok(())
    }

    /// Overlay one `section.key=value` argument.
    pub fn apply_override(&mut self, arg: &str) -> Result<(), ScenarioError> {
        let origin = Origin::Override(arg.to_string());
        let (key, value) = arg.split_once('=').ok_or_else(|| config_error(&origin, arg, "expected section.key=value"))?;
        let key = key.trim();
        if !key.contains('.') {
            return Err(config_error(&origin, key, "expected section.key"));
        }
        self.set(key, value.trim().to_string(), origin)
    }

    fn entry(&self, key: &str) -> &Entry {
        self.entries.get(key).unwrap_or_else(|| panic!("schema has no key {key}"))
    }

    pub fn string(&self, key: &str) -> &str {
        &self.entry(key).value
    }

    pub fn f64(&self, key: &str) -> Result<f64, ScenarioError> {
        let e = self.entry(key);
        parse_number(&e.value).ok_or_else(|| config_error(&e.origin, key, format!("expected a finite number, got '{}'", e.value)))
    }

    /// A number that must be `> 0` (or `>= 0` when `allow_zero`).
    pub fn positive(&self, key: &str, allow_zero: bool) -> Result<f64, ScenarioError> {
        let v = self.f64(key)?;
        if v > 0.0 || (allow_zero && v == 0.0) {
            Ok(v)
        } else {
            let bound = if allow_zero { "non-negative" } else { "positive" };
            Err(config_error(&self.entry(key).origin, key, format!("must be {bound}, got {v}")))
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, ScenarioError> {
        let e = self.entry(key);
        e.value
            .parse::<usize>()
            .map_err(|_| config_error(&e.origin, key, format!("expected a non-negative integer, got '{}'", e.value)))
    }

    pub fn choice<'a>(&self, key: &str, allowed: &[&'a str]) -> Result<&'a str, ScenarioError> {
        let e = self.entry(key);
        allowed
            .iter()
            .find(|a| a.eq_ignore_ascii_case(&e.value))
            .copied()
            .ok_or_else(|| config_error(&e.origin, key, format!("expected one of {}, got '{}'", allowed.join("|"), e.value)))
    }

    /// Comma-separated list of non-negative numbers, at least one.
    pub fn list(&self, key: &str) -> Result<Vec<f64>, ScenarioError> {
        let e = self.entry(key);
        let values: Option<Vec<f64>> = e.value.split(',').map(|s| parse_number(s.trim()).filter(|v| *v >= 0.0)).collect();
        match values {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(config_error(&e.origin, key, format!("expected a comma-separated list of non-negative numbers, got '{}'", e.value))),
        }
    }

    /// `min:max:points` sweep range.
    pub fn range(&self, key: &str) -> Result<SweepRange, ScenarioError> {
        let e = self.entry(key);
        let bad = |why: &str| config_error(&e.origin, key, format!("{why} in range '{}'", e.value));
        let parts: Vec<&str> = e.value.split(':').map(str::trim).collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad("expected min:max:points"));
        };
        let min = parse_number(lo).ok_or_else(|| bad("bad minimum"))?;
        let max = parse_number(hi).ok_or_else(|| bad("bad maximum"))?;
        let points = n.parse::<usize>().map_err(|_| bad("bad point count"))?;
        SweepRange::new(min, max, points).map_err(|why| bad(&why))
    }

    /// Every resolved value, for echoing into summaries.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.entries.iter().map(|(k, e)| (k.clone(), e.value.clone())).collect()
    }

    /// Attach a diagnostic to a key after semantic validation.
    pub fn invalid(&self, key: &str, message: impl Into<String>) -> ScenarioError {
        config_error(&self.entry(key).origin, key, message)
    }
}

fn parse_number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Uniform grid of `points` values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl SweepRange {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self, String> {
        match points {
            0 => Err("empty sweep".into()),
            1 if min == max => Ok(Self { min, max, points }),
            1 => Err("a single point needs min == max".into()),
            _ if min < max => Ok(Self { min, max, points }),
            _ => Err("min must be below max".into()),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| if i + 1 == self.points { self.max } else { self.min + i as f64 * step }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering_and_diagnostics() {
        let mut cfg = RawConfig::defaults("[drive]\nomega_l = 495\n");
        assert_eq!(cfg.f64("drive.omega_l").unwrap(), 495.0);
        cfg.apply_file("# comment\n[bath]\nn_th = 0.02\n", "run.ini").unwrap();
        assert_eq!(cfg.f64("bath.n_th").unwrap(), 0.02);
        cfg.apply_override("bath.n_th=0.01").unwrap();
        assert_eq!(cfg.f64("bath.n_th").unwrap(), 0.01);

        let err = cfg.apply_file("[bath]\n\nn_thh = 1\n", "run.ini").unwrap_err().to_string();
        assert!(err.contains("run.ini:3") && err.contains("bath.n_thh") && err.contains("unknown"), "{err}");
        cfg.apply_file("[drive]\ng0 = abc\n", "bad.ini").unwrap();
        let err = cfg.f64("drive.g0").unwrap_err().to_string();
        assert!(err.starts_with("bad.ini:2: drive.g0"), "{err}");
        assert!(cfg.apply_file("g0 = 1\n", "x.ini").is_err());
        assert!(cfg.apply_file("[drive]\ng0 = 1\ng0 = 2\n", "x.ini").is_err());
        assert!(cfg.apply_override("drive").is_err());
    }

    #[test]
    fn ranges() {
        let r = SweepRange::new(490.0, 510.0, 201).unwrap();
        let v = r.values();
        assert_eq!(v.len(), 201);
        assert_eq!((v[0], v[200]), (490.0, 510.0));
        assert!((v[10] - 491.0).abs() < 1e-12);
        assert!(SweepRange::new(1.0, 0.0, 5).is_err());
        assert!(SweepRange::new(0.0, 1.0, 0).is_err());
        assert_eq!(SweepRange::new(2.0, 2.0, 1).unwrap().values(), vec![2.0]);

        let mut cfg = RawConfig::defaults("");
        cfg.apply_override("sweep.omega_l=5:1:3").unwrap();
        assert!(cfg.range("sweep.omega_l").unwrap_err().to_string().contains("min must be below max"));
    }
}
