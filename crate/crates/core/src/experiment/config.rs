//! Flat `key = value` experiment configuration.
//!
//! Keys are case-insensitive. Lists are comma separated; the SNR sweep also
//! accepts `start:step:stop`. Lines starting with `#` are comments.

use super::{Architecture, ExperimentId, PatternKind};
use crate::array::{Codebook, RaaConfig, UlaConfig};
use crate::error::{Error, Result};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_PHI_MAX: f64 = 0.499 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub architectures: Vec<Architecture>,
    pub patterns: Vec<PatternKind>,
    pub m: usize,
    pub n_rf: usize,
    pub k: usize,
    pub snr_db: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    pub phi_max: f64,
    pub max_iterations: usize,
    pub eps: f64,
    pub output: Option<PathBuf>,
    pub channel_dump: Option<PathBuf>,
}

/// A validated configuration plus the defaults that were filled in and
/// any non-fatal remarks.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub config: ExperimentConfig,
    pub provenance: Vec<String>,
    pub warnings: Vec<String>,
}

const KEYS: &[&str] = &[
    "experiment",
    "architecture",
    "pattern",
    "m",
    "n_rf",
    "k",
    "snr_db",
    "realizations",
    "seed",
    "phi_max",
    "t_max",
    "eps",
    "output",
    "channel_dump",
];

fn default_sweep() -> Vec<f64> {
    (0..9).map(|i| -10.0 + 2.5 * i as f64).collect()
}

/// Per-experiment defaults: `(M, N_RF, K, sweep, architectures, patterns, realizations)`.
fn defaults(
    id: ExperimentId,
) -> (usize, usize, usize, Vec<f64>, Vec<Architecture>, Vec<PatternKind>, usize) {
    use Architecture::*;
    use PatternKind::*;
    match id {
        ExperimentId::Beampattern => (8, 1, 1, vec![0.0], vec![Raa], vec![Isotropic], 1),
        ExperimentId::UlSingle => (128, 8, 1, default_sweep(), vec![Raa, Ula], vec![Directional, Isotropic], 50),
        ExperimentId::UlMultiSmall => (6, 3, 3, default_sweep(), vec![Raa, Ula], vec![Directional], 50),
        ExperimentId::UlMultiLarge => (128, 8, 8, default_sweep(), vec![Raa, Ula], vec![Directional], 50),
        ExperimentId::Convergence => (6, 3, 3, vec![10.0], vec![Raa], vec![Directional], 50),
        ExperimentId::DlMaxMin => (6, 3, 3, default_sweep(), vec![Raa, Ula], vec![Directional], 50),
    }
}

fn parse_list<T: FromStr<Err = String>>(v: &str) -> std::result::Result<Vec<T>, String> {
    let items: Vec<T> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(T::from_str)
        .collect::<std::result::Result<_, _>>()?;
    if items.is_empty() {
        return Err("empty list".to_string());
    }
    Ok(items)
}

fn parse_sweep(v: &str) -> std::result::Result<Vec<f64>, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("'{}': {e}", s.trim()))
    };
    if v.contains(':') {
        let parts: Vec<&str> = v.split(':').collect();
        if parts.len() != 3 {
            return Err("range must be start:step:stop".to_string());
        }
        let (start, step, stop) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err("range needs a positive step and stop >= start".to_string());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    let values: Vec<f64> = v
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse)
        .collect::<std::result::Result<_, _>>()?;
    if values.is_empty() {
        return Err("empty list".to_string());
    }
    Ok(values)
}

/// Accepts plain radians or a multiple of pi such as `0.499pi`.
fn parse_angle(v: &str) -> std::result::Result<f64, String> {
    let t = v.trim().to_ascii_lowercase();
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let factor = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>().map_err(|e| e.to_string())?
        };
        return Ok(factor * std::f64::consts::PI);
    }
    t.parse::<f64>().map_err(|e| e.to_string())
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Validated> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses and validates; every problem found is reported at once.
    pub fn parse(text: &str) -> Result<Validated> {
        let mut errors = Vec::new();
        let mut raw: Vec<(String, String, usize)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                errors.push(format!("line {}: expected key = value", i + 1));
                continue;
            };
            let key = key.trim().to_ascii_lowercase();
            if !KEYS.contains(&key.as_str()) {
                errors.push(format!("line {}: unknown key '{}'", i + 1, key));
                continue;
            }
            if raw.iter().any(|(k, _, _)| *k == key) {
                errors.push(format!("line {}: duplicate key '{}'", i + 1, key));
                continue;
            }
            raw.push((key, value.trim().to_string(), i + 1));
        }
        let get = |k: &str| raw.iter().find(|(key, _, _)| key == k).map(|(_, v, l)| (v.as_str(), *l));

        let mut provenance = Vec::new();
        let mut warnings = Vec::new();

        let experiment = match get("experiment") {
            Some((v, l)) => match v.parse::<ExperimentId>() {
                Ok(id) => id,
                Err(e) => {
                    errors.push(format!("line {l}: {e}"));
                    ExperimentId::UlMultiLarge
                }
            },
            None => {
                provenance.push(format!("experiment = {} (default)", ExperimentId::UlMultiLarge));
                ExperimentId::UlMultiLarge
            }
        };
        let (dm, dnrf, dk, dsweep, darch, dpat, dreal) = defaults(experiment);

        macro_rules! field {
            ($key:literal, $default:expr, $show:expr, $parse:expr) => {
                match get($key) {
                    Some((v, l)) => match $parse(v) {
                        Ok(x) => Some(x),
                        Err(e) => {
                            errors.push(format!("line {}: {}: {}", l, $key, e));
                            None
                        }
                    },
                    None => {
                        let d = $default;
                        provenance.push(format!("{} = {} (default)", display_key($key), $show(&d)));
                        Some(d)
                    }
                }
            };
        }
        let int = |v: &str| v.parse::<i64>().map_err(|e| e.to_string());

        let architectures = field!("architecture", darch, |v: &Vec<Architecture>| join(v), parse_list::<Architecture>);
        let patterns = field!("pattern", dpat, |v: &Vec<PatternKind>| join(v), parse_list::<PatternKind>);
        let m = field!("m", dm as i64, |v: &i64| v.to_string(), int);
        let n_rf = field!("n_rf", dnrf as i64, |v: &i64| v.to_string(), int);
        let k = field!("k", dk as i64, |v: &i64| v.to_string(), int);
        let snr_db = field!("snr_db", dsweep, |v: &Vec<f64>| join(v), parse_sweep);
        let realizations = field!("realizations", dreal as i64, |v: &i64| v.to_string(), int);
        let seed = field!("seed", DEFAULT_SEED, |v: &u64| v.to_string(), |v: &str| v
            .parse::<u64>()
            .map_err(|e| e.to_string()));
        let phi_max = field!("phi_max", DEFAULT_PHI_MAX, |v: &f64| v.to_string(), parse_angle);
        let t_max = field!("t_max", 20i64, |v: &i64| v.to_string(), int);
        let eps = field!("eps", 1e-3, |v: &f64| v.to_string(), |v: &str| v
            .parse::<f64>()
            .map_err(|e| e.to_string()));
        let output = get("output").map(|(v, _)| PathBuf::from(v));
        let channel_dump = get("channel_dump").map(|(v, _)| PathBuf::from(v));

        let mut positive = |name: &str, v: Option<i64>, min: i64| -> usize {
            match v {
                Some(x) if x >= min => x as usize,
                Some(x) => {
                    errors.push(format!("{name} must be at least {min}, got {x}"));
                    min.max(0) as usize
                }
                None => min.max(0) as usize,
            }
        };
        let m = positive("M", m, 2);
        let n_rf = positive("N_RF", n_rf, 1);
        let k = positive("K", k, 1);
        let realizations = positive("realizations", realizations, 1);
        let max_iterations = positive("t_max", t_max, 1);

        if let Some(s) = &snr_db {
            if s.iter().any(|v| !v.is_finite()) {
                errors.push("snr_db values must be finite".to_string());
            }
        }
        if let Some(p) = phi_max {
            if !(p > 0.0 && p < std::f64::consts::FRAC_PI_2) {
                errors.push(format!("phi_max must lie in (0, pi/2), got {p}"));
            }
        }
        if let Some(e) = eps {
            if !(e > 0.0 && e.is_finite()) {
                errors.push(format!("eps must be positive, got {e}"));
            }
        }
        let architectures = architectures.unwrap_or_default();
        let patterns = patterns.unwrap_or_default();
        let phi_max = phi_max.unwrap_or(DEFAULT_PHI_MAX);

        if experiment == ExperimentId::UlSingle && k != 1 {
            errors.push(format!("{experiment} is single-user, K must be 1, got {k}"));
        }
        if errors.is_empty() {
            if architectures.contains(&Architecture::Raa) {
                if let Ok(raa) = RaaConfig::design(m, phi_max, 0.0) {
                    if n_rf > raa.beam_count() && experiment != ExperimentId::Beampattern {
                        errors.push(format!(
                            "N_RF = {n_rf} exceeds the {} rays of the RAA",
                            raa.beam_count()
                        ));
                    }
                }
            }
            if architectures.contains(&Architecture::Ula) {
                if let Ok(ula) = UlaConfig::dft(m, phi_max) {
                    if n_rf > ula.beam_count() && experiment != ExperimentId::Beampattern {
                        errors.push(format!(
                            "N_RF = {n_rf} exceeds the {} DFT codewords of the ULA",
                            ula.beam_count()
                        ));
                    }
                }
            }
        }
        if k > n_rf && experiment.is_multi_user() {
            warnings.push(format!(
                "K = {k} exceeds N_RF = {n_rf}; interference cannot be fully suppressed"
            ));
        }
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }
        Ok(Validated {
            config: Self {
                experiment,
                architectures,
                patterns,
                m,
                n_rf,
                k,
                snr_db: snr_db.unwrap_or_default(),
                realizations,
                seed: seed.unwrap_or(DEFAULT_SEED),
                phi_max,
                max_iterations,
                eps: eps.unwrap_or(1e-3),
                output,
                channel_dump,
            },
            provenance,
            warnings,
        })
    }
}

fn display_key(key: &str) -> &str {
    match key {
        "m" => "M",
        "n_rf" => "N_RF",
        "k" => "K",
        other => other,
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "experiment = {}", self.experiment)?;
        writeln!(f, "architecture = {}", join(&self.architectures))?;
        writeln!(f, "pattern = {}", join(&self.patterns))?;
        writeln!(f, "M = {}", self.m)?;
        writeln!(f, "N_RF = {}", self.n_rf)?;
        writeln!(f, "K = {}", self.k)?;
        writeln!(f, "snr_db = {}", join(&self.snr_db))?;
        writeln!(f, "realizations = {}", self.realizations)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "phi_max = {}", self.phi_max)?;
        writeln!(f, "t_max = {}", self.max_iterations)?;
        writeln!(f, "eps = {}", self.eps)?;
        if let Some(p) = &self.output {
            writeln!(f, "output = {}", p.display())?;
        }
        if let Some(p) = &self.channel_dump {
            writeln!(f, "channel_dump = {}", p.display())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let v = ExperimentConfig::parse("").unwrap();
        let c = &v.config;
        assert_eq!((c.m, c.n_rf, c.k, c.realizations), (128, 8, 8, 50));
        assert_eq!(c.snr_db.len(), 9);
        assert_eq!(c.snr_db[0], -10.0);
        assert_eq!(c.snr_db[8], 10.0);
        assert!(v.provenance.iter().any(|l| l.starts_with("M = 128")));
        assert!(v.provenance.len() >= 10);
    }

    #[test]
    fn small_case_defaults_follow_experiment() {
        let v = ExperimentConfig::parse("experiment = fig_ul_multi_small\n").unwrap();
        assert_eq!((v.config.m, v.config.n_rf, v.config.k), (6, 3, 3));
    }

    #[test]
    fn all_violations_reported() {
        let err = ExperimentConfig::parse("realizations = -3\nbogus = 1\nM = 1\nsnr_db = x\n")
            .unwrap_err();
        let Error::Config(list) = err else {
            panic!("expected a config error")
        };
        assert_eq!(list.len(), 4, "{list:?}");
    }

    #[test]
    fn k_above_n_rf_warns() {
        let v = ExperimentConfig::parse("experiment = fig_dl_maxmin\nK = 4\nN_RF = 3\n").unwrap();
        assert_eq!(v.warnings.len(), 1);
    }

    #[test]
    fn sweep_and_angle_syntax() {
        let v = ExperimentConfig::parse("snr_db = -10:5:10\nphi_max = 0.4pi\nMODE_UNUSED = 1")
            .unwrap_err();
        assert!(matches!(v, Error::Config(ref l) if l.len() == 1));
        let v = ExperimentConfig::parse("snr_db = -10:5:10\nphi_max = 0.4pi\nArchitecture = ula")
            .unwrap();
        assert_eq!(v.config.snr_db, vec![-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert!((v.config.phi_max - 0.4 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(v.config.architectures, vec![Architecture::Ula]);
    }

    #[test]
    fn display_round_trips() {
        let v = ExperimentConfig::parse("experiment = fig_convergence\nseed = 9\n").unwrap();
        let again = ExperimentConfig::parse(&v.config.to_string()).unwrap();
        assert_eq!(again.config, v.config);
        assert!(again.provenance.is_empty());
    }
}
