use super::table::write_atomic;
use super::{Architecture, ExperimentConfig, ExperimentId, PatternKind, ResultTable, Row};
use crate::array::{sula_output, ula_beam_pattern, RaaConfig, UlaConfig};
use crate::channel::{
    effective_raa_channel, group_paths, read_dump, sample_paths, ula_channel, write_dump,
    DumpRecord, PathSet, ScenarioParams,
};
use crate::downlink::{AlternatingOptions, DownlinkProblem};
use crate::error::{invalid, Error, Result};
use crate::pattern::{db_to_linear, ElementPattern};
use crate::selection::DEFAULT_ENUMERATION_CAP;
use crate::uplink::{single_user_select_and_mrc, Uplink};
use crate::CVector;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;

/// Points on the angle grid of the beam-pattern experiment.
const BEAM_GRID: usize = 721;
/// Floor used when converting a zero SINR to dB.
const DB_FLOOR: f64 = 1e-30;

/// One value produced by one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub metric: String,
    pub architecture: Architecture,
    pub pattern: PatternKind,
    pub value: f64,
}

/// Array geometry and scenario derived from a configuration.
#[derive(Debug, Clone)]
pub struct Setup {
    pub raa: RaaConfig,
    pub ula: UlaConfig,
    pub scenario: ScenarioParams,
    pub alternating: AlternatingOptions,
}

impl Setup {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let users = if cfg.experiment == ExperimentId::UlSingle { 1 } else { cfg.k };
        Ok(Self {
            raa: RaaConfig::design(cfg.m, cfg.phi_max, 0.0)?,
            ula: UlaConfig::dft(cfg.m, cfg.phi_max)?,
            scenario: ScenarioParams {
                users,
                seed: cfg.seed,
                realizations: cfg.realizations,
                ..ScenarioParams::default()
            },
            alternating: AlternatingOptions {
                max_iterations: cfg.max_iterations,
                eps: cfg.eps,
                ..AlternatingOptions::default()
            },
        })
    }

    /// Port-domain channels of all users for one architecture and pattern.
    pub fn channels(&self, arch: Architecture, kind: PatternKind, users: &[PathSet]) -> Vec<CVector> {
        match arch {
            Architecture::Raa => {
                let pattern = raa_pattern(kind);
                users
                    .iter()
                    .map(|p| effective_raa_channel(p, &self.raa, &pattern))
                    .collect()
            }
            Architecture::Ula => {
                let pattern = ula_pattern(kind);
                let m = self.raa.elements();
                users
                    .iter()
                    .map(|p| CVector::from_vec(self.ula.project(ula_channel(p, m, &pattern).as_slice())))
                    .collect()
            }
        }
    }
}

pub fn raa_pattern(kind: PatternKind) -> ElementPattern {
    match kind {
        PatternKind::Directional => ElementPattern::raa_directional(),
        PatternKind::Isotropic => ElementPattern::isotropic_reference(),
    }
}

pub fn ula_pattern(kind: PatternKind) -> ElementPattern {
    match kind {
        PatternKind::Directional => ElementPattern::ula_directional(),
        PatternKind::Isotropic => ElementPattern::isotropic_reference(),
    }
}

fn to_db(x: f64) -> f64 {
    10.0 * x.max(DB_FLOOR).log10()
}

fn snr_tag(snr: f64) -> String {
    format!("{snr}").replace('-', "m")
}

/// Every sample of one realization, in a fixed order.
pub fn evaluate_realization(
    cfg: &ExperimentConfig,
    setup: &Setup,
    realization: usize,
    users: &[PathSet],
) -> Result<Vec<Sample>> {
    let m = cfg.m;
    let mut out = Vec::new();
    for &arch in &cfg.architectures {
        for &kind in &cfg.patterns {
            let h = setup.channels(arch, kind, users);
            let mut push = |x: f64, metric: String, value: f64| {
                out.push(Sample {
                    x,
                    metric,
                    architecture: arch,
                    pattern: kind,
                    value,
                })
            };
            for &snr in &cfg.snr_db {
                let p_bar = db_to_linear(snr);
                match cfg.experiment {
                    ExperimentId::Beampattern => {
                        return Err(invalid("beam patterns do not use channel draws"))
                    }
                    ExperimentId::UlSingle => {
                        let res = single_user_select_and_mrc(&h[0], cfg.n_rf, p_bar, m)?;
                        push(snr, "snr_db".into(), to_db(res.sinr[0]));
                    }
                    ExperimentId::UlMultiSmall | ExperimentId::UlMultiLarge => {
                        let up = Uplink::new(h.clone(), m, p_bar)?;
                        push(snr, "sum_rate_greedy".into(), up.greedy(cfg.n_rf)?.sum_rate);
                        if cfg.experiment == ExperimentId::UlMultiSmall {
                            let ex = up.exhaustive(cfg.n_rf, DEFAULT_ENUMERATION_CAP)?;
                            push(snr, "sum_rate_exhaustive".into(), ex.sum_rate);
                        }
                    }
                    ExperimentId::DlMaxMin | ExperimentId::Convergence => {
                        let problem = DownlinkProblem::new(h.clone(), cfg.n_rf, p_bar, 1.0, m)?;
                        let res = problem.alternating(setup.alternating)?;
                        if cfg.experiment == ExperimentId::DlMaxMin {
                            push(snr, "max_min_sinr_db".into(), to_db(res.gamma));
                            continue;
                        }
                        let tag = snr_tag(snr);
                        for (i, &g) in res.trace.iter().enumerate() {
                            push((i + 1) as f64, format!("gamma_db_snr{tag}_r{realization}"), to_db(g));
                        }
                        let last = *res.trace.last().expect("at least one iteration");
                        for i in 0..cfg.max_iterations {
                            let g = res.trace.get(i).copied().unwrap_or(last);
                            push((i + 1) as f64, format!("gamma_db_snr{tag}"), to_db(g));
                        }
                        push(snr, "iterations".into(), res.trace.len() as f64);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn beam_patterns(cfg: &ExperimentConfig, setup: &Setup) -> Vec<Sample> {
    let m = cfg.m;
    let grid: Vec<f64> = (0..BEAM_GRID)
        .map(|i| -0.5 * PI + PI * i as f64 / (BEAM_GRID - 1) as f64)
        .collect();
    let etas = [(-0.3, "m0.3pi"), (0.0, "0"), (0.3, "0.3pi")];
    let mut out = Vec::new();
    for &arch in &cfg.architectures {
        for &kind in &cfg.patterns {
            // unit gain for the isotropic curves so the peaks read M
            let (raa_el, ula_el) = match kind {
                PatternKind::Directional => (raa_pattern(kind), ula_pattern(kind)),
                PatternKind::Isotropic => (ElementPattern::unit(), ElementPattern::unit()),
            };
            for &(frac, label) in &etas {
                let eta = frac * PI;
                let (metric, values): (String, Vec<f64>) = match arch {
                    Architecture::Raa => (
                        format!("magnitude_eta_{label}"),
                        grid.iter()
                            .map(|&phi| {
                                sula_output(phi, eta, m, setup.raa.hub_radius(), &raa_el).norm()
                            })
                            .collect(),
                    ),
                    Architecture::Ula => {
                        let half = (setup.ula.codeword_count() as i64 - 1) / 2;
                        let n = ((eta.sin() * m as f64 / 2.0).round() as i64).clamp(-half, half);
                        let phi_n = (2.0 * n as f64 / m as f64).asin();
                        (
                            format!("magnitude_codeword_{}", n.to_string().replace('-', "m")),
                            grid.iter()
                                .map(|&phi| ula_beam_pattern(phi, phi_n, m, &ula_el).norm())
                                .collect(),
                        )
                    }
                };
                for (&phi, v) in grid.iter().zip(values) {
                    out.push(Sample {
                        x: phi,
                        metric: metric.clone(),
                        architecture: arch,
                        pattern: kind,
                        value: v,
                    });
                }
            }
        }
    }
    out
}

fn draw_users(setup: &Setup, realization: usize) -> Vec<PathSet> {
    let s = &setup.scenario;
    (0..s.users)
        .map(|k| sample_paths(s, &mut s.rng(k, realization)))
        .collect()
}

fn aggregate(cfg: &ExperimentConfig, per_realization: Vec<Vec<Sample>>) -> ResultTable {
    type Key = (String, u64, Architecture, PatternKind);
    let mut order: Vec<Key> = Vec::new();
    let mut groups: HashMap<Key, Vec<f64>> = HashMap::new();
    for samples in per_realization {
        for s in samples {
            let key = (s.metric, s.x.to_bits(), s.architecture, s.pattern);
            groups
                .entry(key.clone())
                .or_insert_with(|| {
                    order.push(key);
                    Vec::new()
                })
                .push(s.value);
        }
    }
    let rows = order
        .into_iter()
        .map(|key| {
            let values = &groups[&key];
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let stderr = if values.len() > 1 {
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            let (metric, x, arch, kind) = key;
            Row {
                x_value: f64::from_bits(x),
                metric,
                mean,
                stderr,
                architecture: arch.to_string(),
                pattern: kind.to_string(),
                realizations: values.len(),
                seed: cfg.seed,
            }
        })
        .collect();
    ResultTable { rows }
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Runs the configured experiment. When `channel_dump` is set, the path
/// sets of every realization are written there as well.
pub fn run_experiment(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ResultTable> {
    let setup = Setup::new(cfg)?;
    if cfg.experiment == ExperimentId::Beampattern {
        return Ok(aggregate(cfg, vec![beam_patterns(cfg, &setup)]));
    }
    let results: Vec<Result<(Vec<PathSet>, Vec<Sample>)>> = in_pool(threads, || {
        (0..cfg.realizations)
            .into_par_iter()
            .map(|r| {
                let users = draw_users(&setup, r);
                let samples = evaluate_realization(cfg, &setup, r, &users)?;
                Ok((users, samples))
            })
            .collect()
    })?;
    let mut paths = Vec::with_capacity(results.len());
    let mut samples = Vec::with_capacity(results.len());
    for res in results {
        let (u, s) = res?;
        paths.push(u);
        samples.push(s);
    }
    if let Some(dump) = &cfg.channel_dump {
        let records: Vec<DumpRecord> = paths
            .iter()
            .enumerate()
            .flat_map(|(r, users)| {
                users.iter().enumerate().flat_map(move |(k, set)| {
                    set.paths.iter().map(move |&path| DumpRecord {
                        realization: r,
                        user: k,
                        path,
                    })
                })
            })
            .collect();
        let mut buf = Vec::new();
        write_dump(&mut buf, &records)?;
        write_atomic(dump, &buf)?;
    }
    Ok(aggregate(cfg, samples))
}

/// Recomputes the result table from a channel dump instead of fresh draws.
pub fn replay_from_dump(cfg: &ExperimentConfig, dump: &Path) -> Result<ResultTable> {
    let setup = Setup::new(cfg)?;
    if cfg.experiment == ExperimentId::Beampattern {
        return Ok(aggregate(cfg, vec![beam_patterns(cfg, &setup)]));
    }
    let file = std::io::BufReader::new(std::fs::File::open(dump)?);
    let mut grouped = group_paths(&read_dump(file)?);
    let mut samples = Vec::with_capacity(cfg.realizations);
    for r in 0..cfg.realizations {
        let users = (0..setup.scenario.users)
            .map(|k| {
                grouped.remove(&(r, k)).ok_or_else(|| {
                    Error::InvalidParameter(format!("dump has no paths for realization {r}, user {k}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        samples.push(evaluate_realization(cfg, &setup, r, &users)?);
    }
    Ok(aggregate(cfg, samples))
}
