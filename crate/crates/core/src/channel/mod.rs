//! Clustered multipath channel draws and effective array channels.
//!
//! Paths follow the UMa NLoS cluster model: a log-normal azimuth spread,
//! log-normal cluster powers, exponentially weighted ray powers, cluster
//! angles spread around a uniformly drawn line-of-sight direction, and
//! uniform per-ray angle offsets. Every (seed, user, realization) triple owns
//! an independent ChaCha stream, so draws do not depend on evaluation order.

mod dump;

pub use dump::{group_paths, read_dump, write_dump, DumpRecord};

use crate::array::{sula_output, ula_steering, RaaConfig};
use crate::error::{invalid, Result};
use crate::pattern::{wrap_angle, ElementPattern};
use crate::{CVector, Complex64};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::PI;

/// Random source for one (user, realization) pair.
pub type ChannelRng = ChaCha8Rng;

/// Per-ray angle offset scale, degrees.
const RAY_OFFSET_SCALE_DEG: f64 = 15.0;
/// Cluster shadowing standard deviation, dB.
const CLUSTER_SHADOWING_DB: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub carrier_ghz: f64,
    pub clusters: usize,
    pub rays_per_cluster: usize,
    pub users: usize,
    pub seed: u64,
    pub realizations: usize,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            carrier_ghz: 47.2,
            clusters: 12,
            rays_per_cluster: 20,
            users: 8,
            seed: 0,
            realizations: 50,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.carrier_ghz > 0.0 && self.carrier_ghz.is_finite()) {
            errs.push(format!("carrier frequency must be positive, got {}", self.carrier_ghz));
        }
        if self.clusters == 0 {
            errs.push("need at least one cluster".to_string());
        }
        if self.rays_per_cluster == 0 {
            errs.push("need at least one ray per cluster".to_string());
        }
        if self.users == 0 {
            errs.push("need at least one user".to_string());
        }
        if self.realizations == 0 {
            errs.push("need at least one realization".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(invalid(errs.join("; ")))
        }
    }

    /// Mean of `log10(AS / 1 deg)`.
    pub fn lg_angle_spread_mean(&self) -> f64 {
        2.08 - 0.27 * self.carrier_ghz.log10()
    }

    pub fn rng(&self, user: usize, realization: usize) -> ChannelRng {
        stream_rng(self.seed, user, realization)
    }
}

/// Counter-based stream keyed by the master seed; the stream id packs the
/// realization and user indices.
pub fn stream_rng(seed: u64, user: usize, realization: usize) -> ChannelRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((realization as u64) << 32) | (user as u64 & 0xffff_ffff));
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    pub cluster: usize,
    pub ray: usize,
    /// Ray power `P_{n,m}`; all powers of a path set sum to one.
    pub power: f64,
    pub alpha: Complex64,
    /// Angle of arrival/departure in `(-pi, pi]`.
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub power: f64,
    /// Cluster centre angle, radians (not wrapped).
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSet {
    pub paths: Vec<Path>,
    pub clusters: Vec<Cluster>,
    pub angle_spread_deg: f64,
}

impl PathSet {
    /// A path set with no cluster metadata (e.g. rebuilt from a dump).
    pub fn from_paths(paths: Vec<Path>) -> Self {
        Self {
            paths,
            ..Self::default()
        }
    }

    pub fn single(alpha: Complex64, phi: f64) -> Self {
        Self::from_paths(vec![Path {
            cluster: 0,
            ray: 0,
            power: alpha.norm_sqr(),
            alpha,
            phi,
        }])
    }

    pub fn total_power(&self) -> f64 {
        self.paths.iter().map(|p| p.alpha.norm_sqr()).sum()
    }
}

/// First draw of every path set: `lgAS ~ N(2.08 - 0.27 log10 fc, 0.11^2)`.
pub fn sample_lg_angle_spread(params: &ScenarioParams, rng: &mut ChannelRng) -> f64 {
    Normal::new(params.lg_angle_spread_mean(), 0.11)
        .expect("positive std")
        .sample(rng)
}

/// Draws one user's clustered path set.
pub fn sample_paths(params: &ScenarioParams, rng: &mut ChannelRng) -> PathSet {
    let nc = params.clusters;
    let nr = params.rays_per_cluster;

    let lg_as = sample_lg_angle_spread(params, rng);
    let spread = 10f64.powf(lg_as);

    let shadow = Normal::new(0.0, CLUSTER_SHADOWING_DB).expect("positive std");
    let raw_cluster: Vec<f64> = (0..nc)
        .map(|_| 10f64.powf(-shadow.sample(rng) / 10.0))
        .collect();
    let cluster_total: f64 = raw_cluster.iter().sum();
    let cluster_power: Vec<f64> = raw_cluster.iter().map(|p| p / cluster_total).collect();

    let mut ray_power = vec![vec![0.0; nr]; nc];
    for (n, rays) in ray_power.iter_mut().enumerate() {
        let raw: Vec<f64> = (0..nr)
            .map(|_| {
                let x: f64 = rng.random_range(-2.0..2.0);
                (-(2f64.sqrt()) * x.abs() / 15.0).exp()
            })
            .collect();
        let total: f64 = raw.iter().sum();
        for (slot, r) in rays.iter_mut().zip(raw) {
            *slot = cluster_power[n] * r / total;
        }
    }

    let mut phases = vec![vec![0.0; nr]; nc];
    for row in phases.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.random_range(-PI..PI);
        }
    }

    let offset = Normal::new(0.0, spread / 7.0).expect("positive std");
    let signs_offsets: Vec<(f64, f64)> = (0..nc)
        .map(|_| {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            (sign, offset.sample(rng))
        })
        .collect();
    let los_deg: f64 = rng.random_range(-90.0..90.0);
    let max_power = cluster_power.iter().copied().fold(f64::MIN, f64::max);
    let cluster_deg: Vec<f64> = (0..nc)
        .map(|n| {
            let (sign, y) = signs_offsets[n];
            let lnp = -(cluster_power[n] / max_power).ln();
            sign * 2.0 * (spread / 1.4) * lnp.max(0.0).sqrt() / 1.289 + y + los_deg
        })
        .collect();

    let ray_offsets: Vec<f64> = (0..nr).map(|_| rng.random_range(-2.0..2.0)).collect();

    let mut paths = Vec::with_capacity(nc * nr);
    for n in 0..nc {
        for m in 0..nr {
            let power = ray_power[n][m];
            let phi_deg = cluster_deg[n] + RAY_OFFSET_SCALE_DEG * ray_offsets[m];
            paths.push(Path {
                cluster: n,
                ray: m,
                power,
                alpha: Complex64::from_polar(power.sqrt(), phases[n][m]),
                phi: wrap_angle(phi_deg.to_radians()),
            });
        }
    }
    PathSet {
        paths,
        clusters: (0..nc)
            .map(|n| Cluster {
                power: cluster_power[n],
                angle: cluster_deg[n].to_radians(),
            })
            .collect(),
        angle_spread_deg: spread,
    }
}

/// Effective channel at the `N` sULA ports: `sum_l alpha_l f(phi_l)`.
pub fn effective_raa_channel(paths: &PathSet, raa: &RaaConfig, pattern: &ElementPattern) -> CVector {
    let mut h = CVector::zeros(raa.ray_count());
    for p in &paths.paths {
        for (pos, &eta) in raa.orientations().iter().enumerate() {
            h[pos] += p.alpha
                * sula_output(p.phi, eta, raa.elements(), raa.hub_radius(), pattern);
        }
    }
    h
}

/// Physical channel at an `m`-element ULA with element gain per path.
pub fn ula_channel(paths: &PathSet, m: usize, pattern: &ElementPattern) -> CVector {
    let mut h = CVector::zeros(m);
    for p in &paths.paths {
        let scale = p.alpha * pattern.amplitude(p.phi);
        for (slot, a) in h.iter_mut().zip(ula_steering(p.phi, m)) {
            *slot += scale * a;
        }
    }
    h
}

/// Per-element channel of all `N M` RAA elements, stacked ray by ray
/// (`vec` of the `M x N` response matrix).
pub fn downlink_actual_channel(
    paths: &PathSet,
    raa: &RaaConfig,
    pattern: &ElementPattern,
) -> CVector {
    let m = raa.elements();
    let mut h = CVector::zeros(raa.ray_count() * m);
    for p in &paths.paths {
        for (pos, &eta) in raa.orientations().iter().enumerate() {
            let delta = p.phi - eta;
            let s = delta.sin();
            let reference = p.alpha
                * Complex64::from_polar(pattern.amplitude(delta), 2.0 * PI * raa.hub_radius() * s);
            for i in 0..m {
                h[pos * m + i] += reference * Complex64::from_polar(1.0, PI * i as f64 * s);
            }
        }
    }
    h
}

/// Contracts a per-element channel with the uniform `1/sqrt(M)` power
/// splitter of every sULA.
pub fn splitter_contract(h_actual: &CVector, m: usize) -> CVector {
    assert_eq!(h_actual.len() % m, 0, "channel length must be a multiple of M");
    let n = h_actual.len() / m;
    let scale = 1.0 / (m as f64).sqrt();
    CVector::from_iterator(
        n,
        (0..n).map(|pos| h_actual.rows(pos * m, m).sum() * scale),
    )
}

/// Noise at one sULA port: the sum of `m` independent `CN(0, sigma2)`
/// element noises.
pub fn sula_port_noise(rng: &mut ChannelRng, m: usize, sigma2: f64) -> Complex64 {
    let std = (0.5 * sigma2).sqrt();
    let normal = Normal::new(0.0, std).expect("non-negative std");
    (0..m)
        .map(|_| Complex64::new(normal.sample(rng), normal.sample(rng)))
        .sum()
}

/// One user's path set and effective channels.
#[derive(Debug, Clone, PartialEq)]
pub struct UserChannel {
    pub paths: PathSet,
    pub h_raa: CVector,
    pub h_ula: CVector,
}

/// All users' channels for one Monte-Carlo realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub users: Vec<UserChannel>,
    /// Per-element noise variance.
    pub noise_sigma2: f64,
    /// Noise variance at a sULA port (or DFT codeword output).
    pub noise_sigma0_2: f64,
}

impl ChannelRealization {
    /// Draws every user's paths for `realization` and builds both channels.
    pub fn generate(
        params: &ScenarioParams,
        realization: usize,
        raa: &RaaConfig,
        raa_pattern: &ElementPattern,
        ula_pattern: &ElementPattern,
    ) -> Self {
        let users = (0..params.users)
            .map(|k| {
                let paths = sample_paths(params, &mut params.rng(k, realization));
                Self::user(paths, raa, raa_pattern, ula_pattern)
            })
            .collect();
        Self::with_users(users, raa.elements(), 1.0)
    }

    pub fn user(
        paths: PathSet,
        raa: &RaaConfig,
        raa_pattern: &ElementPattern,
        ula_pattern: &ElementPattern,
    ) -> UserChannel {
        UserChannel {
            h_raa: effective_raa_channel(&paths, raa, raa_pattern),
            h_ula: ula_channel(&paths, raa.elements(), ula_pattern),
            paths,
        }
    }

    pub fn with_users(users: Vec<UserChannel>, m: usize, sigma2: f64) -> Self {
        Self {
            users,
            noise_sigma2: sigma2,
            noise_sigma0_2: m as f64 * sigma2,
        }
    }
}
