//! Antenna element patterns and the coverage design checks built on them.
//!
//! The directional model is the 3GPP parabolic-in-dB pattern with a
//! front-to-back floor. [`total_power_gain`](ElementPattern::total_power_gain)
//! integrates a pattern numerically; [`peak_gain_from_power`] is the
//! Gaussian-integral approximation that sizes the peak gain of a pattern with
//! a given 3 dB beamwidth and total power.

use crate::array::{best_beam_unchecked, dirichlet_magnitude, Codebook, RaaConfig};
use crate::error::{invalid, Result};
use crate::quad;
use std::f64::consts::PI;

/// Peak gain of the directional RAA element, dB.
pub const RAA_PEAK_GAIN_DB: f64 = 5.1335;
/// 3 dB beamwidth of the directional RAA element, radians.
pub const RAA_BEAMWIDTH_3DB: f64 = 0.3 * PI;
/// Peak gain of the directional ULA element, dB.
pub const ULA_PEAK_GAIN_DB: f64 = 0.0;
/// 3 dB beamwidth of the directional ULA element, radians.
pub const ULA_BEAMWIDTH_3DB: f64 = PI;
/// Isotropic element gain with the same total power as the directional ones, dB.
pub const ISOTROPIC_GAIN_DB: f64 = -2.816;
/// Default front-to-back attenuation, dB.
pub const DEFAULT_FRONT_TO_BACK_DB: f64 = 30.0;
/// Coefficient of the peak-gain approximation, `sqrt(pi/a) erf(sqrt(2.5 a))`
/// with `a = 1.2 ln 10`, rounded as commonly quoted.
pub const POWER_BEAMWIDTH_FACTOR: f64 = 1.066;

const QUAD_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatternShape {
    /// `G(z) = G0 * 10^(-min(12 (z/beamwidth)^2, front_to_back)/10)`.
    ThreeGpp {
        beamwidth_3db: f64,
        front_to_back_db: f64,
    },
    Isotropic,
}

/// Power gain of a single antenna element versus offset angle from its
/// boresight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementPattern {
    shape: PatternShape,
    peak_gain: f64,
    zeta_max: f64,
}

impl ElementPattern {
    pub fn three_gpp(peak_gain_db: f64, beamwidth_3db: f64) -> Result<Self> {
        if !peak_gain_db.is_finite() {
            return Err(invalid("peak gain must be finite"));
        }
        if !(beamwidth_3db > 0.0 && beamwidth_3db.is_finite()) {
            return Err(invalid(format!(
                "3 dB beamwidth must be positive, got {beamwidth_3db}"
            )));
        }
        Ok(Self {
            shape: PatternShape::ThreeGpp {
                beamwidth_3db,
                front_to_back_db: DEFAULT_FRONT_TO_BACK_DB,
            },
            peak_gain: db_to_linear(peak_gain_db),
            zeta_max: PI,
        })
    }

    pub fn isotropic(gain_db: f64) -> Self {
        Self {
            shape: PatternShape::Isotropic,
            peak_gain: db_to_linear(gain_db),
            zeta_max: PI,
        }
    }

    /// `G(z) = 1` everywhere.
    pub fn unit() -> Self {
        Self::isotropic(0.0)
    }

    pub fn raa_directional() -> Self {
        Self::three_gpp(RAA_PEAK_GAIN_DB, RAA_BEAMWIDTH_3DB).expect("valid preset")
    }

    pub fn ula_directional() -> Self {
        Self::three_gpp(ULA_PEAK_GAIN_DB, ULA_BEAMWIDTH_3DB).expect("valid preset")
    }

    pub fn isotropic_reference() -> Self {
        Self::isotropic(ISOTROPIC_GAIN_DB)
    }

    /// Same shape with a linear peak gain instead of dB.
    pub fn with_peak_gain(mut self, peak_gain: f64) -> Result<Self> {
        if !(peak_gain > 0.0 && peak_gain.is_finite()) {
            return Err(invalid(format!("peak gain must be positive, got {peak_gain}")));
        }
        self.peak_gain = peak_gain;
        Ok(self)
    }

    pub fn with_front_to_back(mut self, db: f64) -> Result<Self> {
        if !(db >= 0.0 && db.is_finite()) {
            return Err(invalid(format!("front-to-back attenuation must be >= 0, got {db}")));
        }
        if let PatternShape::ThreeGpp {
            ref mut front_to_back_db,
            ..
        } = self.shape
        {
            *front_to_back_db = db;
        }
        Ok(self)
    }

    /// Integration half-range: `pi` in azimuth, `pi/2` in elevation.
    pub fn with_zeta_max(mut self, zeta_max: f64) -> Result<Self> {
        if !(zeta_max > 0.0 && zeta_max <= PI) {
            return Err(invalid(format!("zeta_max must lie in (0, pi], got {zeta_max}")));
        }
        self.zeta_max = zeta_max;
        Ok(self)
    }

    pub fn shape(&self) -> PatternShape {
        self.shape
    }

    /// `G(0)`, linear.
    pub fn peak_gain(&self) -> f64 {
        self.peak_gain
    }

    pub fn zeta_max(&self) -> f64 {
        self.zeta_max
    }

    pub fn beamwidth_3db(&self) -> Option<f64> {
        match self.shape {
            PatternShape::ThreeGpp { beamwidth_3db, .. } => Some(beamwidth_3db),
            PatternShape::Isotropic => None,
        }
    }

    /// Linear power gain at offset `zeta`; rejects `|zeta| > zeta_max`.
    pub fn gain(&self, zeta: f64) -> Result<f64> {
        if !(zeta.abs() <= self.zeta_max) {
            return Err(invalid(format!(
                "offset {zeta} outside +/-{} of the pattern",
                self.zeta_max
            )));
        }
        Ok(self.eval(zeta))
    }

    /// Gain for an arbitrary azimuth offset, wrapped into `(-pi, pi]`.
    pub fn response_gain(&self, zeta: f64) -> f64 {
        self.eval(wrap_angle(zeta))
    }

    /// `sqrt(G)` for an arbitrary azimuth offset.
    pub fn amplitude(&self, zeta: f64) -> f64 {
        self.response_gain(zeta).sqrt()
    }

    fn eval(&self, zeta: f64) -> f64 {
        match self.shape {
            PatternShape::Isotropic => self.peak_gain,
            PatternShape::ThreeGpp {
                beamwidth_3db,
                front_to_back_db,
            } => {
                let r = zeta / beamwidth_3db;
                let atten = (12.0 * r * r).min(front_to_back_db);
                self.peak_gain * 10f64.powf(-atten / 10.0)
            }
        }
    }

    /// Gain at half the 3 dB beamwidth (the peak gain for isotropic elements).
    pub fn gain_at_half_beamwidth(&self) -> f64 {
        match self.beamwidth_3db() {
            Some(bw) => self.eval(0.5 * bw),
            None => self.peak_gain,
        }
    }

    /// Offset where the 3GPP parabola meets the front-to-back floor.
    pub fn floor_onset(&self) -> Option<f64> {
        match self.shape {
            PatternShape::ThreeGpp {
                beamwidth_3db,
                front_to_back_db,
            } => Some(beamwidth_3db * (front_to_back_db / 12.0).sqrt()),
            PatternShape::Isotropic => None,
        }
    }

    /// `G_sum = integral of G over [-zeta_max, zeta_max]`, by adaptive quadrature.
    pub fn total_power_gain(&self) -> f64 {
        match self.shape {
            PatternShape::Isotropic => 2.0 * self.zeta_max * self.peak_gain,
            PatternShape::ThreeGpp { .. } => {
                let onset = self.floor_onset().expect("3GPP pattern");
                quad::integrate(
                    |z| self.eval(z),
                    -self.zeta_max,
                    self.zeta_max,
                    &[-onset, 0.0, onset],
                    QUAD_REL_TOL,
                )
            }
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

/// Approximate peak gain of a 3GPP element with 3 dB beamwidth `beamwidth_3db`
/// and total power gain `g_sum`: `G(0) = G_sum / (1.066 * beamwidth)`.
pub fn peak_gain_from_power(g_sum: f64, beamwidth_3db: f64) -> f64 {
    g_sum / (POWER_BEAMWIDTH_FACTOR * beamwidth_3db)
}

/// Peak gain that makes a 3GPP pattern integrate exactly to `g_sum`.
pub fn exact_peak_gain_for_power(g_sum: f64, shape_of: &ElementPattern) -> f64 {
    let unit = shape_of
        .with_peak_gain(1.0)
        .expect("unit gain is valid")
        .total_power_gain();
    g_sum / unit
}

/// Per-element coverage threshold `epsilon` and the array-level `epsilon0 = M epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignThreshold {
    epsilon: f64,
    epsilon0: f64,
}

impl DesignThreshold {
    pub fn new(epsilon: f64, m: usize) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(invalid(format!("threshold must be >= 0, got {epsilon}")));
        }
        Ok(Self {
            epsilon,
            epsilon0: m as f64 * epsilon,
        })
    }

    /// `epsilon = sqrt(G(0)/2) |H_M(1/M)|`: the level that a pattern sits at
    /// when its half-beamwidth gain is exactly 3 dB down.
    pub fn boundary(pattern: &ElementPattern, m: usize) -> Self {
        let eps = (0.5 * pattern.peak_gain()).sqrt() * dirichlet_magnitude(m, 1.0 / m as f64);
        Self::new(eps, m).expect("non-negative")
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }
}

/// Sufficient pattern condition for an RAA with `m` elements per ray to keep
/// the best-ray gain above `epsilon0` everywhere in the coverage.
pub fn raa_pattern_sufficient(
    pattern: &ElementPattern,
    m: usize,
    threshold: &DesignThreshold,
) -> bool {
    let spacing = RaaConfig::ray_spacing(m);
    let h = dirichlet_magnitude(m, (0.5 * spacing).sin());
    let required = (threshold.epsilon() / h).powi(2);
    let wide_enough = pattern.beamwidth_3db().is_none_or(|bw| bw >= spacing);
    pattern.gain_at_half_beamwidth() >= required && wide_enough
}

/// Sufficient pattern condition for a DFT-codebook ULA.
pub fn ula_pattern_sufficient(
    pattern: &ElementPattern,
    m: usize,
    threshold: &DesignThreshold,
    phi_max: f64,
) -> bool {
    let h = dirichlet_magnitude(m, 1.0 / m as f64);
    let required = (threshold.epsilon() / h).powi(2);
    let wide_enough = pattern.beamwidth_3db().is_none_or(|bw| bw >= 2.0 * phi_max);
    pattern.gain_at_half_beamwidth() >= required && wide_enough
}

/// Result of a grid scan of the best-beam gain over the coverage range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    pub min_gain: f64,
    pub argmin: f64,
    pub epsilon0: f64,
}

impl CoverageReport {
    pub fn meets_threshold(&self) -> bool {
        self.min_gain >= self.epsilon0
    }
}

/// Evaluates the best-beam gain on `grid` evenly spaced directions spanning
/// `[-phi_max, phi_max]` and reports its minimum.
pub fn verify_coverage<C: Codebook + ?Sized>(
    codebook: &C,
    pattern: &ElementPattern,
    threshold: &DesignThreshold,
    grid: usize,
) -> Result<CoverageReport> {
    if grid < 1000 {
        return Err(invalid(format!("coverage grid must have >= 1000 points, got {grid}")));
    }
    let phi_max = codebook.phi_max();
    let step = 2.0 * phi_max / (grid - 1) as f64;
    let mut report = CoverageReport {
        min_gain: f64::INFINITY,
        argmin: 0.0,
        epsilon0: threshold.epsilon0(),
    };
    for i in 0..grid {
        let phi = (-phi_max + i as f64 * step).clamp(-phi_max, phi_max);
        let g = best_beam_unchecked(phi, codebook, pattern).gain;
        if g < report.min_gain {
            report.min_gain = g;
            report.argmin = phi;
        }
    }
    Ok(report)
}
