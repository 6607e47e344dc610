use super::{dirichlet_kernel, Codebook};
use crate::error::{invalid, Result};
use crate::pattern::ElementPattern;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Geometry of a ray antenna array.
///
/// Rays are stored in ascending orientation; storage position `p` holds the
/// ray with signed index `p - (N-1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RaaConfig {
    elements: usize,
    orientations: Vec<f64>,
    hub_radius: f64,
    phi_max: f64,
}

impl RaaConfig {
    /// Deterministic parameter design for `m` elements per ray covering
    /// `[-phi_max, phi_max]`.
    ///
    /// Adjacent rays are spaced so that each ray's first null falls on its
    /// neighbour's peak; the hub radius is the minimum that keeps the first
    /// elements of adjacent rays half a wavelength apart, inflated by
    /// `hub_margin`.
    pub fn design(m: usize, phi_max: f64, hub_margin: f64) -> Result<Self> {
        if m < 2 {
            return Err(invalid(format!("elements per ray must be >= 2, got {m}")));
        }
        check_coverage(phi_max)?;
        if !(hub_margin >= 0.0 && hub_margin.is_finite()) {
            return Err(invalid(format!("hub margin must be >= 0, got {hub_margin}")));
        }
        let spacing = Self::ray_spacing(m);
        let half = (phi_max / spacing).floor() as i64;
        let orientations: Vec<f64> = (-half..=half).map(|n| n as f64 * spacing).collect();
        assert!(
            orientations.last().is_some_and(|&eta| eta <= phi_max),
            "outermost ray exceeds the coverage half-angle"
        );
        Ok(Self {
            elements: m,
            orientations,
            hub_radius: (1.0 + hub_margin) * Self::min_hub_radius(m),
            phi_max,
        })
    }

    /// An array with explicitly chosen orientations (odd count, ascending).
    pub fn with_orientations(
        m: usize,
        orientations: Vec<f64>,
        hub_radius: f64,
        phi_max: f64,
    ) -> Result<Self> {
        if m < 1 {
            return Err(invalid("elements per ray must be >= 1"));
        }
        check_coverage(phi_max)?;
        if orientations.len() % 2 == 0 {
            return Err(invalid(format!(
                "ray count must be odd, got {}",
                orientations.len()
            )));
        }
        if orientations.windows(2).any(|w| w[0] >= w[1])
            || orientations.iter().any(|eta| !eta.is_finite())
        {
            return Err(invalid("orientations must be finite and strictly ascending"));
        }
        if !(hub_radius >= 0.0 && hub_radius.is_finite()) {
            return Err(invalid(format!("hub radius must be >= 0, got {hub_radius}")));
        }
        Ok(Self {
            elements: m,
            orientations,
            hub_radius,
            phi_max,
        })
    }

    /// Angular spacing between adjacent rays, `arcsin(2/M)`.
    pub fn ray_spacing(m: usize) -> f64 {
        (2.0 / m as f64).min(1.0).asin()
    }

    /// Smallest hub radius (wavelengths) that keeps adjacent first elements
    /// at least half a wavelength apart.
    pub fn min_hub_radius(m: usize) -> f64 {
        1.0 / (4.0 * (0.5 * Self::ray_spacing(m)).sin())
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn ray_count(&self) -> usize {
        self.orientations.len()
    }

    pub fn orientations(&self) -> &[f64] {
        &self.orientations
    }

    pub fn orientation(&self, pos: usize) -> f64 {
        self.orientations[pos]
    }

    /// Distance from the origin to the first element of every ray, in wavelengths.
    pub fn hub_radius(&self) -> f64 {
        self.hub_radius
    }

    pub fn phi_max(&self) -> f64 {
        self.phi_max
    }

    /// Output of every sULA port for a unit plane wave from `phi`.
    pub fn port_response(&self, phi: f64, pattern: &ElementPattern) -> PortResponse {
        PortResponse {
            values: (0..self.ray_count())
                .map(|pos| self.port_value(phi, pos, pattern))
                .collect(),
            angle: phi,
        }
    }

    pub fn port_value(&self, phi: f64, pos: usize, pattern: &ElementPattern) -> Complex64 {
        sula_output(
            phi,
            self.orientations[pos],
            self.elements,
            self.hub_radius,
            pattern,
        )
    }
}

fn check_coverage(phi_max: f64) -> Result<()> {
    if phi_max > 0.0 && phi_max < FRAC_PI_2 {
        Ok(())
    } else {
        Err(invalid(format!(
            "coverage half-angle must lie in (0, pi/2), got {phi_max}"
        )))
    }
}

impl Codebook for RaaConfig {
    fn elements(&self) -> usize {
        self.elements
    }

    fn phi_max(&self) -> f64 {
        self.phi_max
    }

    fn beam_count(&self) -> usize {
        self.ray_count()
    }

    fn beam_response(&self, phi: f64, pos: usize, pattern: &ElementPattern) -> Complex64 {
        self.port_value(phi, pos, pattern)
    }

    /// Valid for designed (uniformly spaced) orientations only.
    fn closed_form_best(&self, phi: f64) -> i64 {
        let spacing = Self::ray_spacing(self.elements);
        (((2.0 * phi / spacing).floor() + 1.0) / 2.0).floor() as i64
    }

    fn edge_cell_fraction(&self) -> f64 {
        let outer = *self.orientations.last().expect("non-empty array");
        (self.phi_max - outer) / Self::ray_spacing(self.elements)
    }
}

/// Complex outputs of the `N` sULA ports for one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PortResponse {
    pub values: Vec<Complex64>,
    pub angle: f64,
}

/// Per-element response of a sULA oriented at `eta` (length `m`).
pub fn sula_steering(phi: f64, eta: f64, m: usize) -> Vec<Complex64> {
    let s = (phi - eta).sin();
    (0..m)
        .map(|i| Complex64::from_polar(1.0, PI * i as f64 * s))
        .collect()
}

/// Summed output of one sULA: coherent array factor, first-element phase
/// offset at the hub radius, and the element pattern amplitude.
pub fn sula_output(
    phi: f64,
    eta: f64,
    m: usize,
    hub_radius: f64,
    pattern: &ElementPattern,
) -> Complex64 {
    let delta = phi - eta;
    let s = delta.sin();
    let array = m as f64 * dirichlet_kernel(m, s);
    let reference = Complex64::from_polar(pattern.amplitude(delta), 2.0 * PI * hub_radius * s);
    array * reference
}

/// Null-to-null mainlobe width of every sULA, `2 arcsin(2/M)`.
pub fn raa_beamwidth(m: usize) -> Result<f64> {
    if m < 3 {
        return Err(invalid(format!(
            "mainlobe beamwidth needs M >= 3 so both first nulls are visible, got {m}"
        )));
    }
    Ok(2.0 * RaaConfig::ray_spacing(m))
}

/// All zeros of a sULA beam pattern inside `[-phi_max, phi_max]`, ascending.
///
/// A zero occurs where `sin(phi - eta) = 2p/M` for a non-zero integer `p`.
/// Both branches of the arcsine are included, so directions past the
/// turning point of `sin(phi - eta)` are reported too.
pub fn raa_nulls(eta: f64, m: usize, phi_max: f64) -> Vec<f64> {
    let mf = m as f64;
    let pmax = (mf / 2.0).floor() as i64;
    let mut nulls: Vec<f64> = Vec::new();
    for p in (-pmax..=pmax).filter(|&p| p != 0) {
        let x = (2.0 * p as f64 / mf).clamp(-1.0, 1.0);
        let d1 = x.asin();
        let d2 = PI - d1;
        for delta in [d1, d2, d2 - 2.0 * PI] {
            let phi = eta + delta;
            if phi.abs() <= phi_max && !nulls.iter().any(|&v| (v - phi).abs() < 1e-12) {
                nulls.push(phi);
            }
        }
    }
    nulls.sort_by(f64::total_cmp);
    nulls
}
