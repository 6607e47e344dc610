use super::{dirichlet_kernel, Codebook};
use crate::error::{invalid, Result};
use crate::pattern::ElementPattern;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// `M`-element half-wavelength ULA steered by a DFT codebook.
///
/// Codeword `n` points at `sin(phi_n) = 2n/M`, for `|n| <= (N'-1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct UlaConfig {
    elements: usize,
    sines: Vec<f64>,
    phi_max: f64,
}

impl UlaConfig {
    pub fn dft(m: usize, phi_max: f64) -> Result<Self> {
        if m < 2 {
            return Err(invalid(format!("ULA needs at least 2 elements, got {m}")));
        }
        if !(phi_max > 0.0 && phi_max < FRAC_PI_2) {
            return Err(invalid(format!(
                "coverage half-angle must lie in (0, pi/2), got {phi_max}"
            )));
        }
        let mf = m as f64;
        let half = (phi_max.sin() / (2.0 / mf)).floor() as i64;
        let sines = (-half..=half).map(|n| 2.0 * n as f64 / mf).collect();
        Ok(Self {
            elements: m,
            sines,
            phi_max,
        })
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn codeword_count(&self) -> usize {
        self.sines.len()
    }

    pub fn phi_max(&self) -> f64 {
        self.phi_max
    }

    pub fn codeword_sine(&self, pos: usize) -> f64 {
        self.sines[pos]
    }

    pub fn codeword_angle(&self, pos: usize) -> f64 {
        self.sines[pos].asin()
    }

    pub fn codeword_angles(&self) -> Vec<f64> {
        self.sines.iter().map(|s| s.asin()).collect()
    }

    /// Codeword vector `c(phi_n)` (length `M`, squared norm `M`).
    pub fn codeword(&self, pos: usize) -> Vec<Complex64> {
        phasor_ramp(self.elements, self.sines[pos])
    }

    /// Codeword-domain channel `C^H h`, one entry per codeword.
    pub fn project(&self, h: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(h.len(), self.elements, "ULA channel length");
        self.sines
            .iter()
            .map(|&s| {
                h.iter()
                    .enumerate()
                    .map(|(i, v)| Complex64::from_polar(1.0, -PI * i as f64 * s) * v)
                    .sum()
            })
            .collect()
    }
}

impl Codebook for UlaConfig {
    fn elements(&self) -> usize {
        self.elements
    }

    fn phi_max(&self) -> f64 {
        self.phi_max
    }

    fn beam_count(&self) -> usize {
        self.sines.len()
    }

    fn beam_response(&self, phi: f64, pos: usize, pattern: &ElementPattern) -> Complex64 {
        beam_from_sine(phi, self.sines[pos], self.elements, pattern)
    }

    fn closed_form_best(&self, phi: f64) -> i64 {
        let m = self.elements as f64;
        (((m * phi.sin()).floor() + 1.0) / 2.0).floor() as i64
    }

    fn edge_cell_fraction(&self) -> f64 {
        let outer = *self.sines.last().expect("non-empty codebook");
        (self.phi_max.sin() - outer) / (2.0 / self.elements as f64)
    }
}

fn phasor_ramp(m: usize, s: f64) -> Vec<Complex64> {
    (0..m)
        .map(|i| Complex64::from_polar(1.0, PI * i as f64 * s))
        .collect()
}

/// ULA array response `a_ULA(phi)`.
pub fn ula_steering(phi: f64, m: usize) -> Vec<Complex64> {
    phasor_ramp(m, phi.sin())
}

/// Overall ULA beam pattern for a codeword pointing at `phi_n`.
pub fn ula_beam_pattern(phi: f64, phi_n: f64, m: usize, pattern: &ElementPattern) -> Complex64 {
    beam_from_sine(phi, phi_n.sin(), m, pattern)
}

fn beam_from_sine(phi: f64, s_n: f64, m: usize, pattern: &ElementPattern) -> Complex64 {
    pattern.amplitude(phi) * m as f64 * dirichlet_kernel(m, phi.sin() - s_n)
}

/// Exact null-to-null mainlobe width of codeword `phi_n`.
pub fn ula_beamwidth(phi_n: f64, m: usize) -> Result<f64> {
    let s = phi_n.sin();
    let step = 2.0 / m as f64;
    if s.abs() + step > 1.0 {
        return Err(invalid(format!(
            "first null of the codeword at {phi_n} rad falls outside visible space for M={m}"
        )));
    }
    Ok((s + step).asin() - (s - step).asin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::raa_beamwidth;

    #[test]
    fn codebook_sizes() {
        assert_eq!(UlaConfig::dft(6, 0.499 * PI).unwrap().codeword_count(), 5);
        // The floor formula gives 127 for the default scenario.
        assert_eq!(UlaConfig::dft(128, 0.499 * PI).unwrap().codeword_count(), 127);
        let ula = UlaConfig::dft(8, 0.499 * PI).unwrap();
        assert_eq!(ula.codeword_angle(ula.beam_position(0).unwrap()), 0.0);
        for pos in 0..ula.codeword_count() {
            assert!(ula.codeword_sine(pos).abs() <= (0.499 * PI).sin());
        }
    }

    #[test]
    fn beam_peak_and_null() {
        let pattern = ElementPattern::ula_directional();
        let phi_n = 0.5f64.asin();
        let peak = ula_beam_pattern(phi_n, phi_n, 8, &pattern);
        assert!((peak.norm() - 8.0 * pattern.gain(phi_n).unwrap().sqrt()).abs() < 1e-12);
        let null = ula_beam_pattern(0.75f64.asin(), phi_n, 8, &pattern);
        assert!(null.norm() < 1e-13);
    }

    #[test]
    fn beam_matches_codeword_inner_product() {
        let iso = ElementPattern::unit();
        let c = phasor_ramp(8, 0.0);
        let a = ula_steering(0.1, 8);
        let brute: Complex64 = c.iter().zip(&a).map(|(c, a)| c.conj() * a).sum();
        let v = ula_beam_pattern(0.1, 0.0, 8, &iso);
        assert!((v - brute).norm() < 1e-12);
    }

    #[test]
    fn beamwidth_exact_expression() {
        assert!((ula_beamwidth(0.0, 8).unwrap() - raa_beamwidth(8).unwrap()).abs() < 1e-15);
        let direct = 0.75f64.asin() - 0.25f64.asin();
        assert!((ula_beamwidth(0.5f64.asin(), 8).unwrap() - direct).abs() < 1e-15);
        assert!(ula_beamwidth(0.5, 16).unwrap() > ula_beamwidth(0.25, 16).unwrap());
        assert!(ula_beamwidth(0.8f64.asin(), 8).is_err());
    }

    #[test]
    fn projection_is_conjugate_codeword_sum() {
        let ula = UlaConfig::dft(8, 0.45 * PI).unwrap();
        let h = ula_steering(0.2, 8);
        let p = ula.project(&h);
        for pos in 0..ula.codeword_count() {
            let c = ula.codeword(pos);
            let brute: Complex64 = c.iter().zip(&h).map(|(c, h)| c.conj() * h).sum();
            assert!((p[pos] - brute).norm() < 1e-12);
        }
    }
}
