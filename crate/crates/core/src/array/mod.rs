//! Array responses for the ray antenna array and the DFT-codebook ULA.
//!
//! Both architectures expose their beams through [`Codebook`], so coverage
//! and best-beam searches are written once.

mod dirichlet;
mod raa;
mod ula;

pub use dirichlet::{dirichlet_kernel, dirichlet_magnitude};
pub use raa::{raa_beamwidth, raa_nulls, sula_output, sula_steering, PortResponse, RaaConfig};
pub use ula::{ula_beam_pattern, ula_beamwidth, ula_steering, UlaConfig};

use crate::error::{invalid, Result};
use crate::pattern::ElementPattern;
use num_complex::Complex64;

/// A finite set of fixed beams covering `[-phi_max, phi_max]`.
///
/// Beams are addressed by storage position `0..beam_count()`; the signed
/// index of a beam (symmetric about zero) is `beam_index(pos)`.
pub trait Codebook {
    /// Elements per beam (the array gain factor `M`).
    fn elements(&self) -> usize;
    fn phi_max(&self) -> f64;
    fn beam_count(&self) -> usize;

    fn beam_index(&self, pos: usize) -> i64 {
        pos as i64 - (self.beam_count() as i64 - 1) / 2
    }

    fn beam_position(&self, index: i64) -> Option<usize> {
        let pos = index + (self.beam_count() as i64 - 1) / 2;
        (pos >= 0 && (pos as usize) < self.beam_count()).then_some(pos as usize)
    }

    /// Complex response of beam `pos` to a unit plane wave from `phi`.
    fn beam_response(&self, phi: f64, pos: usize, pattern: &ElementPattern) -> Complex64;

    /// Signed beam index predicted by the piecewise closed form for the best
    /// beam at `phi`. May fall outside the codebook near the coverage edge.
    fn closed_form_best(&self, phi: f64) -> i64;

    /// Half-width of the outermost cell, in the codebook's native spacing
    /// unit (fraction of one beam spacing). The best-beam worst case sits at
    /// half a spacing when this is at most `0.5`.
    fn edge_cell_fraction(&self) -> f64;
}

/// Best beam for one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestBeam {
    pub gain: f64,
    pub index: i64,
    pub position: usize,
}

/// Maximum beamforming gain over all beams at `phi` and the beam attaining it.
///
/// Exact ties resolve to the lowest index.
pub fn max_gain_profile<C: Codebook + ?Sized>(
    phi: f64,
    codebook: &C,
    pattern: &ElementPattern,
) -> Result<BestBeam> {
    if !phi.is_finite() || phi.abs() > codebook.phi_max() {
        return Err(invalid(format!(
            "direction {phi} outside coverage +/-{}",
            codebook.phi_max()
        )));
    }
    Ok(best_beam_unchecked(phi, codebook, pattern))
}

pub(crate) fn best_beam_unchecked<C: Codebook + ?Sized>(
    phi: f64,
    codebook: &C,
    pattern: &ElementPattern,
) -> BestBeam {
    let mut best = BestBeam {
        gain: f64::NEG_INFINITY,
        index: 0,
        position: 0,
    };
    for pos in 0..codebook.beam_count() {
        let g = codebook.beam_response(phi, pos, pattern).norm();
        if g > best.gain {
            best = BestBeam {
                gain: g,
                index: codebook.beam_index(pos),
                position: pos,
            };
        }
    }
    best
}
