//! Sizes an RAA for a coverage sector and compares it with a DFT-codebook ULA.

use raa::array::{raa_beamwidth, Codebook, RaaConfig, UlaConfig};
use std::f64::consts::PI;

fn main() -> raa::Result<()> {
    let phi_max = 0.499 * PI;
    for m in [6, 8, 16, 128] {
        let raa = RaaConfig::design(m, phi_max, 0.0)?;
        let ula = UlaConfig::dft(m, phi_max)?;
        println!(
            "M = {m:3}: N = {:3} rays, spacing {:.5} rad, beamwidth {:.5} rad, hub radius {:.3} wl, ULA codewords {}",
            raa.ray_count(),
            RaaConfig::ray_spacing(m),
            raa_beamwidth(m)?,
            raa.hub_radius(),
            ula.codeword_count(),
        );
    }

    let raa = RaaConfig::design(8, phi_max, 0.0)?;
    println!("\nM = 8 orientations (deg):");
    for pos in 0..raa.ray_count() {
        println!("  ray {:+3}: {:8.3}", raa.beam_index(pos), raa.orientation(pos).to_degrees());
    }
    Ok(())
}
