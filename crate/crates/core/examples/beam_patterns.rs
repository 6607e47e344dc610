//! Prints |f(phi)| for a few RAA rays and ULA codewords, with their nulls.

use raa::array::{raa_nulls, ula_beam_pattern, ula_beamwidth, Codebook, RaaConfig, UlaConfig};
use raa::pattern::ElementPattern;
use std::f64::consts::PI;

fn main() -> raa::Result<()> {
    let m = 8;
    let phi_max = 0.499 * PI;
    let raa = RaaConfig::design(m, phi_max, 0.0)?;
    let ula = UlaConfig::dft(m, phi_max)?;
    let unit = ElementPattern::unit();

    let rays = [raa.beam_position(-2).unwrap(), raa.beam_position(0).unwrap(), raa.beam_position(2).unwrap()];
    let words = [ula.beam_position(-2).unwrap(), ula.beam_position(0).unwrap(), ula.beam_position(2).unwrap()];

    println!("phi_deg  raa[-2]  raa[0]  raa[2]  ula[-2]  ula[0]  ula[2]");
    for i in 0..=36 {
        let phi = -0.5 * PI + i as f64 * PI / 36.0;
        let phi = phi.clamp(-phi_max, phi_max);
        let r: Vec<f64> = rays.iter().map(|&p| raa.port_value(phi, p, &unit).norm()).collect();
        let u: Vec<f64> = words
            .iter()
            .map(|&p| ula_beam_pattern(phi, ula.codeword_angle(p), m, &unit).norm())
            .collect();
        println!(
            "{:7.1} {:7.3} {:7.3} {:7.3} {:8.3} {:7.3} {:7.3}",
            phi.to_degrees(), r[0], r[1], r[2], u[0], u[1], u[2]
        );
    }

    let eta = raa.orientation(rays[2]);
    let nulls: Vec<String> = raa_nulls(eta, m, PI)
        .iter()
        .map(|z| format!("{:.2}", z.to_degrees()))
        .collect();
    println!("\nnulls of ray +2 (deg): {}", nulls.join(" "));
    for &p in &words {
        let phi_n = ula.codeword_angle(p);
        println!(
            "ULA codeword at {:6.2} deg: null-to-null width {:.4} rad",
            phi_n.to_degrees(),
            ula_beamwidth(phi_n, m)?
        );
    }
    Ok(())
}
