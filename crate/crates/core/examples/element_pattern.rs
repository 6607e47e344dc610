//! 3GPP element patterns, total power and the coverage sufficiency check.

use raa::array::{RaaConfig, UlaConfig};
use raa::pattern::{
    exact_peak_gain_for_power, linear_to_db, peak_gain_from_power, raa_pattern_sufficient,
    ula_pattern_sufficient, verify_coverage, DesignThreshold, ElementPattern,
};
use std::f64::consts::PI;

fn main() -> raa::Result<()> {
    let ula = ElementPattern::ula_directional();
    let raa = ElementPattern::raa_directional();
    let g_sum = ula.total_power_gain();
    println!("ULA element: G0 = 0 dB, beamwidth pi, G_sum = {g_sum:.4}");
    let approx = peak_gain_from_power(g_sum, 0.3 * PI);
    let exact = exact_peak_gain_for_power(g_sum, &raa);
    println!(
        "RAA element with the same G_sum and beamwidth 0.3 pi: approx {:.4} dB, exact {:.4} dB",
        linear_to_db(approx),
        linear_to_db(exact)
    );

    println!("\nzeta_deg  G_raa_dB  G_ula_dB");
    for deg in (0..=180).step_by(15) {
        let z = (deg as f64).to_radians();
        println!("{deg:8} {:9.3} {:9.3}", linear_to_db(raa.gain(z)?), linear_to_db(ula.gain(z)?));
    }

    let m = 8;
    let phi_max = 0.499 * PI;
    let threshold = DesignThreshold::boundary(&raa, m);
    let array = RaaConfig::design(m, phi_max, 0.0)?;
    let report = verify_coverage(&array, &raa, &threshold, 10_001)?;
    println!(
        "\nRAA M = {m}: sufficient = {}, min best-ray gain {:.4} at {:.2} deg, eps0 {:.4}",
        raa_pattern_sufficient(&raa, m, &threshold),
        report.min_gain,
        report.argmin.to_degrees(),
        report.epsilon0
    );
    let ula_array = UlaConfig::dft(m, 0.25 * PI)?;
    let threshold = DesignThreshold::boundary(&ula, m);
    let report = verify_coverage(&ula_array, &ula, &threshold, 10_001)?;
    println!(
        "ULA M = {m}, 45 deg sector: sufficient = {}, min gain {:.4}, eps0 {:.4}",
        ula_pattern_sufficient(&ula, m, &threshold, 0.25 * PI),
        report.min_gain,
        report.epsilon0
    );
    Ok(())
}
