//! Hardware cost of an RAA against a phase-shifter ULA.

use raa::array::{Codebook, RaaConfig};
use raa::cost::{cost_raa, cost_ula, CostParams};
use std::f64::consts::PI;

fn main() -> raa::Result<()> {
    for (m, n_rf) in [(128, 16), (128, 8), (64, 8), (16, 4)] {
        let n = RaaConfig::design(m, 0.499 * PI, 0.0)?.beam_count();
        let p = CostParams::reference(m, n, n_rf);
        p.validate()?;
        let (raa, ula) = (cost_raa(&p), cost_ula(&p));
        println!(
            "M = {m:3}, N = {n:3}, N_RF = {n_rf:2}: RAA {raa:10.2}  ULA {ula:10.2}  ratio {:.2}%",
            100.0 * raa / ula
        );
    }
    Ok(())
}
