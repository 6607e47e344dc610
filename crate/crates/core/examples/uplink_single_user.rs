//! Single-user uplink: pick the strongest rays and combine them with MRC.

use raa::array::RaaConfig;
use raa::channel::{effective_raa_channel, sample_paths, ScenarioParams};
use raa::pattern::{db_to_linear, linear_to_db, ElementPattern};
use raa::uplink::single_user_select_and_mrc;
use std::f64::consts::PI;

fn main() -> raa::Result<()> {
    let m = 128;
    let raa = RaaConfig::design(m, 0.499 * PI, 0.0)?;
    let pattern = ElementPattern::raa_directional();
    let params = ScenarioParams { users: 1, seed: 3, ..ScenarioParams::default() };
    let h = effective_raa_channel(&sample_paths(&params, &mut params.rng(0, 0)), &raa, &pattern);
    for n_rf in [1, 2, 4, 8, 16] {
        let res = single_user_select_and_mrc(&h, n_rf, db_to_linear(0.0), m)?;
        println!(
            "N_RF = {n_rf:2}: SNR {:6.2} dB, rays {:?}",
            linear_to_db(res.sinr[0]),
            res.selection.omega()
        );
    }
    Ok(())
}
