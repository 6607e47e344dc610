//! Multi-user uplink: greedy against exhaustive ray selection with MMSE.

use raa::array::RaaConfig;
use raa::channel::{effective_raa_channel, sample_paths, ScenarioParams};
use raa::pattern::{db_to_linear, ElementPattern};
use raa::selection::DEFAULT_ENUMERATION_CAP;
use raa::uplink::Uplink;
use std::f64::consts::PI;

fn main() -> raa::Result<()> {
    let m = 6;
    let raa = RaaConfig::design(m, 0.499 * PI, 0.0)?;
    let pattern = ElementPattern::raa_directional();
    let params = ScenarioParams { users: 3, seed: 11, ..ScenarioParams::default() };
    let h: Vec<_> = (0..3)
        .map(|k| effective_raa_channel(&sample_paths(&params, &mut params.rng(k, 0)), &raa, &pattern))
        .collect();
    println!("snr_db  greedy  exhaustive  mrc(greedy rays)");
    for snr in [-10.0, 0.0, 10.0, 20.0] {
        let up = Uplink::new(h.clone(), m, db_to_linear(snr))?;
        let g = up.greedy(3)?;
        let e = up.exhaustive(3, DEFAULT_ENUMERATION_CAP)?;
        println!(
            "{snr:6} {:7.3} {:11.3} {:17.3}   {:?} vs {:?}",
            g.sum_rate,
            e.sum_rate,
            up.mrc_sum_rate(&g.selection)?,
            g.selection.omega(),
            e.selection.omega()
        );
    }
    Ok(())
}
