//! Draws one multipath realization and builds the RAA and ULA channels.

use raa::array::RaaConfig;
use raa::channel::{effective_raa_channel, sample_paths, ula_channel, ScenarioParams};
use raa::pattern::ElementPattern;
use std::f64::consts::PI;

fn main() -> raa::Result<()> {
    let params = ScenarioParams { seed: 7, ..ScenarioParams::default() };
    params.validate()?;
    let set = sample_paths(&params, &mut params.rng(0, 0));
    println!(
        "{} paths in {} clusters, angle spread {:.1} deg, total power {:.6}",
        set.paths.len(),
        set.clusters.len(),
        set.angle_spread_deg,
        set.total_power()
    );
    for (n, c) in set.clusters.iter().enumerate() {
        println!("  cluster {n:2}: power {:.4}, angle {:7.2} deg", c.power, c.angle.to_degrees());
    }

    let m = 16;
    let raa = RaaConfig::design(m, 0.499 * PI, 0.0)?;
    let h = effective_raa_channel(&set, &raa, &ElementPattern::raa_directional());
    let hu = ula_channel(&set, m, &ElementPattern::ula_directional());
    println!("\nRAA port channel ({} ports), strongest five:", h.len());
    let mut ports: Vec<usize> = (0..h.len()).collect();
    ports.sort_by(|&a, &b| h[b].norm().total_cmp(&h[a].norm()));
    for &p in &ports[..5] {
        println!("  ray at {:7.2} deg: |h| = {:.4}", raa.orientation(p).to_degrees(), h[p].norm());
    }
    println!("ULA element channel energy {:.4}, RAA port energy {:.4}", hu.norm_squared(), h.norm_squared());
    Ok(())
}
