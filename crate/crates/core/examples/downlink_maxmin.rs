//! Downlink max-min SINR by alternating precoding and ray selection.

use raa::array::RaaConfig;
use raa::channel::{effective_raa_channel, sample_paths, ScenarioParams};
use raa::downlink::{total_power, AlternatingOptions, DownlinkProblem};
use raa::pattern::{db_to_linear, linear_to_db, ElementPattern};
use std::f64::consts::PI;

fn main() -> raa::Result<()> {
    let m = 6;
    let raa = RaaConfig::design(m, 0.499 * PI, 0.0)?;
    let pattern = ElementPattern::raa_directional();
    let params = ScenarioParams { users: 3, seed: 5, ..ScenarioParams::default() };
    let h: Vec<_> = (0..3)
        .map(|k| effective_raa_channel(&sample_paths(&params, &mut params.rng(k, 0)), &raa, &pattern))
        .collect();
    let p_dl = db_to_linear(10.0);
    let problem = DownlinkProblem::new(h, 3, p_dl, 1.0, m)?;

    let start = problem.initial_selection();
    let ub = problem.gamma_upper_bound(&start);
    let (gamma, _) = problem.bisection(&start, 1e-6, None)?;
    println!(
        "energy-based rays {:?}: balanced SINR {:.3} dB (bound {:.3} dB)",
        start.omega(),
        linear_to_db(gamma),
        linear_to_db(ub)
    );

    let res = problem.alternating(AlternatingOptions::default())?;
    let trace: Vec<String> = res.trace.iter().map(|g| format!("{:.3}", linear_to_db(*g))).collect();
    println!("alternating: rays {:?}, trace (dB) {}", res.selection.omega(), trace.join(" -> "));
    let sinrs = problem.sinrs(&res.precoders, &res.selection)?;
    for (k, s) in sinrs.iter().enumerate() {
        println!("  user {k}: SINR {:.3} dB", linear_to_db(*s));
    }
    println!("  transmit power {:.4} of {:.4}", total_power(&res.precoders), p_dl);
    Ok(())
}
