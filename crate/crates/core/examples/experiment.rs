//! Runs a small experiment from an in-memory config and prints the CSV table.

use raa::experiment::{list_experiments, run_experiment, ExperimentConfig};

fn main() -> raa::Result<()> {
    for (name, what) in list_experiments() {
        eprintln!("{name:20} {what}");
    }
    let validated = ExperimentConfig::parse(
        "experiment = fig_dl_maxmin\nsnr_db = -10:10:10\nrealizations = 5\nseed = 2\n",
    )?;
    for line in &validated.provenance {
        eprintln!("{line}");
    }
    let table = run_experiment(&validated.config, None)?;
    print!("{}", table.to_csv());
    Ok(())
}
