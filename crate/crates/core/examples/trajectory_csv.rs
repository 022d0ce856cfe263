//! Writes one trajectory as CSV, from a JSON config when given.
//!
//! cargo run --release --example trajectory_csv [config.json] > traj.csv

use trio_formation::config::RunConfig;
use trio_formation::simulate;

fn main() -> trio_formation::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(p) => RunConfig::load(p.as_ref())?,
        None => RunConfig::default(),
    };
    let (traj, out) = simulate(&cfg.initial_configuration(), &cfg.spec()?, &cfg.gains()?, &cfg.sim_params());
    traj.write_csv(std::io::stdout().lock())?;
    eprintln!("{} after {} steps", out.kind, out.steps);
    Ok(())
}
