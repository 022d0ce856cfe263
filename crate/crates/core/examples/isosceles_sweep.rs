//! Small Monte Carlo sweep over isosceles cells. Set TRIO_THREADS to cap threads.
//!
//! cargo run --release --example isosceles_sweep [n_seeds]

use trio_formation::sweep::{run_sweep, SweepPlan};

fn main() -> trio_formation::Result<()> {
    let n_seeds = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let plan = SweepPlan {
        ell_values: vec![3.0, 10.0],
        theta_values_deg: vec![30.0, 60.0, 120.0],
        rad_values: vec![0.5, 1.0, 4.0],
        include_bound_ratios: false,
        n_seeds,
        ..SweepPlan::default()
    };
    let result = run_sweep(&plan)?;
    let summary = result.summary(&plan);
    for c in &summary.cells {
        let cert = c.certificate.as_ref().map_or("-", |g| if g.satisfied { "met" } else { "not met" });
        println!(
            "ell {:>4} theta {:>5} R_Ad {:>4}: desired {:>3} moving {:>3} collision {:>3} undecided {:>3}  bound {cert}",
            c.cell.d12_star, c.cell.theta_deg, c.cell.r_ad, c.tally.desired, c.tally.moving, c.tally.collision, c.tally.undecided
        );
    }
    for w in summary.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
