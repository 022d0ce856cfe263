//! Gap of the first rest equation on the feasible grid, per angle.
//!
//! cargo run --release --example fig1_gap_grid [out.csv]

use trio_formation::sweep::{fig1_default, fig1_minima, write_fig1_csv};

fn main() -> trio_formation::Result<()> {
    let rows = fig1_default();
    for m in fig1_minima(&rows) {
        println!("theta = {:>4} deg: {:>5} feasible points, min gap {:.4e}", m.theta_deg, m.feasible, m.min_gap);
    }
    if let Some(path) = std::env::args().nth(1) {
        write_fig1_csv(&rows, std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
