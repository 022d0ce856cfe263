//! Unequal sides 10 and 15 at 60 degrees: a small area gain still admits
//! moving shapes, a larger one does not.
//!
//! cargo run --release --example general_triangle [n_seeds]

use trio_formation::sweep::general_triangle_experiment;

fn main() -> trio_formation::Result<()> {
    let n_seeds = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let result = general_triangle_experiment(10.0, 15.0, 60.0, &[0.2, 1.0], n_seeds, 0)?;
    for c in &result.cells {
        println!("R_Ad {:>4}: {:?}", c.cell.r_ad, c.tally);
    }
    let mut csv = Vec::new();
    result.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv).lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}
