//! Positive roots of reduced cubics and the distance threshold.
//!
//! cargo run --example cubic_roots

use trio_formation::analysis::{cubic_f_roots, solve_reduced_cubic_positive, threshold_distance};

fn main() -> trio_formation::Result<()> {
    let r = solve_reduced_cubic_positive(-12.0, 16.0)?;
    println!("y^3 - 12y + 16: y_p1 = {:.12}, y_p2 = {:.12} (double root)", r.y_p1, r.y_p2);

    let r_bd = 16.0;
    let d_hat = threshold_distance(r_bd)?;
    println!("R_bd = {r_bd}: d_hat = {d_hat:.12}");
    for ell in [3.0, d_hat, 6.0, 10.0, 100.0] {
        match cubic_f_roots(ell, r_bd)? {
            Some(f) => println!("  ell = {ell:8.4}: r1 = {:.6}, r2 = {:.6}", f.r1, f.r2),
            None => println!("  ell = {ell:8.4}: no positive roots, no moving configuration"),
        }
    }
    Ok(())
}
