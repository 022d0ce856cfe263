//! One start, two area gains: a flipped moving shape at R_Ad = 0.5 and the
//! target triangle at R_Ad = 1.
//!
//! cargo run --release --example fig2_convergence

use trio_formation::simulate::{predicted_moving_velocity, verify_moving_velocity};
use trio_formation::sweep::sample_initial;
use trio_formation::{simulate, FormationSpec, Gains, SimParams};

fn main() -> trio_formation::Result<()> {
    let spec = FormationSpec::isosceles_deg(10.0, 60.0)?;
    let p0 = sample_initial(0, 14, 100.0, 1.0);
    println!("start {:?}", p0.to_array());
    for r_ad in [0.5, 1.0] {
        let gains = Gains::with_area_ratio(3.0, 48.0, r_ad)?;
        let (traj, out) = simulate(&p0, &spec, &gains, &SimParams::default());
        println!(
            "R_Ad = {r_ad}: {} at t = {:.2}, |e| = {:.2e}, A = {:.3}, {} samples",
            out.kind,
            out.t_end,
            out.final_error_norm,
            trio_formation::simulate::final_signed_area(&out),
            traj.len()
        );
        if let Ok(err) = verify_moving_velocity(&out, &spec, &gains) {
            let w = predicted_moving_velocity(&spec, &gains);
            println!("  velocity ({:.6}, {:.6}), predicted ({:.6}, {:.6}), |diff| = {err:.2e}",
                out.steady_velocity.x, out.steady_velocity.y, w.x, w.y);
        }
    }
    Ok(())
}
