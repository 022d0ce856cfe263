//! Gain table across legs, angles and area ratios.
//!
//! cargo run --example gain_certificates

use trio_formation::analysis::gain_certificate;
use trio_formation::{FormationSpec, Gains};

fn main() -> trio_formation::Result<()> {
    println!("{:>5} {:>6} {:>6}  {:<26} {:>9} {:>9}  ok", "ell", "theta", "R_Ad", "clause", "lower", "upper");
    for ell in [3.0, 10.0] {
        for theta in [30.0, 60.0, 90.0, 150.0] {
            for r_ad in [0.5, 4.0] {
                let spec = FormationSpec::isosceles_deg(ell, theta)?;
                let c = gain_certificate(&spec, &Gains::with_area_ratio(3.0, 48.0, r_ad)?)?;
                let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
                println!(
                    "{ell:>5} {theta:>6} {r_ad:>6}  {:<26} {:>9} {:>9}  {}",
                    c.clause.tag(),
                    fmt(c.required_rad_lower),
                    fmt(c.required_rad_upper),
                    c.satisfied
                );
            }
        }
    }
    let c = gain_certificate(&FormationSpec::isosceles_deg(10.0, 60.0)?, &Gains::new(3.0, 48.0, 3.0)?)?;
    println!("\ndefault gains: {}", c.note.unwrap_or_default());
    Ok(())
}
