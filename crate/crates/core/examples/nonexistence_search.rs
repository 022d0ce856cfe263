//! Grid-and-Newton search for undesired rest shapes and moving shapes.
//!
//! cargo run --release --example nonexistence_search

use trio_formation::analysis::{cubic_f_roots, search_equilibrium_zeros, search_moving_zeros, SearchBox, SearchOptions};

fn main() -> trio_formation::Result<()> {
    let opts = SearchOptions::default();
    let full = SearchBox::new(0.0, 5.0, 0.0, 5.0);
    let (ell, r_bd) = (10.0, 16.0);
    let roots = cubic_f_roots(ell, r_bd)?.expect("ell above threshold");

    for theta in [30.0f64, 60.0, 90.0, 120.0, 150.0] {
        let t = theta.to_radians();
        let c = t.cos();
        let bound = if theta < 90.0 { (6.0 / (1.0 + c)).max(2.0 / (1.0 - c)) } else { 2.0 / (1.0 + c) };
        let eq = search_equilibrium_zeros(1.0, t, &full, &opts);
        let region = SearchBox::new(roots.r1, roots.r2, roots.r1, 5.0);
        let mv = search_moving_zeros(ell, r_bd, bound, t, &region, &opts);
        let low = search_moving_zeros(ell, r_bd, 0.5, t, &full, &opts);
        println!(
            "theta {theta:>5}: rest zeros {:?}; moving zeros at R_Ad = {bound:.3}: {}; at R_Ad = 0.5: {:?}",
            eq.zeros.iter().map(|z| (z.x, z.y)).collect::<Vec<_>>(),
            mv.zeros_found,
            low.zeros.iter().map(|z| (z.x, z.y)).collect::<Vec<_>>()
        );
    }
    Ok(())
}
