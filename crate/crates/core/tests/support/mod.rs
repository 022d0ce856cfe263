//! Test-side oracles. Nothing here calls the closed forms under test.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trio_formation::control::Gains;
use trio_formation::geometry::{FormationSpec, TeamConfiguration, Vec2};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Root of `f` on `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no bracket on [{lo}, {hi}]");
    let lo_neg = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Three points in `[-half, half]²` at least `min_sep` apart.
pub fn random_config(r: &mut ChaCha8Rng, half: f64, min_sep: f64) -> TeamConfiguration {
    loop {
        let mut pt = || Vec2::new(r.gen_range(-half..half), r.gen_range(-half..half));
        let p = TeamConfiguration::new(pt(), pt(), pt());
        if p.min_pairwise_distance() >= min_sep {
            return p;
        }
    }
}

pub fn random_spec(r: &mut ChaCha8Rng) -> FormationSpec {
    let d12 = r.gen_range(1.0..15.0);
    let d13 = r.gen_range(1.0..15.0);
    let th = r.gen_range(5.0..175.0);
    FormationSpec::from_degrees(d12, d13, th).unwrap()
}

pub fn random_gains(r: &mut ChaCha8Rng) -> Gains {
    Gains::new(r.gen_range(0.1..5.0), r.gen_range(1.0..60.0), r.gen_range(0.1..10.0)).unwrap()
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// `K_d (¼e12² + ¼e13²) + K_A e_A²` as a function of `p1` alone.
pub fn r1_potential(p1: Vec2, p2: Vec2, p3: Vec2, spec: &FormationSpec, gains: &Gains) -> f64 {
    let z12 = p2 - p1;
    let z13 = p3 - p1;
    let e12 = z12.x * z12.x + z12.y * z12.y - spec.d12_star().powi(2);
    let e13 = z13.x * z13.x + z13.y * z13.y - spec.d13_star().powi(2);
    let target = 0.5 * spec.d12_star() * spec.d13_star() * spec.theta_star().sin();
    let e_a = 0.5 * cross(z12, z13) - target;
    gains.kd() * 0.25 * (e12 * e12 + e13 * e13) + gains.ka() * e_a * e_a
}

/// Central differences of `f` at `x` with step `1e-6` relative to each coordinate.
pub fn fd_gradient(f: impl Fn(Vec2) -> f64, x: Vec2) -> Vec2 {
    let hx = 1e-6 * x.x.abs().max(1.0);
    let hy = 1e-6 * x.y.abs().max(1.0);
    Vec2::new(
        (f(Vec2::new(x.x + hx, x.y)) - f(Vec2::new(x.x - hx, x.y))) / (2.0 * hx),
        (f(Vec2::new(x.x, x.y + hy)) - f(Vec2::new(x.x, x.y - hy))) / (2.0 * hy),
    )
}

/// Brackets and bisects the two positive roots of `y³ + c y + d` (`c < 0`, `d > 0`)
/// around the local minimum at `√(-c/3)`.
pub fn cubic_positive_roots_by_bisection(c: f64, d: f64) -> (f64, f64) {
    let f = |y: f64| y * y * y + c * y + d;
    let m = (-c / 3.0).sqrt();
    let top = (-c).sqrt() + d.cbrt();
    (bisect(f, 0.0, m), bisect(f, m, top))
}

pub fn rel_err(a: Vec2, b: Vec2) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}
