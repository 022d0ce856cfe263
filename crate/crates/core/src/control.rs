//! Gradient control terms and the closed-loop right-hand sides.
//!
//! R1 runs the distance law on both of its links plus the signed-area law;
//! R2 and R3 each run a bearing law towards R1. Everything is expressed in
//! the global frame.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bearing, links, FormationSpec, LinkVector, TeamConfiguration, Vec2};

/// Controller gains.
///
/// Units: `kd` and `ka` are 1/(length²·time), `kb` is length/time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gains {
    kd: f64,
    kb: f64,
    ka: f64,
}

impl Gains {
    pub fn new(kd: f64, kb: f64, ka: f64) -> Result<Self> {
        for (name, v) in [("K_d", kd), ("K_b", kb), ("K_A", ka)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidGains(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { kd, kb, ka })
    }

    /// Builds gains from `K_d`, `K_b` and the area-to-distance ratio `R_Ad`.
    pub fn with_area_ratio(kd: f64, kb: f64, r_ad: f64) -> Result<Self> {
        Self::new(kd, kb, r_ad * kd)
    }

    pub fn kd(&self) -> f64 {
        self.kd
    }
    pub fn kb(&self) -> f64 {
        self.kb
    }
    pub fn ka(&self) -> f64 {
        self.ka
    }

    /// `R_bd = K_b / K_d`, length³.
    pub fn r_bd(&self) -> f64 {
        self.kb / self.kd
    }

    /// `R_Ad = K_A / K_d`, dimensionless.
    pub fn r_ad(&self) -> f64 {
        self.ka / self.kd
    }

    /// Threshold distance `√3 ∛(R_bd / 2)`.
    pub fn d_hat(&self) -> f64 {
        3f64.sqrt() * (self.r_bd() / 2.0).cbrt()
    }
}

/// `u_ijd = (‖z_ij‖² - d*²) z_ij`.
pub fn distance_control_term(z_ij: Vec2, d_star: f64) -> Vec2 {
    z_ij * (z_ij.norm_sq() - d_star * d_star)
}

/// `u_ijb = g_ij - g*_ij`.
pub fn bearing_control_term(g_ij: Vec2, g_star: Vec2) -> Vec2 {
    g_ij - g_star
}

/// `u_A = (A - A*) J (z13 - z12)`.
pub fn area_control_term(z12: Vec2, z13: Vec2, area_star: f64) -> Vec2 {
    let e_area = 0.5 * z12.cross(z13) - area_star;
    (z13 - z12).j() * e_area
}

struct Terms {
    u12d: Vec2,
    u13d: Vec2,
    u_area: Vec2,
    u12b: Vec2,
    u13b: Vec2,
}

fn terms(z: &LinkVector, spec: &FormationSpec) -> Result<Terms> {
    let g12 = bearing(z.z12)?;
    let g13 = bearing(z.z13)?;
    Ok(Terms {
        u12d: distance_control_term(z.z12, spec.d12_star()),
        u13d: distance_control_term(z.z13, spec.d13_star()),
        u_area: area_control_term(z.z12, z.z13, spec.area_star()),
        u12b: bearing_control_term(g12, spec.g12_star()),
        u13b: bearing_control_term(g13, spec.g13_star()),
    })
}

/// Closed-loop velocities `[ṗ1, ṗ2, ṗ3]`.
///
/// `ṗ1 = K_d u12d + K_d u13d + K_A u_A`, `ṗ2 = -K_b u12b`, `ṗ3 = -K_b u13b`.
pub fn team_velocity(p: &TeamConfiguration, spec: &FormationSpec, gains: &Gains) -> Result<[Vec2; 3]> {
    let t = terms(&links(p), spec)?;
    let v1 = (t.u12d + t.u13d) * gains.kd + t.u_area * gains.ka;
    Ok([v1, -t.u12b * gains.kb, -t.u13b * gains.kb])
}

/// Closed-loop link velocities `(ż12, ż13, ż23)`.
pub fn link_velocity(z: &LinkVector, spec: &FormationSpec, gains: &Gains) -> Result<LinkVector> {
    let t = terms(z, spec)?;
    let r1 = (t.u12d + t.u13d) * gains.kd + t.u_area * gains.ka;
    Ok(LinkVector {
        z12: -(t.u12b * gains.kb + r1),
        z13: -(t.u13b * gains.kb + r1),
        z23: -(t.u13b - t.u12b) * gains.kb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn distance_term_examples() {
        assert_eq!(distance_control_term(Vec2::new(2.0, 0.0), 1.0), Vec2::new(6.0, 0.0));
        assert_eq!(distance_control_term(Vec2::new(1.0, 0.0), 1.0), Vec2::ZERO);
        assert!(close(
            distance_control_term(Vec2::new(0.6, 0.8), 2.0),
            Vec2::new(-1.8, -2.4),
            1e-12
        ));
    }

    #[test]
    fn bearing_term_examples() {
        let x = Vec2::new(1.0, 0.0);
        assert_eq!(bearing_control_term(x, x), Vec2::ZERO);
        assert_eq!(bearing_control_term(Vec2::new(0.0, 1.0), x), Vec2::new(-1.0, 1.0));
        let spec = FormationSpec::isosceles_deg(10.0, 60.0).unwrap();
        let u = bearing_control_term(-spec.g13_star(), spec.g12_star());
        assert!(close(u, Vec2::new(-1.5, -(3f64.sqrt()) / 2.0), 1e-12));
    }

    #[test]
    fn area_term_examples() {
        let spec = FormationSpec::isosceles_deg(4.0, 75.0).unwrap();
        let z = crate::geometry::links(&spec.reference_configuration());
        assert!(area_control_term(z.z12, z.z13, spec.area_star()).norm() < 1e-12);

        let u = area_control_term(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), 0.0);
        assert!(close(u, Vec2::new(0.5, 0.5), 1e-15));

        // mirrored triangle: e_A = -2A*
        let a_star = spec.area_star();
        let z12 = z.z13;
        let z13 = z.z12;
        let u = area_control_term(z12, z13, a_star);
        assert!(close(u, (z13 - z12).j() * (-2.0 * a_star), 1e-9));
    }

    #[test]
    fn gains_validation_and_ratios() {
        assert!(Gains::new(0.0, 1.0, 1.0).is_err());
        assert!(Gains::new(1.0, -1.0, 1.0).is_err());
        assert!(Gains::new(1.0, 1.0, f64::NAN).is_err());
        let g = Gains::with_area_ratio(3.0, 48.0, 0.5).unwrap();
        assert_eq!(g.r_bd(), 16.0);
        assert!((g.r_ad() - 0.5).abs() < 1e-15);
        assert!((g.d_hat() - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn desired_set_is_at_rest() {
        let spec = FormationSpec::from_degrees(10.0, 15.0, 60.0).unwrap();
        let gains = Gains::new(3.0, 48.0, 3.0).unwrap();
        let v = team_velocity(&spec.reference_configuration(), &spec, &gains).unwrap();
        for vi in v {
            assert!(vi.norm() < 1e-12);
        }
        let zv = link_velocity(&links(&spec.reference_configuration()), &spec, &gains).unwrap();
        assert!(zv.to_array().iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn flipped_configuration_translates_uniformly() {
        // R_Ad -> 0 limit of the flipped moving configuration: distances obey
        // e_ijd d_ij = -R_bd, i.e. f(d) = d³ - ℓ² d + R_bd = 0.
        let spec = FormationSpec::isosceles_deg(10.0, 60.0).unwrap();
        let gains = Gains::new(3.0, 48.0, 1e-300).unwrap();
        let ell: f64 = 10.0;
        let r_bd = gains.r_bd();
        // bisection for the larger positive root of f
        let f = |d: f64| d * d * d - ell * ell * d + r_bd;
        let (mut lo, mut hi) = (ell / 3f64.sqrt(), ell);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let d = 0.5 * (lo + hi);
        let p = TeamConfiguration::new(
            Vec2::ZERO,
            -spec.g13_star() * d,
            -spec.g12_star() * d,
        );
        let v = team_velocity(&p, &spec, &gains).unwrap();
        let w = (spec.g12_star() + spec.g13_star()) * gains.kb();
        for vi in v {
            assert!(close(vi, w, 1e-9 * w.norm()), "{vi:?} vs {w:?}");
        }
        assert!(close(w, Vec2::new(72.0, 24.0 * 3f64.sqrt()), 1e-12));
        let zv = link_velocity(&links(&p), &spec, &gains).unwrap();
        assert!(zv.z23.norm() < 1e-12);
    }
}
