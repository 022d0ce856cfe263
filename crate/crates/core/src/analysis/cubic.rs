//! Positive roots of reduced cubics `y³ + c y + d = 0` and the distance cubic
//! `f(z) = z³ - ℓ² z + R_bd` that governs moving configurations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative width of the band around `Δ = 0` treated as a double root.
const DISCRIMINANT_RTOL: f64 = 1e-12;

/// `y³ + c y + d = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedCubic {
    pub c: f64,
    pub d: f64,
}

impl ReducedCubic {
    pub fn new(c: f64, d: f64) -> Self {
        Self { c, d }
    }

    /// `Δ = -4c³ - 27d²`.
    pub fn discriminant(&self) -> f64 {
        -4.0 * self.c.powi(3) - 27.0 * self.d * self.d
    }

    pub fn eval(&self, y: f64) -> f64 {
        y * y * y + self.c * y + self.d
    }

    fn discriminant_scale(&self) -> f64 {
        4.0 * self.c.abs().powi(3) + 27.0 * self.d * self.d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicPositiveRoots {
    pub y_p1: f64,
    pub y_p2: f64,
    pub r_v: f64,
    /// Radians, in `(π/2, π]`.
    pub phi_v: f64,
}

/// The two positive roots of `y³ + c y + d = 0` for `c < 0`, `d > 0`, `Δ ≥ 0`.
///
/// `y_p1 = 2 ∛r_v cos(φ_v/3 - 120°)`, `y_p2 = 2 ∛r_v cos(φ_v/3)` with
/// `r_v = √(-(c/3)³)`. A discriminant within `1e-12` relative of zero is
/// snapped to zero so that exact double roots survive rounding.
pub fn solve_reduced_cubic_positive(c: f64, d: f64) -> Result<CubicPositiveRoots> {
    if !(c < 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("c must be negative, got {c}")));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!("d must be positive, got {d}")));
    }
    let cubic = ReducedCubic::new(c, d);
    let mut delta = cubic.discriminant();
    if delta.abs() <= DISCRIMINANT_RTOL * cubic.discriminant_scale() {
        delta = 0.0;
    }
    if delta < 0.0 {
        return Err(Error::NegativeDiscriminant(delta));
    }
    let r_v = (-(c / 3.0).powi(3)).sqrt();
    // atan of -(2/d)√(Δ/108), taken in the second quadrant
    let phi_v = (delta / 108.0).sqrt().atan2(-d / 2.0);
    let rho = 2.0 * (-c / 3.0).sqrt();
    let third = phi_v / 3.0;
    Ok(CubicPositiveRoots {
        y_p1: rho * (third - 2.0 * std::f64::consts::FRAC_PI_3).cos(),
        y_p2: rho * third.cos(),
        r_v,
        phi_v,
    })
}

/// `d̂ = √3 ∛(R_bd / 2)`.
pub fn threshold_distance(r_bd: f64) -> Result<f64> {
    if !(r_bd > 0.0) || !r_bd.is_finite() {
        return Err(Error::Domain(format!("R_bd must be positive, got {r_bd}")));
    }
    Ok(3f64.sqrt() * (r_bd / 2.0).cbrt())
}

/// Roots of `f(z) = z³ - ℓ² z + R_bd` scaled by the leg, `z = r ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FRoots {
    pub r1: f64,
    pub r2: f64,
    /// Radians.
    pub phi: f64,
}

/// Positive roots of `f(z) = z³ - ℓ² z + R_bd` as fractions of `ℓ`.
///
/// `None` when `ℓ < d̂`: then `f > 0` on `z > 0` and no moving configuration
/// can exist. Otherwise `r1 ≤ 1/√3 ≤ r2 < 1`.
pub fn cubic_f_roots(ell: f64, r_bd: f64) -> Result<Option<FRoots>> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::Domain(format!("leg must be positive, got {ell}")));
    }
    if !(r_bd > 0.0) || !r_bd.is_finite() {
        return Err(Error::Domain(format!("R_bd must be positive, got {r_bd}")));
    }
    match solve_reduced_cubic_positive(-ell * ell, r_bd) {
        Ok(roots) => Ok(Some(FRoots {
            r1: roots.y_p1 / ell,
            r2: roots.y_p2 / ell,
            phi: roots.phi_v,
        })),
        Err(Error::NegativeDiscriminant(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
