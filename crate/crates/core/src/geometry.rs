//! Planar primitives shared by every other module: points, links, bearings,
//! the signed area of the team triangle and the stacked error vector.
//!
//! Conventions used throughout the crate:
//!
//! * `J = [[0, 1], [-1, 0]]` is the rotation by -90 degrees, so `J (x, y) = (y, -x)`.
//! * `x⊥ = -J x = (-y, x)` is the counter-clockwise perpendicular.
//! * Links are `z_ij = p_j - p_i`; the signed area is positive for
//!   counter-clockwise ordering of `p1, p2, p3`.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Links shorter than this are treated as collisions (length units).
pub const DEFAULT_COLLISION_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// Robot positions are plain planar vectors.
pub type Point2 = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` radians from the +x axis.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c, s)
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// `selfᵀ J o`, the 2-D cross product `x1*y2 - y1*x2`.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `J x`, rotation by -90 degrees.
    #[inline]
    pub fn j(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    /// `x⊥ = -J x`, rotation by +90 degrees.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Counter-clockwise rotation by `angle` radians.
    #[inline]
    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, k: f64) -> Vec2 {
        Vec2::new(self.x / k, self.y / k)
    }
}

/// Positions of R1, R2 and R3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeamConfiguration {
    pub p: [Point2; 3],
}

impl TeamConfiguration {
    pub fn new(p1: Point2, p2: Point2, p3: Point2) -> Self {
        Self { p: [p1, p2, p3] }
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(
            Vec2::new(a[0], a[1]),
            Vec2::new(a[2], a[3]),
            Vec2::new(a[4], a[5]),
        )
    }

    pub fn to_array(&self) -> [f64; 6] {
        let [a, b, c] = self.p;
        [a.x, a.y, b.x, b.y, c.x, c.y]
    }

    /// `p + 1₃ ⊗ v`.
    pub fn translated(&self, v: Vec2) -> Self {
        Self {
            p: self.p.map(|q| q + v),
        }
    }

    pub fn centroid(&self) -> Point2 {
        (self.p[0] + self.p[1] + self.p[2]) / 3.0
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().all(|q| q.is_finite())
    }

    /// Smallest of the three pairwise distances.
    pub fn min_pairwise_distance(&self) -> f64 {
        let z = links(self);
        z.z12.norm().min(z.z13.norm()).min(z.z23.norm())
    }
}

/// Relative positions `z = (H ⊗ I₂) p` for the incidence pattern
/// `H = [[-1, 1, 0], [-1, 0, 1], [0, -1, 1]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkVector {
    pub z12: Vec2,
    pub z13: Vec2,
    pub z23: Vec2,
}

impl LinkVector {
    /// Builds the link vector from the two links at R1; `z23` is derived.
    pub fn from_r1_links(z12: Vec2, z13: Vec2) -> Self {
        Self {
            z12,
            z13,
            z23: z13 - z12,
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.z12.x, self.z12.y, self.z13.x, self.z13.y, self.z23.x, self.z23.y,
        ]
    }

    /// Signed area `½ z12ᵀ J z13`.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.z12.cross(self.z13)
    }
}

pub fn links(p: &TeamConfiguration) -> LinkVector {
    let [p1, p2, p3] = p.p;
    LinkVector {
        z12: p2 - p1,
        z13: p3 - p1,
        z23: p3 - p2,
    }
}

/// `z / ‖z‖` with the default collision threshold.
pub fn bearing(z: Vec2) -> Result<Vec2> {
    bearing_with_threshold(z, DEFAULT_COLLISION_EPS)
}

pub fn bearing_with_threshold(z: Vec2, eps: f64) -> Result<Vec2> {
    let n = z.norm();
    if !(n >= eps) {
        return Err(Error::ZeroLink {
            norm: n,
            threshold: eps,
        });
    }
    Ok(z / n)
}

/// Signed area of the triangle `p1 p2 p3`; positive for counter-clockwise ordering.
pub fn signed_area(p: &TeamConfiguration) -> f64 {
    links(p).signed_area()
}

/// Determinant form `½ det [[1, 1, 1], [p1, p2, p3]]`, kept as an independent
/// route to the signed area.
pub fn signed_area_det(p: &TeamConfiguration) -> f64 {
    let [a, b, c] = p.p;
    // cofactor expansion along the row of ones
    0.5 * ((b.x * c.y - c.x * b.y) - (a.x * c.y - c.x * a.y) + (a.x * b.y - b.x * a.y))
}

/// Desired shape: two distances and the vertex angle at R1, with bearings
/// stored in the normalized frame where `g12*` points along +x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormationSpec {
    d12_star: f64,
    d13_star: f64,
    theta_star: f64,
    g12_star: Vec2,
    g13_star: Vec2,
    area_star: f64,
}

impl FormationSpec {
    /// `theta_star` in radians, strictly inside `(0, π)`.
    pub fn new(d12_star: f64, d13_star: f64, theta_star: f64) -> Result<Self> {
        if !(d12_star > 0.0 && d12_star.is_finite()) || !(d13_star > 0.0 && d13_star.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "desired distances must be positive and finite (got {d12_star}, {d13_star})"
            )));
        }
        if !(theta_star > 0.0 && theta_star < std::f64::consts::PI) {
            return Err(Error::InvalidSpec(format!(
                "vertex angle must lie in (0°, 180°), got {}°",
                theta_star.to_degrees()
            )));
        }
        let g12_star = Vec2::new(1.0, 0.0);
        let g13_star = Vec2::from_angle(theta_star);
        Ok(Self {
            d12_star,
            d13_star,
            theta_star,
            g12_star,
            g13_star,
            area_star: 0.5 * theta_star.sin() * d12_star * d13_star,
        })
    }

    pub fn from_degrees(d12_star: f64, d13_star: f64, theta_star_deg: f64) -> Result<Self> {
        Self::new(d12_star, d13_star, theta_star_deg.to_radians())
    }

    pub fn isosceles(ell: f64, theta_star: f64) -> Result<Self> {
        Self::new(ell, ell, theta_star)
    }

    pub fn isosceles_deg(ell: f64, theta_star_deg: f64) -> Result<Self> {
        Self::from_degrees(ell, ell, theta_star_deg)
    }

    /// Accepts desired bearings in any frame and rotates them so that `g12*`
    /// lies along +x. The signed angle from `g12*` to `g13*` must be in `(0°, 180°)`.
    pub fn from_bearings(d12_star: f64, d13_star: f64, g12_star: Vec2, g13_star: Vec2) -> Result<Self> {
        for g in [g12_star, g13_star] {
            if !g.is_finite() || (g.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidSpec(format!(
                    "desired bearings must be unit vectors (norm {})",
                    g.norm()
                )));
            }
        }
        let theta = g12_star.cross(g13_star).atan2(g12_star.dot(g13_star));
        Self::new(d12_star, d13_star, theta)
    }

    pub fn d12_star(&self) -> f64 {
        self.d12_star
    }
    pub fn d13_star(&self) -> f64 {
        self.d13_star
    }
    /// Vertex angle at R1, radians.
    pub fn theta_star(&self) -> f64 {
        self.theta_star
    }
    pub fn theta_star_deg(&self) -> f64 {
        self.theta_star.to_degrees()
    }
    pub fn g12_star(&self) -> Vec2 {
        self.g12_star
    }
    pub fn g13_star(&self) -> Vec2 {
        self.g13_star
    }
    pub fn area_star(&self) -> f64 {
        self.area_star
    }

    /// `Some(ℓ)` when both desired distances agree to 1e-12 relative.
    pub fn isosceles_leg(&self) -> Option<f64> {
        let scale = self.d12_star.max(self.d13_star);
        ((self.d12_star - self.d13_star).abs() <= 1e-12 * scale).then_some(self.d12_star)
    }

    /// A member of the desired set: R1 at the origin, R2 and R3 along the
    /// desired bearings at the desired distances.
    pub fn reference_configuration(&self) -> TeamConfiguration {
        TeamConfiguration::new(
            Vec2::ZERO,
            self.g12_star * self.d12_star,
            self.g13_star * self.d13_star,
        )
    }
}

/// `e = (e12d, e13d, eA, e12b, e13b) ∈ ℝ⁷`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorVector {
    pub e12d: f64,
    pub e13d: f64,
    pub e_area: f64,
    pub e12b: Vec2,
    pub e13b: Vec2,
}

impl ErrorVector {
    pub fn to_array(&self) -> [f64; 7] {
        [
            self.e12d,
            self.e13d,
            self.e_area,
            self.e12b.x,
            self.e12b.y,
            self.e13b.x,
            self.e13b.y,
        ]
    }

    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub fn errors(p: &TeamConfiguration, spec: &FormationSpec) -> Result<ErrorVector> {
    errors_from_links(&links(p), spec)
}

pub fn errors_from_links(z: &LinkVector, spec: &FormationSpec) -> Result<ErrorVector> {
    let g12 = bearing(z.z12)?;
    let g13 = bearing(z.z13)?;
    Ok(ErrorVector {
        e12d: z.z12.norm_sq() - spec.d12_star * spec.d12_star,
        e13d: z.z13.norm_sq() - spec.d13_star * spec.d13_star,
        e_area: z.signed_area() - spec.area_star,
        e12b: g12 - spec.g12_star,
        e13b: g13 - spec.g13_star,
    })
}
