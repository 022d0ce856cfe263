//! Equilibrium and moving-configuration equations in the normalized frame
//! `g12* = (1, 0)`, `g13* = (cos θ*, sin θ*)`.
//!
//! Distances are parametrized as `d12 = x d12*`, `d13 = y d13*`. For the
//! isosceles case `d12* = d13* = ℓ`.

use serde::{Deserialize, Serialize};

use crate::control::Gains;
use crate::error::{Error, Result};
use crate::geometry::FormationSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Equilibrium,
    Moving,
}

/// Scalar coefficients of the planar force balance at R1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Coefficients at a rest configuration: `g12 = g12*`, `g13 = g13*`.
pub fn coefficients_equilibrium(x: f64, y: f64, spec: &FormationSpec, gains: &Gains) -> Coefficients {
    let (l12, l13) = (spec.d12_star(), spec.d13_star());
    let (d12, d13) = (x * l12, y * l13);
    let e_area = 0.5 * spec.theta_star().sin() * (x * y - 1.0) * l12 * l13;
    Coefficients {
        a: (d12 * d12 - l12 * l12) * d12,
        b: (d13 * d13 - l13 * l13) * d13,
        c: -gains.r_ad() * e_area * d12,
        d: gains.r_ad() * e_area * d13,
    }
}

/// Coefficients at a flipped configuration: `g12 = -g13*`, `g13 = -g12*`.
pub fn coefficients_moving(x: f64, y: f64, spec: &FormationSpec, gains: &Gains) -> Coefficients {
    let (l12, l13) = (spec.d12_star(), spec.d13_star());
    let (d12, d13) = (x * l12, y * l13);
    let e_area = 0.5 * spec.theta_star().sin() * (-x * y - 1.0) * l12 * l13;
    Coefficients {
        a: (d13 * d13 - l13 * l13) * d13 + gains.r_bd(),
        b: (d12 * d12 - l12 * l12) * d12 + gains.r_bd(),
        c: gains.r_ad() * e_area * d13,
        d: -gains.r_ad() * e_area * d12,
    }
}

/// `(a sin θ* + c cos θ* + d, b sin θ* - c - d cos θ*)`.
pub fn vector_equation_residual(k: &Coefficients, theta_star: f64) -> [f64; 2] {
    let (s, c) = theta_star.sin_cos();
    [k.a * s + k.c * c + k.d, k.b * s - k.c - k.d * c]
}

/// Isosceles rest equations, divided by `ℓ³ sin θ*`.
pub fn iso_equilibrium_residuals(x: f64, y: f64, r_ad: f64, theta_star: f64) -> [f64; 2] {
    let c = theta_star.cos();
    let w = 0.5 * r_ad * (x * y - 1.0);
    [
        (x * x - 1.0) * x - w * (x * c - y),
        (y * y - 1.0) * y - w * (y * c - x),
    ]
}

/// Isosceles moving equations, divided by `sin θ*`.
pub fn iso_moving_residuals(x: f64, y: f64, ell: f64, r_bd: f64, r_ad: f64, theta_star: f64) -> [f64; 2] {
    let c = theta_star.cos();
    let l3 = ell * ell * ell;
    let w = 0.5 * r_ad * (x * y + 1.0);
    [
        (x * x - 1.0) * x * l3 + r_bd - w * (x * c - y) * l3,
        (y * y - 1.0) * y * l3 + r_bd - w * (y * c - x) * l3,
    ]
}

/// `𝕕 = ½ R_Ad (1 + cos θ*)`.
pub fn d_param(r_ad: f64, theta_star: f64) -> f64 {
    0.5 * r_ad * (1.0 + theta_star.cos())
}

/// First minus second isosceles equation, divided by `x - y`.
pub fn difference_residual(x: f64, y: f64, r_ad: f64, theta_star: f64, branch: Branch) -> f64 {
    let dd = d_param(r_ad, theta_star);
    let area = match branch {
        Branch::Equilibrium => x * y - 1.0,
        Branch::Moving => x * y + 1.0,
    };
    x * x + y * y + x * y - 1.0 - dd * area
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRoots {
    pub y_minus: f64,
    pub y_plus: f64,
}

fn half_radicand(x_bar: f64, dd: f64, branch: Branch) -> f64 {
    match branch {
        Branch::Equilibrium => (dd + 1.0) * (dd - 3.0) * x_bar * x_bar - 4.0 * (dd - 1.0),
        Branch::Moving => (dd + 1.0) * ((dd - 3.0) * x_bar * x_bar + 4.0),
    }
}

/// Solutions `y` of the difference equation at fixed `x̄`, in terms of `𝕕`.
pub fn quadratic_branch_y_d(x_bar: f64, dd: f64, branch: Branch) -> Result<Option<BranchRoots>> {
    if !(x_bar > 0.0) {
        return Err(Error::Domain(format!("x_bar must be positive, got {x_bar}")));
    }
    let rad = half_radicand(x_bar, dd, branch);
    if rad < 0.0 {
        return Ok(None);
    }
    let a = 0.5 * (dd - 1.0) * x_bar;
    let b = 0.5 * rad.sqrt();
    Ok(Some(BranchRoots {
        y_minus: a - b,
        y_plus: a + b,
    }))
}

/// `y = (𝕕-1)/2 x̄ ± ½√(radicand)`, `None` when the radicand is negative.
pub fn quadratic_branch_y(x_bar: f64, r_ad: f64, theta_star: f64, branch: Branch) -> Result<Option<BranchRoots>> {
    quadratic_branch_y_d(x_bar, d_param(r_ad, theta_star), branch)
}

/// `k x̄³ + l x̄² + m x̄ + n` obtained by substituting the difference-equation
/// solution back into the first isosceles equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackSubstitution {
    pub k: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl BackSubstitution {
    pub fn eval(&self, x: f64) -> f64 {
        ((self.k * x + self.l) * x + self.m) * x + self.n
    }
}

/// Back-substitution coefficients in terms of `𝕕`.
pub fn back_substitution_coefficients_d(x_bar: f64, dd: f64, theta_star: f64, branch: Branch) -> Result<BackSubstitution> {
    let rad = half_radicand(x_bar, dd, branch);
    if !(rad >= 0.0) {
        return Err(Error::Domain(format!(
            "radicand {rad} is negative at x_bar = {x_bar}, d = {dd}"
        )));
    }
    let bb = 0.5 * rad.sqrt();
    let c = theta_star.cos();
    let k = 0.5 * (dd - 2.0) * (dd + 1.0) * (dd - (1.0 + c));
    Ok(match branch {
        Branch::Equilibrium => BackSubstitution {
            k,
            l: -bb * dd * (dd - (1.0 + c)),
            m: -0.5 * ((3.0 * dd - 2.0 * c) * (dd - 1.0) + 2.0),
            n: bb * dd,
        },
        Branch::Moving => BackSubstitution {
            k,
            l: bb * dd * (dd - (1.0 + c)),
            m: 0.5 * (dd + 1.0) * (3.0 * dd - 2.0 * (1.0 + c)),
            n: bb * dd,
        },
    })
}

pub fn back_substitution_coefficients(x_bar: f64, r_ad: f64, theta_star: f64, branch: Branch) -> Result<BackSubstitution> {
    if !(x_bar > 0.0) {
        return Err(Error::Domain(format!("x_bar must be positive, got {x_bar}")));
    }
    back_substitution_coefficients_d(x_bar, d_param(r_ad, theta_star), theta_star, branch)
}

/// A feasible point of the rest-equation gap scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub x_bar: f64,
    pub y_bar: f64,
    pub gap: f64,
}

/// Gap of the first rest equation at `(x̄, ȳ)`, `ȳ = 𝕒 x̄ - 𝕓` the lower
/// difference-equation root: `(k x̄³ + l x̄² + m x̄ + n) / (1 + cos θ*)`.
///
/// Requires `𝕕 > 3`, `x̄ > 1`, and the candidate to satisfy `ȳ < 1`,
/// `x̄ cos θ* - ȳ > 0`, `x̄ ȳ > 1`; otherwise `NotFeasible`.
pub fn evaluate_eq18_gap(x_bar: f64, d_param: f64, theta_star: f64) -> Result<GapPoint> {
    if !(d_param > 3.0) {
        return Err(Error::NotFeasible(format!("d = {d_param} must exceed 3")));
    }
    if !(x_bar > 1.0) {
        return Err(Error::NotFeasible(format!("x_bar = {x_bar} must exceed 1")));
    }
    let roots = quadratic_branch_y_d(x_bar, d_param, Branch::Equilibrium)?
        .ok_or_else(|| Error::NotFeasible(format!("no real y at x_bar = {x_bar}")))?;
    let y = roots.y_minus;
    let c = theta_star.cos();
    if !(y > 0.0 && y < 1.0 && x_bar * c - y > 0.0 && x_bar * y > 1.0) {
        return Err(Error::NotFeasible(format!("(x, y) = ({x_bar}, {y}) violates the sign constraints")));
    }
    let cubic = back_substitution_coefficients_d(x_bar, d_param, theta_star, Branch::Equilibrium)?;
    Ok(GapPoint {
        x_bar,
        y_bar: y,
        gap: cubic.eval(x_bar) / (1.0 + c),
    })
}
