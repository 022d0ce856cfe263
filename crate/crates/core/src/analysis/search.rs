//! Grid scan plus Newton polish for zeros of the 2×2 isosceles systems.
//!
//! Nodes sit on a regular grid over an axis-aligned box. A cell becomes a
//! Newton candidate when both residual components change sign across its
//! corners, or when a node is a local minimum of `‖F‖²` (tangential zeros do
//! not change sign). A "no zero" verdict only means no candidate converged.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::residuals::{iso_equilibrium_residuals, iso_moving_residuals};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl SearchBox {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self { x_min, x_max, y_min, y_max }
    }

    /// Closed containment.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub step: f64,
    /// Newton stops once the update is below `tol (1 + |(x, y)|)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest residual norm accepted for a converged zero.
    pub residual_tol: f64,
    /// Zeros closer than this to either axis are discarded; `(0, 0)` solves
    /// the rest equations trivially.
    pub axis_margin: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            step: 0.01,
            tol: 1e-12,
            max_iter: 50,
            residual_tol: 1e-9,
            axis_margin: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub x: f64,
    pub y: f64,
    pub residual_norm: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub cells: usize,
    pub candidates: usize,
    pub zeros_found: usize,
    pub zeros: Vec<Zero>,
}

impl SearchSummary {
    /// Zeros farther than `tol` from `(x, y)`.
    pub fn zeros_other_than(&self, x: f64, y: f64, tol: f64) -> Vec<Zero> {
        self.zeros
            .iter()
            .filter(|z| (z.x - x).abs() > tol || (z.y - y).abs() > tol)
            .copied()
            .collect()
    }
}

/// A smooth map `R² → R²` with its Jacobian.
pub trait PlanarSystem: Sync {
    fn eval(&self, x: f64, y: f64) -> [f64; 2];
    /// `[[∂F0/∂x, ∂F0/∂y], [∂F1/∂x, ∂F1/∂y]]`.
    fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2];
}

/// Isosceles rest equations for fixed `R_Ad`, `θ*`.
#[derive(Clone, Copy, Debug)]
pub struct EquilibriumSystem {
    pub r_ad: f64,
    pub theta_star: f64,
}

impl PlanarSystem for EquilibriumSystem {
    fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        iso_equilibrium_residuals(x, y, self.r_ad, self.theta_star)
    }

    fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let c = self.theta_star.cos();
        let h = 0.5 * self.r_ad;
        let (a, b) = (x * c - y, y * c - x);
        let w = x * y - 1.0;
        [
            [3.0 * x * x - 1.0 - h * (y * a + w * c), -h * (x * a - w)],
            [-h * (y * b - w), 3.0 * y * y - 1.0 - h * (x * b + w * c)],
        ]
    }
}

/// Isosceles moving equations divided by `ℓ³`.
#[derive(Clone, Copy, Debug)]
pub struct MovingSystem {
    pub ell: f64,
    pub r_bd: f64,
    pub r_ad: f64,
    pub theta_star: f64,
}

impl PlanarSystem for MovingSystem {
    fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        let l3 = self.ell.powi(3);
        let [f0, f1] = iso_moving_residuals(x, y, self.ell, self.r_bd, self.r_ad, self.theta_star);
        [f0 / l3, f1 / l3]
    }

    fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let c = self.theta_star.cos();
        let h = 0.5 * self.r_ad;
        let (a, b) = (x * c - y, y * c - x);
        let w = x * y + 1.0;
        [
            [3.0 * x * x - 1.0 - h * (y * a + w * c), -h * (x * a - w)],
            [-h * (y * b - w), 3.0 * y * y - 1.0 - h * (x * b + w * c)],
        ]
    }
}

fn norm2(v: [f64; 2]) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// Newton iteration from `(x, y)`; `Some` when it settles on a zero.
pub fn newton_polish<S: PlanarSystem + ?Sized>(sys: &S, mut x: f64, mut y: f64, opts: &SearchOptions) -> Option<Zero> {
    for _ in 0..opts.max_iter {
        let f = sys.eval(x, y);
        let [[a, b], [c, d]] = sys.jacobian(x, y);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (d * f[0] - b * f[1]) / det;
        let dy = (a * f[1] - c * f[0]) / det;
        x -= dx;
        y -= dy;
        if !(x.is_finite() && y.is_finite()) {
            return None;
        }
        if (dx * dx + dy * dy).sqrt() <= opts.tol * (1.0 + (x * x + y * y).sqrt()) {
            let r = norm2(sys.eval(x, y));
            return (r <= opts.residual_tol).then_some(Zero { x, y, residual_norm: r });
        }
    }
    None
}

fn sign_change(vals: [f64; 4]) -> bool {
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    lo <= 0.0 && hi >= 0.0
}

/// Scans `region` on a grid of spacing `opts.step` and polishes candidates.
pub fn find_zeros<S: PlanarSystem>(sys: &S, region: &SearchBox, opts: &SearchOptions) -> SearchSummary {
    let nx = ((region.x_max - region.x_min) / opts.step).round().max(1.0) as usize;
    let ny = ((region.y_max - region.y_min) / opts.step).round().max(1.0) as usize;
    let hx = (region.x_max - region.x_min) / nx as f64;
    let hy = (region.y_max - region.y_min) / ny as f64;
    let xs: Vec<f64> = (0..=nx).map(|i| region.x_min + i as f64 * hx).collect();
    let ys: Vec<f64> = (0..=ny).map(|j| region.y_min + j as f64 * hy).collect();

    let values: Vec<Vec<[f64; 2]>> = xs
        .par_iter()
        .map(|&x| ys.iter().map(|&y| sys.eval(x, y)).collect())
        .collect();
    let sq = |i: usize, j: usize| {
        let v = values[i][j];
        v[0] * v[0] + v[1] * v[1]
    };

    let mut starts: Vec<(f64, f64)> = (0..nx)
        .into_par_iter()
        .flat_map_iter(|i| {
            let values = &values;
            let xs = &xs;
            let ys = &ys;
            (0..ny).filter_map(move |j| {
                let c = [values[i][j], values[i + 1][j], values[i][j + 1], values[i + 1][j + 1]];
                let both = sign_change([c[0][0], c[1][0], c[2][0], c[3][0]])
                    && sign_change([c[0][1], c[1][1], c[2][1], c[3][1]]);
                both.then(|| (0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])))
            })
        })
        .collect();
    #[allow(clippy::needless_range_loop)]
    for i in 1..nx {
        for j in 1..ny {
            let s = sq(i, j);
            let is_min = (i - 1..=i + 1)
                .flat_map(|a| (j - 1..=j + 1).map(move |b| (a, b)))
                .all(|(a, b)| (a, b) == (i, j) || sq(a, b) > s);
            if is_min {
                starts.push((xs[i], ys[j]));
            }
        }
    }

    let candidates = starts.len();
    let mut zeros: Vec<Zero> = starts
        .par_iter()
        .filter_map(|&(x, y)| newton_polish(sys, x, y, opts))
        .filter(|z| region.contains(z.x, z.y) && z.x > opts.axis_margin && z.y > opts.axis_margin)
        .collect();
    zeros.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut unique: Vec<Zero> = Vec::new();
    for z in zeros {
        if !unique.iter().any(|u| (u.x - z.x).abs() < 1e-8 && (u.y - z.y).abs() < 1e-8) {
            unique.push(z);
        }
    }
    SearchSummary {
        cells: nx * ny,
        candidates,
        zeros_found: unique.len(),
        zeros: unique,
    }
}

/// Zeros of the isosceles rest equations in `region`.
pub fn search_equilibrium_zeros(r_ad: f64, theta_star: f64, region: &SearchBox, opts: &SearchOptions) -> SearchSummary {
    find_zeros(&EquilibriumSystem { r_ad, theta_star }, region, opts)
}

/// Zeros of the isosceles moving equations in `region`.
pub fn search_moving_zeros(
    ell: f64,
    r_bd: f64,
    r_ad: f64,
    theta_star: f64,
    region: &SearchBox,
    opts: &SearchOptions,
) -> SearchSummary {
    find_zeros(&MovingSystem { ell, r_bd, r_ad, theta_star }, region, opts)
}
