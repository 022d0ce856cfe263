//! Fixed-step RK4 integration of the closed loop and classification of the
//! limiting behavior of each trajectory.
//!
//! The nominal step is `SimParams::dt`. Each step is additionally capped by
//! an explicit-stability bound computed from the current state (the distance
//! and area terms grow cubically with the robot spread, so starts in a wide
//! box are stiff for a few hundred steps). The cap is a pure function of the
//! state, so runs stay bit-for-bit deterministic.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::control::{team_velocity, Gains};
use crate::error::{Error, Result};
use crate::geometry::{errors, links, signed_area, FormationSpec, TeamConfiguration, Vec2, DEFAULT_COLLISION_EPS};

/// Step cap is `STABILITY_FACTOR / stiffness_bound`; classical RK4 is stable
/// on the negative real axis down to about -2.78.
const STABILITY_FACTOR: f64 = 2.0;

/// Error-norm growth factor within one step that triggers a halved retry.
const BLOWUP_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Nominal step (time).
    pub dt: f64,
    pub t_max: f64,
    /// Consecutive steps a classification condition must hold.
    pub conv_window: usize,
    /// Speed below which a robot counts as at rest.
    pub eq_velocity_tol: f64,
    /// Allowed disagreement between robot velocities in a moving configuration.
    pub moving_residual_tol: f64,
    /// Minimum common speed of a moving configuration. Slowly converging
    /// trajectories also translate almost rigidly, only much slower.
    pub moving_speed_min: f64,
    pub error_tol: f64,
    pub collision_eps: f64,
    /// Record every n-th step in the trajectory; 0 keeps only the endpoints.
    pub record_stride: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_max: 50.0,
            conv_window: 500,
            eq_velocity_tol: 1e-8,
            moving_residual_tol: 1e-6,
            moving_speed_min: 1e-3,
            error_tol: 1e-6,
            collision_eps: DEFAULT_COLLISION_EPS,
            record_stride: 100,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("eq_velocity_tol", self.eq_velocity_tol),
            ("moving_residual_tol", self.moving_residual_tol),
            ("moving_speed_min", self.moving_speed_min),
            ("error_tol", self.error_tol),
            ("collision_eps", self.collision_eps),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.t_max > self.dt) || !self.t_max.is_finite() {
            return Err(Error::InvalidParams(format!(
                "t_max ({}) must exceed dt ({})",
                self.t_max, self.dt
            )));
        }
        if self.conv_window == 0 {
            return Err(Error::InvalidParams("conv_window must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeKind {
    #[serde(rename = "desired")]
    DesiredEquilibrium,
    #[serde(rename = "moving")]
    MovingConfiguration,
    #[serde(rename = "collision")]
    Collision,
    #[serde(rename = "undecided")]
    Undecided,
}

impl OutcomeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutcomeKind::DesiredEquilibrium => "desired",
            OutcomeKind::MovingConfiguration => "moving",
            OutcomeKind::Collision => "collision",
            OutcomeKind::Undecided => "undecided",
        }
    }
}

impl std::fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub final_config: TeamConfiguration,
    /// Mean robot velocity at the final state.
    pub steady_velocity: Vec2,
    pub final_error_norm: f64,
    /// Largest deviation of a robot velocity from the mean at the final state.
    pub velocity_spread: f64,
    pub t_end: f64,
    pub steps: usize,
    /// Number of steps that were redone with a halved step.
    pub retries: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub p: TeamConfiguration,
    pub e_norm: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

pub const TRAJECTORY_CSV_HEADER: [&str; 8] = ["t", "p1x", "p1y", "p2x", "p2y", "p3x", "p3y", "e_norm"];

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// CSV with header `t,p1x,p1y,p2x,p2y,p3x,p3y,e_norm`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(TRAJECTORY_CSV_HEADER)?;
        for s in &self.samples {
            let a = s.p.to_array();
            out.serialize((s.t, a[0], a[1], a[2], a[3], a[4], a[5], s.e_norm))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Stiffness estimate of the closed loop at `p`, used to cap the step.
///
/// R1's self-coupling block `∂ṗ1/∂p1 = -K_d Σ_j ((d_j² - d_j*²) I + 2 z_j z_jᵀ)
/// - ½ K_A (J z23)(J z23)ᵀ` is symmetric, so its spectral radius is exact.
/// The bearing blocks contribute `K_b / d` per link and the cross-coupling
/// of the area term adds `K_A |e_A|`.
pub fn stiffness_bound(p: &TeamConfiguration, spec: &FormationSpec, gains: &Gains) -> f64 {
    let z = links(p);
    let (d12, d13) = (z.z12.norm(), z.z13.norm());
    let mut a = 0.0;
    let mut b = 0.0;
    let mut c = 0.0;
    for (zj, ds) in [(z.z12, spec.d12_star()), (z.z13, spec.d13_star())] {
        let e = zj.norm_sq() - ds * ds;
        a += gains.kd() * (e + 2.0 * zj.x * zj.x);
        b += gains.kd() * 2.0 * zj.x * zj.y;
        c += gains.kd() * (e + 2.0 * zj.y * zj.y);
    }
    let jz = z.z23.j();
    a += 0.5 * gains.ka() * jz.x * jz.x;
    b += 0.5 * gains.ka() * jz.x * jz.y;
    c += 0.5 * gains.ka() * jz.y * jz.y;
    let half_tr = 0.5 * (a + c);
    let rho = half_tr.abs() + (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let e_area = (z.signed_area() - spec.area_star()).abs();
    rho + 2.0 * gains.kb() * (1.0 / d12 + 1.0 / d13) + gains.ka() * e_area
}

fn add_scaled(p: &TeamConfiguration, v: &[Vec2; 3], h: f64) -> TeamConfiguration {
    TeamConfiguration {
        p: [p.p[0] + v[0] * h, p.p[1] + v[1] * h, p.p[2] + v[2] * h],
    }
}

/// One classical fourth-order Runge-Kutta step of the closed loop.
pub fn step_rk4(p: &TeamConfiguration, spec: &FormationSpec, gains: &Gains, dt: f64) -> Result<TeamConfiguration> {
    let k1 = team_velocity(p, spec, gains)?;
    rk4_from(p, &k1, spec, gains, dt)
}

fn rk4_from(
    p: &TeamConfiguration,
    k1: &[Vec2; 3],
    spec: &FormationSpec,
    gains: &Gains,
    dt: f64,
) -> Result<TeamConfiguration> {
    let k1 = *k1;
    let k2 = team_velocity(&add_scaled(p, &k1, 0.5 * dt), spec, gains)?;
    let k3 = team_velocity(&add_scaled(p, &k2, 0.5 * dt), spec, gains)?;
    let k4 = team_velocity(&add_scaled(p, &k3, dt), spec, gains)?;
    let mut out = *p;
    for i in 0..3 {
        out.p[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
    }
    Ok(out)
}

fn velocity_stats(v: &[Vec2; 3]) -> (Vec2, f64, f64) {
    let mean = (v[0] + v[1] + v[2]) / 3.0;
    let spread = v.iter().map(|vi| (*vi - mean).norm()).fold(0.0, f64::max);
    let max_speed = v.iter().map(|vi| vi.norm()).fold(0.0, f64::max);
    (mean, spread, max_speed)
}

/// Integrates from `p0` until a classification holds for `conv_window`
/// consecutive steps, a collision occurs, or `t_max` is reached.
///
/// Classification at each step:
/// * every robot speed below `eq_velocity_tol` and `‖e‖ < error_tol`: desired equilibrium;
/// * robot velocities agree within `moving_residual_tol`, the common speed
///   exceeds both `eq_velocity_tol` and `moving_speed_min`, and `‖e‖` has not
///   dropped below `error_tol`: moving configuration;
/// * a link shorter than `collision_eps`: collision (immediate).
pub fn simulate(
    p0: &TeamConfiguration,
    spec: &FormationSpec,
    gains: &Gains,
    params: &SimParams,
) -> (Trajectory, Outcome) {
    let mut traj = Trajectory::default();
    let mut p = *p0;
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut retries = 0usize;
    let mut desired_run = 0usize;
    let mut moving_run = 0usize;

    let finish = |traj: &mut Trajectory, kind, p: TeamConfiguration, t, steps, retries, vel: Option<[Vec2; 3]>| {
        let e_norm = errors(&p, spec).map(|e| e.norm()).unwrap_or(f64::NAN);
        let (mean, spread, _) = vel.map(|v| velocity_stats(&v)).unwrap_or((Vec2::ZERO, f64::NAN, 0.0));
        if traj.samples.last().is_none_or(|s| s.t != t) {
            traj.samples.push(TrajectorySample { t, p, e_norm });
        }
        Outcome {
            kind,
            final_config: p,
            steady_velocity: mean,
            final_error_norm: e_norm,
            velocity_spread: spread,
            t_end: t,
            steps,
            retries,
        }
    };

    let mut e_norm = match errors(&p, spec) {
        Ok(e) => e.norm(),
        Err(_) => {
            let out = finish(&mut traj, OutcomeKind::Collision, p, t, steps, retries, None);
            return (traj, out);
        }
    };
    loop {
        if !p.is_finite() || p.min_pairwise_distance() < params.collision_eps {
            let out = finish(&mut traj, OutcomeKind::Collision, p, t, steps, retries, None);
            return (traj, out);
        }
        let vel = match team_velocity(&p, spec, gains) {
            Ok(v) => v,
            Err(_) => {
                let out = finish(&mut traj, OutcomeKind::Collision, p, t, steps, retries, None);
                return (traj, out);
            }
        };
        if params.record_stride > 0 && steps.is_multiple_of(params.record_stride) || steps == 0 {
            traj.samples.push(TrajectorySample { t, p, e_norm });
        }

        let (mean, spread, max_speed) = velocity_stats(&vel);
        if max_speed < params.eq_velocity_tol && e_norm < params.error_tol {
            desired_run += 1;
        } else {
            desired_run = 0;
        }
        if spread <= params.moving_residual_tol
            && mean.norm() > params.eq_velocity_tol.max(params.moving_speed_min)
            && e_norm >= params.error_tol
        {
            moving_run += 1;
        } else {
            moving_run = 0;
        }
        if desired_run >= params.conv_window {
            let out = finish(&mut traj, OutcomeKind::DesiredEquilibrium, p, t, steps, retries, Some(vel));
            return (traj, out);
        }
        if moving_run >= params.conv_window {
            let out = finish(&mut traj, OutcomeKind::MovingConfiguration, p, t, steps, retries, Some(vel));
            return (traj, out);
        }
        if t >= params.t_max {
            let out = finish(&mut traj, OutcomeKind::Undecided, p, t, steps, retries, Some(vel));
            return (traj, out);
        }

        let cap = STABILITY_FACTOR / stiffness_bound(&p, spec, gains);
        let h = params.dt.min(cap).min(params.t_max - t);
        let next = rk4_from(&p, &vel, spec, gains, h).and_then(|q| {
            let e_q = errors(&q, spec)?.norm();
            if e_norm > params.error_tol && e_q > BLOWUP_FACTOR * e_norm {
                retries += 1;
                let half = rk4_from(&p, &vel, spec, gains, 0.5 * h)?;
                let q = step_rk4(&half, spec, gains, 0.5 * h)?;
                Ok((q, errors(&q, spec)?.norm()))
            } else {
                Ok((q, e_q))
            }
        });
        match next {
            Ok((q, e_q)) => {
                p = q;
                e_norm = e_q;
            }
            Err(_) => {
                let out = finish(&mut traj, OutcomeKind::Collision, p, t, steps, retries, None);
                return (traj, out);
            }
        }
        t += h;
        steps += 1;
    }
}

/// `‖steady_velocity - K_b (g12* + g13*)‖` for a moving outcome.
pub fn verify_moving_velocity(outcome: &Outcome, spec: &FormationSpec, gains: &Gains) -> Result<f64> {
    if outcome.kind != OutcomeKind::MovingConfiguration {
        return Err(Error::WrongKind {
            found: outcome.kind.to_string(),
        });
    }
    let w = predicted_moving_velocity(spec, gains);
    Ok((outcome.steady_velocity - w).norm())
}

/// `w = K_b (g12* + g13*)`.
pub fn predicted_moving_velocity(spec: &FormationSpec, gains: &Gains) -> Vec2 {
    (spec.g12_star() + spec.g13_star()) * gains.kb()
}

/// Signed area of the final configuration, handy for flip checks.
pub fn final_signed_area(outcome: &Outcome) -> f64 {
    signed_area(&outcome.final_config)
}
