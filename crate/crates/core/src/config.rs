//! Flat JSON run configuration. Every key carries its unit; unknown keys are
//! rejected. Angles are degrees here and radians everywhere else.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::control::Gains;
use crate::error::{Error, Result};
use crate::geometry::{FormationSpec, TeamConfiguration, Vec2};
use crate::simulate::SimParams;
use crate::sweep::{self, SweepPlan};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub d12_star_len: f64,
    pub d13_star_len: f64,
    pub theta_star_deg: f64,

    #[serde(rename = "Kd_per_len2_time")]
    pub kd_per_len2_time: f64,
    #[serde(rename = "Kb_len_per_time")]
    pub kb_len_per_time: f64,
    #[serde(rename = "KA_per_len2_time")]
    pub ka_per_len2_time: f64,

    pub dt_time: f64,
    pub t_max_time: f64,
    pub conv_window_steps: usize,
    pub eq_velocity_tol_len_per_time: f64,
    pub moving_residual_tol_len_per_time: f64,
    pub moving_speed_min_len_per_time: f64,
    pub error_tol: f64,
    pub collision_eps_len: f64,
    pub record_stride_steps: usize,

    /// Explicit start `[[x1, y1], [x2, y2], [x3, y3]]`; sampled from `seed` when absent.
    pub p0_len: Option<[[f64; 2]; 3]>,
    pub seed: u64,
    pub seed_index: usize,

    pub ell_values_len: Vec<f64>,
    pub theta_values_deg: Vec<f64>,
    #[serde(rename = "RAd_values")]
    pub rad_values: Option<Vec<f64>>,
    #[serde(rename = "RAd_include_bounds")]
    pub rad_include_bounds: bool,
    pub n_seeds: usize,
    pub init_box_len: f64,
    pub min_separation_len: f64,
    pub sweep_t_max_time: f64,

    pub fig1_theta_values_deg: Vec<f64>,
    pub fig1_d_values: Vec<f64>,
    pub fig1_x_min: f64,
    pub fig1_x_max: f64,
    pub fig1_x_step: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sim = SimParams::default();
        let plan = SweepPlan::default();
        Self {
            d12_star_len: 10.0,
            d13_star_len: 10.0,
            theta_star_deg: 60.0,
            kd_per_len2_time: 3.0,
            kb_len_per_time: 48.0,
            ka_per_len2_time: 3.0,
            dt_time: sim.dt,
            t_max_time: sim.t_max,
            conv_window_steps: sim.conv_window,
            eq_velocity_tol_len_per_time: sim.eq_velocity_tol,
            moving_residual_tol_len_per_time: sim.moving_residual_tol,
            moving_speed_min_len_per_time: sim.moving_speed_min,
            error_tol: sim.error_tol,
            collision_eps_len: sim.collision_eps,
            record_stride_steps: sim.record_stride,
            p0_len: None,
            seed: 0,
            seed_index: 0,
            ell_values_len: plan.ell_values,
            theta_values_deg: plan.theta_values_deg,
            rad_values: None,
            rad_include_bounds: plan.include_bound_ratios,
            n_seeds: plan.n_seeds,
            init_box_len: plan.init_box,
            min_separation_len: plan.min_separation,
            sweep_t_max_time: plan.sim.t_max,
            fig1_theta_values_deg: sweep::FIG1_THETAS_DEG.to_vec(),
            fig1_d_values: sweep::FIG1_D_VALUES.to_vec(),
            fig1_x_min: 1.0,
            fig1_x_max: 30.0,
            fig1_x_step: 0.1,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec()?;
        self.gains()?;
        self.sim_params().validate()?;
        self.sweep_plan()?.validate()?;
        if self.fig1_x_step <= 0.0 || self.fig1_x_max <= self.fig1_x_min {
            return Err(Error::Config("fig1 x range must be increasing with a positive step".into()));
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<FormationSpec> {
        FormationSpec::from_degrees(self.d12_star_len, self.d13_star_len, self.theta_star_deg)
    }

    pub fn gains(&self) -> Result<Gains> {
        Gains::new(self.kd_per_len2_time, self.kb_len_per_time, self.ka_per_len2_time)
    }

    pub fn sim_params(&self) -> SimParams {
        SimParams {
            dt: self.dt_time,
            t_max: self.t_max_time,
            conv_window: self.conv_window_steps,
            eq_velocity_tol: self.eq_velocity_tol_len_per_time,
            moving_residual_tol: self.moving_residual_tol_len_per_time,
            moving_speed_min: self.moving_speed_min_len_per_time,
            error_tol: self.error_tol,
            collision_eps: self.collision_eps_len,
            record_stride: self.record_stride_steps,
        }
    }

    /// Isosceles sweep plan; `R_Ad` defaults to the isosceles list.
    pub fn sweep_plan(&self) -> Result<SweepPlan> {
        Ok(SweepPlan {
            ell_values: self.ell_values_len.clone(),
            theta_values_deg: self.theta_values_deg.clone(),
            rad_values: self.rad_values.clone().unwrap_or_else(|| sweep::ISO_RADS.to_vec()),
            include_bound_ratios: self.rad_include_bounds,
            gains_base: self.gains()?,
            n_seeds: self.n_seeds,
            seed: self.seed,
            init_box: self.init_box_len,
            min_separation: self.min_separation_len,
            sim: SimParams {
                t_max: self.sweep_t_max_time,
                record_stride: 0,
                ..self.sim_params()
            },
        })
    }

    /// `R_Ad` values of the unequal-sides experiment, `[0.2, 1]` unless set.
    pub fn general_rad_values(&self) -> Vec<f64> {
        self.rad_values.clone().unwrap_or_else(|| vec![0.2, 1.0])
    }

    /// The configured start, or run `seed_index` of the sweep sampler.
    pub fn initial_configuration(&self) -> TeamConfiguration {
        match self.p0_len {
            Some(p) => TeamConfiguration::new(
                Vec2::new(p[0][0], p[0][1]),
                Vec2::new(p[1][0], p[1][1]),
                Vec2::new(p[2][0], p[2][1]),
            ),
            None => sweep::sample_initial(self.seed, self.seed_index, self.init_box_len, self.min_separation_len),
        }
    }
}
