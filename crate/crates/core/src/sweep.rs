//! Batches of random initial conditions over parameter grids, outcome
//! tallies, and the rest-equation gap table.
//!
//! Run `i` of every cell draws its start from `ChaCha8Rng::seed_from_u64(seed ^ i)`,
//! so all cells of a plan share the same set of initial configurations.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{evaluate_eq18_gap, gain_certificate, GainCertificate};
use crate::control::Gains;
use crate::error::{Error, Result};
use crate::geometry::{FormationSpec, TeamConfiguration, Vec2};
use crate::simulate::{final_signed_area, simulate, OutcomeKind, SimParams};

/// Description of the per-run random streams, echoed into summaries.
pub const RNG_DESCRIPTION: &str = "ChaCha8Rng (rand_chacha 0.3), run i seeded with seed_from_u64(seed XOR i)";

/// Environment variable capping the sweep thread count.
pub const THREADS_ENV: &str = "TRIO_THREADS";

/// Angles used by the isosceles grid, degrees.
pub const ISO_THETAS_DEG: [f64; 7] = [5.0, 10.0, 30.0, 60.0, 90.0, 120.0, 150.0];
pub const ISO_ELLS: [f64; 3] = [3.0, 6.0, 10.0];
pub const ISO_RADS: [f64; 12] = [0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0, 3.0, 6.0, 10.0, 20.0, 50.0];
pub const FIG1_THETAS_DEG: [f64; 4] = [5.0, 15.0, 45.0, 75.0];
pub const FIG1_D_VALUES: [f64; 10] = [3.1, 4.0, 6.0, 11.0, 16.0, 26.0, 51.0, 101.0, 501.0, 1001.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub ell_values: Vec<f64>,
    pub theta_values_deg: Vec<f64>,
    pub rad_values: Vec<f64>,
    /// Also run `2/(1-cos θ*)`, `2/(1+cos θ*)` and `6/(1+cos θ*)` for every angle.
    pub include_bound_ratios: bool,
    /// `K_d` and `K_b` are used as is; `K_A` is replaced per cell.
    pub gains_base: Gains,
    pub n_seeds: usize,
    pub seed: u64,
    /// Half-width of the sampling square.
    pub init_box: f64,
    /// Starts with a pairwise distance below this are redrawn.
    pub min_separation: f64,
    pub sim: SimParams,
}

/// Simulation defaults used by sweeps: the default horizon is too short
/// for the slowest converging thin and wide triangles.
pub fn sweep_sim_params() -> SimParams {
    SimParams {
        t_max: 200.0,
        record_stride: 0,
        ..SimParams::default()
    }
}

impl Default for SweepPlan {
    fn default() -> Self {
        Self {
            ell_values: ISO_ELLS.to_vec(),
            theta_values_deg: ISO_THETAS_DEG.to_vec(),
            rad_values: ISO_RADS.to_vec(),
            include_bound_ratios: true,
            gains_base: Gains::new(3.0, 48.0, 3.0).expect("valid gains"),
            n_seeds: 200,
            seed: 0,
            init_box: 100.0,
            min_separation: 1.0,
            sim: sweep_sim_params(),
        }
    }
}

impl SweepPlan {
    /// Equilateral grid over legs and ratios.
    pub fn equilateral() -> Self {
        Self {
            ell_values: vec![3.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0, 25.0, 50.0, 75.0, 100.0],
            theta_values_deg: vec![60.0],
            rad_values: vec![0.25, 0.5, 0.75, 1.0, 2.0, 4.0],
            include_bound_ratios: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_seeds == 0 {
            return Err(Error::InvalidPlan("n_seeds must be at least 1".into()));
        }
        if !(self.init_box > 0.0 && self.init_box.is_finite()) {
            return Err(Error::InvalidPlan(format!("init_box must be positive, got {}", self.init_box)));
        }
        if !(self.min_separation >= 0.0) || self.min_separation >= self.init_box {
            return Err(Error::InvalidPlan(format!(
                "min_separation must lie in [0, init_box), got {}",
                self.min_separation
            )));
        }
        if self.ell_values.is_empty() || self.theta_values_deg.is_empty() || self.rad_values.is_empty() {
            return Err(Error::InvalidPlan("all grids must be nonempty".into()));
        }
        for &r in &self.rad_values {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidPlan(format!("R_Ad values must be positive, got {r}")));
            }
        }
        self.sim.validate()
    }

    /// Cells in grid order: leg, then angle, then ratio.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let mut out = Vec::new();
        for &ell in &self.ell_values {
            for &th in &self.theta_values_deg {
                let mut rads = self.rad_values.clone();
                if self.include_bound_ratios {
                    let c = th.to_radians().cos();
                    rads.extend([2.0 / (1.0 - c), 2.0 / (1.0 + c), 6.0 / (1.0 + c)]);
                }
                for r_ad in rads {
                    out.push(Cell::new(ell, ell, th, r_ad)?);
                }
            }
        }
        Ok(out)
    }
}

/// One parameter combination of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub d12_star: f64,
    pub d13_star: f64,
    pub theta_deg: f64,
    pub r_ad: f64,
}

impl Cell {
    pub fn new(d12_star: f64, d13_star: f64, theta_deg: f64, r_ad: f64) -> Result<Self> {
        FormationSpec::from_degrees(d12_star, d13_star, theta_deg)?;
        if !(r_ad > 0.0 && r_ad.is_finite()) {
            return Err(Error::InvalidPlan(format!("R_Ad must be positive, got {r_ad}")));
        }
        Ok(Self { d12_star, d13_star, theta_deg, r_ad })
    }

    pub fn spec(&self) -> FormationSpec {
        FormationSpec::from_degrees(self.d12_star, self.d13_star, self.theta_deg).expect("validated cell")
    }

    pub fn gains(&self, base: &Gains) -> Gains {
        Gains::with_area_ratio(base.kd(), base.kb(), self.r_ad).expect("validated gains")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub desired: usize,
    pub moving: usize,
    pub collision: usize,
    pub undecided: usize,
}

impl Tally {
    pub fn add(&mut self, kind: OutcomeKind) {
        match kind {
            OutcomeKind::DesiredEquilibrium => self.desired += 1,
            OutcomeKind::MovingConfiguration => self.moving += 1,
            OutcomeKind::Collision => self.collision += 1,
            OutcomeKind::Undecided => self.undecided += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.desired + self.moving + self.collision + self.undecided
    }

    pub fn moving_fraction(&self) -> f64 {
        self.moving as f64 / self.total().max(1) as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub cell_index: usize,
    pub seed_index: usize,
    pub outcome: OutcomeKind,
    pub final_error: f64,
    pub steady_velocity: Vec2,
    pub final_signed_area: f64,
    pub t_end: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: Cell,
    pub tally: Tally,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<CellResult>,
    /// Ordered by cell, then seed index.
    pub records: Vec<RunRecord>,
}

/// Initial configuration of run `seed_index`.
pub fn sample_initial(seed: u64, seed_index: usize, init_box: f64, min_separation: f64) -> TeamConfiguration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ seed_index as u64);
    loop {
        let mut draw = || Vec2::new(rng.gen_range(-init_box..=init_box), rng.gen_range(-init_box..=init_box));
        let p = TeamConfiguration::new(draw(), draw(), draw());
        if p.min_pairwise_distance() >= min_separation {
            return p;
        }
    }
}

/// Runs `f` on a pool capped by `TRIO_THREADS` when it is set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok());
    match cap.filter(|&n| n > 0) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// Simulates `n_seeds` starts for every cell.
pub fn run_cells(cells: &[Cell], plan: &SweepPlan) -> Result<SweepResult> {
    plan.validate()?;
    let n = plan.n_seeds;
    let starts: Vec<TeamConfiguration> = (0..n)
        .map(|i| sample_initial(plan.seed, i, plan.init_box, plan.min_separation))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..n).map(move |i| (c, i))).collect();
    let records: Vec<RunRecord> = with_thread_cap(|| {
        jobs.par_iter()
            .map(|&(ci, si)| {
                let cell = &cells[ci];
                let spec = cell.spec();
                let gains = cell.gains(&plan.gains_base);
                let (_, out) = simulate(&starts[si], &spec, &gains, &plan.sim);
                RunRecord {
                    cell_index: ci,
                    seed_index: si,
                    outcome: out.kind,
                    final_error: out.final_error_norm,
                    steady_velocity: out.steady_velocity,
                    final_signed_area: final_signed_area(&out),
                    t_end: out.t_end,
                    steps: out.steps,
                }
            })
            .collect()
    });
    let mut tallies = vec![Tally::default(); cells.len()];
    for r in &records {
        tallies[r.cell_index].add(r.outcome);
    }
    Ok(SweepResult {
        cells: cells
            .iter()
            .zip(tallies)
            .map(|(&cell, tally)| CellResult { cell, tally })
            .collect(),
        records,
    })
}

/// Runs every isosceles cell of `plan`.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepResult> {
    plan.validate()?;
    run_cells(&plan.cells()?, plan)
}

/// Same pipeline for a single triangle with unequal sides, default gains
/// and simulation settings.
pub fn general_triangle_experiment(
    d12_star: f64,
    d13_star: f64,
    theta_deg: f64,
    rad_values: &[f64],
    n_seeds: usize,
    seed: u64,
) -> Result<SweepResult> {
    let plan = SweepPlan {
        ell_values: vec![d12_star],
        theta_values_deg: vec![theta_deg],
        rad_values: rad_values.to_vec(),
        include_bound_ratios: false,
        n_seeds,
        seed,
        ..SweepPlan::default()
    };
    run_general(&plan, d12_star, d13_star, theta_deg)
}

/// Runs `plan.rad_values` on one triangle, ignoring the plan's leg and angle grids.
pub fn run_general(plan: &SweepPlan, d12_star: f64, d13_star: f64, theta_deg: f64) -> Result<SweepResult> {
    let cells = plan
        .rad_values
        .iter()
        .map(|&r| Cell::new(d12_star, d13_star, theta_deg, r))
        .collect::<Result<Vec<_>>>()?;
    run_cells(&cells, plan)
}

impl SweepResult {
    /// CSV with header `ell,theta_deg,RAd,seed_index,outcome,final_error,steady_vx,steady_vy,t_end`.
    ///
    /// `ell` holds `d12*`; for unequal sides `d13*` is in the summary.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([
            "ell",
            "theta_deg",
            "RAd",
            "seed_index",
            "outcome",
            "final_error",
            "steady_vx",
            "steady_vy",
            "t_end",
        ])?;
        for r in &self.records {
            let cell = &self.cells[r.cell_index].cell;
            wr.write_record([
                cell.d12_star.to_string(),
                cell.theta_deg.to_string(),
                cell.r_ad.to_string(),
                r.seed_index.to_string(),
                r.outcome.as_str().to_string(),
                r.final_error.to_string(),
                r.steady_velocity.x.to_string(),
                r.steady_velocity.y.to_string(),
                r.t_end.to_string(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Warnings where the moving fraction grows with `R_Ad` at fixed shape.
    pub fn monotonicity_warnings(&self) -> Vec<String> {
        let mut groups: Vec<(Cell, Vec<&CellResult>)> = Vec::new();
        for cr in &self.cells {
            let c = cr.cell;
            match groups
                .iter_mut()
                .find(|(g, _)| g.d12_star == c.d12_star && g.d13_star == c.d13_star && g.theta_deg == c.theta_deg)
            {
                Some((_, v)) => v.push(cr),
                None => groups.push((c, vec![cr])),
            }
        }
        let mut out = Vec::new();
        for (g, mut v) in groups {
            v.sort_by(|a, b| a.cell.r_ad.total_cmp(&b.cell.r_ad));
            for w in v.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if hi.tally.moving_fraction() > lo.tally.moving_fraction() {
                    out.push(format!(
                        "moving fraction rises from {:.4} at R_Ad={} to {:.4} at R_Ad={} (d12*={}, d13*={}, theta={} deg)",
                        lo.tally.moving_fraction(),
                        lo.cell.r_ad,
                        hi.tally.moving_fraction(),
                        hi.cell.r_ad,
                        g.d12_star,
                        g.d13_star,
                        g.theta_deg
                    ));
                }
            }
        }
        out
    }

    pub fn summary(&self, plan: &SweepPlan) -> SweepSummary {
        SweepSummary {
            rng: RNG_DESCRIPTION.to_string(),
            seed: plan.seed,
            n_seeds: plan.n_seeds,
            init_box: plan.init_box,
            kd: plan.gains_base.kd(),
            kb: plan.gains_base.kb(),
            sim: plan.sim,
            cells: self
                .cells
                .iter()
                .map(|cr| {
                    let spec = cr.cell.spec();
                    CellSummary {
                        cell: cr.cell,
                        tally: cr.tally,
                        moving_fraction: cr.tally.moving_fraction(),
                        certificate: gain_certificate(&spec, &cr.cell.gains(&plan.gains_base)).ok(),
                    }
                })
                .collect(),
            warnings: self.monotonicity_warnings(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    #[serde(flatten)]
    pub cell: Cell,
    pub tally: Tally,
    pub moving_fraction: f64,
    /// Absent for unequal sides.
    pub certificate: Option<GainCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rng: String,
    pub seed: u64,
    pub n_seeds: usize,
    pub init_box: f64,
    pub kd: f64,
    pub kb: f64,
    pub sim: SimParams,
    pub cells: Vec<CellSummary>,
    pub warnings: Vec<String>,
}

/// One feasible row of the gap table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig1Row {
    pub theta_deg: f64,
    pub d_param: f64,
    pub x_bar: f64,
    pub y_bar: f64,
    pub gap: f64,
}

/// `x̄` strictly inside `(x_min, x_max)` on multiples of `step` from `x_min`.
pub fn open_range(x_min: f64, x_max: f64, step: f64) -> Vec<f64> {
    let n = ((x_max - x_min) / step).round() as usize;
    (1..n).map(|k| x_min + k as f64 * step).filter(|&x| x < x_max).collect()
}

/// Gap of the first rest equation over `θ* × 𝕕 × x̄`, feasible points only.
pub fn fig1_grid(theta_values_deg: &[f64], d_values: &[f64], x_values: &[f64]) -> Result<Vec<Fig1Row>> {
    if let Some(&d) = d_values.iter().find(|&&d| !(d > 3.0)) {
        return Err(Error::Domain(format!("d values must exceed 3, got {d}")));
    }
    let mut rows = Vec::new();
    for &th in theta_values_deg {
        for &d in d_values {
            for &x in x_values {
                match evaluate_eq18_gap(x, d, th.to_radians()) {
                    Ok(g) => rows.push(Fig1Row {
                        theta_deg: th,
                        d_param: d,
                        x_bar: g.x_bar,
                        y_bar: g.y_bar,
                        gap: g.gap,
                    }),
                    Err(Error::NotFeasible(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(rows)
}

/// Default table: the four angles, ten `𝕕` values and `x̄ ∈ (1, 30)` step 0.1.
pub fn fig1_default() -> Vec<Fig1Row> {
    fig1_grid(&FIG1_THETAS_DEG, &FIG1_D_VALUES, &open_range(1.0, 30.0, 0.1)).expect("valid default grid")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig1Minimum {
    pub theta_deg: f64,
    pub feasible: usize,
    pub min_gap: f64,
}

/// Per-angle count and minimum gap, in order of first appearance.
pub fn fig1_minima(rows: &[Fig1Row]) -> Vec<Fig1Minimum> {
    let mut out: Vec<Fig1Minimum> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|m| m.theta_deg == r.theta_deg) {
            Some(m) => {
                m.feasible += 1;
                m.min_gap = m.min_gap.min(r.gap);
            }
            None => out.push(Fig1Minimum {
                theta_deg: r.theta_deg,
                feasible: 1,
                min_gap: r.gap,
            }),
        }
    }
    out
}

/// CSV with header `theta_deg,d_param,x_bar,y_bar,gap`.
pub fn write_fig1_csv<W: Write>(rows: &[Fig1Row], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    if rows.is_empty() {
        wr.write_record(["theta_deg", "d_param", "x_bar", "y_bar", "gap"])?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_separated() {
        let a = sample_initial(7, 3, 100.0, 1.0);
        let b = sample_initial(7, 3, 100.0, 1.0);
        assert_eq!(a, b);
        assert_ne!(a, sample_initial(7, 4, 100.0, 1.0));
        for i in 0..200 {
            let p = sample_initial(1, i, 2.0, 1.0);
            assert!(p.min_pairwise_distance() >= 1.0);
            assert!(p.p.iter().all(|q| q.x.abs() <= 2.0 && q.y.abs() <= 2.0));
        }
    }

    #[test]
    fn plan_validation() {
        assert!(SweepPlan::default().validate().is_ok());
        let bad = SweepPlan { n_seeds: 0, ..SweepPlan::default() };
        assert!(bad.validate().is_err());
        let bad = SweepPlan { rad_values: vec![], ..SweepPlan::default() };
        assert!(bad.validate().is_err());
        let bad = SweepPlan { init_box: -1.0, ..SweepPlan::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn default_grid_size() {
        let cells = SweepPlan::default().cells().unwrap();
        assert_eq!(cells.len(), 3 * 7 * 15);
        assert_eq!(SweepPlan::equilateral().cells().unwrap().len(), 66);
    }

    #[test]
    fn open_range_excludes_ends() {
        let xs = open_range(1.0, 30.0, 0.1);
        assert_eq!(xs.len(), 289);
        assert!((xs[0] - 1.1).abs() < 1e-12);
        assert!((xs[288] - 29.9).abs() < 1e-9);
    }

    #[test]
    fn fig1_csv_header() {
        let rows = fig1_grid(&[45.0], &[11.0], &[5.0]).unwrap();
        let mut buf = Vec::new();
        write_fig1_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "theta_deg,d_param,x_bar,y_bar,gap");
        assert_eq!(text.lines().count(), 2);
    }
}
