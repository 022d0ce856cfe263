//! The `trio` command line.
//!
//! Exit codes: 0 desired / satisfied / completed, 1 config or IO error,
//! 2 moving, 3 collision, 4 undecided, 5 gain condition violated,
//! 6 formation not isosceles.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    cubic_f_roots, gain_certificate, search_equilibrium_zeros, search_moving_zeros, solve_reduced_cubic_positive,
    threshold_distance, Clause, GainCertificate, SearchBox, SearchOptions, SearchSummary,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::geometry::TeamConfiguration;
use crate::simulate::{predicted_moving_velocity, simulate, Outcome, OutcomeKind};
use crate::sweep::{fig1_grid, fig1_minima, open_range, run_general, run_sweep, write_fig1_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MOVING: i32 = 2;
pub const EXIT_COLLISION: i32 = 3;
pub const EXIT_UNDECIDED: i32 = 4;
pub const EXIT_VIOLATED: i32 = 5;
pub const EXIT_NOT_ISOSCELES: i32 = 6;

#[derive(Parser, Debug)]
#[command(name = "trio", version, about = "Three-robot distance, bearing and signed-area formation control")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// JSON config; defaults apply to missing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Iso,
    Fig1,
    General,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate one trajectory and classify its limit.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Batch simulations or the gap table.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "iso")]
        mode: Mode,
        #[arg(long)]
        n_seeds: Option<usize>,
    },
    /// Gain certificate plus root report and nonexistence searches.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Positive roots of y³ + c y + d, or of z³ - ℓ² z + R_bd.
    Cubic {
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        ell: Option<f64>,
        #[arg(long)]
        r_bd: Option<f64>,
    },
    /// Gain certificate for the configured isosceles formation.
    Gains {
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    std::io::Write::write_all(&mut w, b"\n")?;
    Ok(())
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Simulate { common } => cmd_simulate(&common),
        Command::Sweep { common, mode, n_seeds } => cmd_sweep(&common, mode, n_seeds),
        Command::Analyze { common } => cmd_analyze(&common),
        Command::Cubic { c, d, ell, r_bd } => cmd_cubic(c, d, ell, r_bd),
        Command::Gains { common } => cmd_gains(&common),
    }
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    outcome: OutcomeKind,
    exit_code: i32,
    initial_config: TeamConfiguration,
    predicted_moving_velocity: [f64; 2],
    signed_area: f64,
    #[serde(flatten)]
    detail: &'a Outcome,
}

pub fn outcome_exit_code(kind: OutcomeKind) -> i32 {
    match kind {
        OutcomeKind::DesiredEquilibrium => EXIT_OK,
        OutcomeKind::MovingConfiguration => EXIT_MOVING,
        OutcomeKind::Collision => EXIT_COLLISION,
        OutcomeKind::Undecided => EXIT_UNDECIDED,
    }
}

fn cmd_simulate(common: &Common) -> Result<i32> {
    let cfg = load(common)?;
    let spec = cfg.spec()?;
    let gains = cfg.gains()?;
    let params = cfg.sim_params();
    params.validate()?;
    let p0 = cfg.initial_configuration();
    let (traj, out) = simulate(&p0, &spec, &gains, &params);
    traj.write_csv(create(&common.out, "trajectory.csv")?)?;
    let w = predicted_moving_velocity(&spec, &gains);
    let code = outcome_exit_code(out.kind);
    write_json(
        &common.out,
        "outcome.json",
        &SimulateReport {
            outcome: out.kind,
            exit_code: code,
            initial_config: p0,
            predicted_moving_velocity: [w.x, w.y],
            signed_area: crate::simulate::final_signed_area(&out),
            detail: &out,
        },
    )?;
    println!("{}", out.kind);
    Ok(code)
}

fn cmd_sweep(common: &Common, mode: Mode, n_seeds: Option<usize>) -> Result<i32> {
    let mut cfg = load(common)?;
    if let Some(n) = n_seeds {
        cfg.n_seeds = n;
    }
    match mode {
        Mode::Fig1 => {
            if cfg.fig1_x_step <= 0.0 || cfg.fig1_x_max <= cfg.fig1_x_min {
                return Err(Error::Config("fig1 x range must be increasing with a positive step".into()));
            }
            let xs = open_range(cfg.fig1_x_min, cfg.fig1_x_max, cfg.fig1_x_step);
            let rows = fig1_grid(&cfg.fig1_theta_values_deg, &cfg.fig1_d_values, &xs)?;
            write_fig1_csv(&rows, create(&common.out, "fig1.csv")?)?;
            let minima = fig1_minima(&rows);
            write_json(&common.out, "fig1_summary.json", &minima)?;
            for m in &minima {
                println!("theta {} deg: {} feasible, min gap {:.6e}", m.theta_deg, m.feasible, m.min_gap);
            }
        }
        Mode::Iso | Mode::General => {
            let mut plan = cfg.sweep_plan()?;
            plan.validate()?;
            let result = if mode == Mode::Iso {
                run_sweep(&plan)?
            } else {
                plan.rad_values = cfg.general_rad_values();
                run_general(&plan, cfg.d12_star_len, cfg.d13_star_len, cfg.theta_star_deg)?
            };
            result.write_csv(create(&common.out, "sweep.csv")?)?;
            let summary = result.summary(&plan);
            write_json(&common.out, "summary.json", &summary)?;
            for c in &summary.cells {
                println!(
                    "d12*={} d13*={} theta={} RAd={}: desired {} moving {} collision {} undecided {}",
                    c.cell.d12_star,
                    c.cell.d13_star,
                    c.cell.theta_deg,
                    c.cell.r_ad,
                    c.tally.desired,
                    c.tally.moving,
                    c.tally.collision,
                    c.tally.undecided
                );
            }
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn certificate_or_code(cfg: &RunConfig) -> Result<std::result::Result<GainCertificate, i32>> {
    match gain_certificate(&cfg.spec()?, &cfg.gains()?) {
        Ok(c) => Ok(Ok(c)),
        Err(Error::NotIsosceles { d12, d13 }) => {
            eprintln!("error: formation is not isosceles (d12* = {d12}, d13* = {d13})");
            Ok(Err(EXIT_NOT_ISOSCELES))
        }
        Err(e) => Err(e),
    }
}

fn cmd_gains(common: &Common) -> Result<i32> {
    let cfg = load(common)?;
    let cert = match certificate_or_code(&cfg)? {
        Ok(c) => c,
        Err(code) => {
            write_json(
                &common.out,
                "gains.json",
                &serde_json::json!({ "error": "not_isosceles", "d12_star": cfg.d12_star_len, "d13_star": cfg.d13_star_len }),
            )?;
            return Ok(code);
        }
    };
    write_json(&common.out, "gains.json", &cert)?;
    println!("{}", serde_json::to_string_pretty(&cert)?);
    Ok(if cert.satisfied { EXIT_OK } else { EXIT_VIOLATED })
}

#[derive(Serialize)]
struct Bounds {
    lower: Option<f64>,
    upper: Option<f64>,
}

#[derive(Serialize)]
struct Roots {
    r1: Option<f64>,
    r2: Option<f64>,
    d_hat: f64,
}

#[derive(Serialize)]
struct SearchReport {
    cells: usize,
    zeros_found: usize,
    equilibrium: SearchSummary,
    moving: Option<SearchSummary>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    clause: Clause,
    bounds: Bounds,
    satisfied: bool,
    roots: Roots,
    search_summary: SearchReport,
    certificate: GainCertificate,
}

fn cmd_analyze(common: &Common) -> Result<i32> {
    let cfg = load(common)?;
    let cert = match certificate_or_code(&cfg)? {
        Ok(c) => c,
        Err(code) => return Ok(code),
    };
    let gains = cfg.gains()?;
    let theta = cfg.spec()?.theta_star();
    let opts = SearchOptions::default();
    let f_roots = cubic_f_roots(cert.ell, gains.r_bd())?;

    let mut eq = search_equilibrium_zeros(gains.r_ad(), theta, &SearchBox::new(0.0, 5.0, 0.0, 5.0), &opts);
    eq.zeros = eq.zeros_other_than(1.0, 1.0, 1e-9);
    eq.zeros_found = eq.zeros.len();
    let mv = f_roots.map(|r| {
        search_moving_zeros(
            cert.ell,
            gains.r_bd(),
            gains.r_ad(),
            theta,
            &SearchBox::new(r.r1, r.r2, r.r1, 5.0),
            &opts,
        )
    });
    let report = AnalyzeReport {
        clause: cert.clause,
        bounds: Bounds {
            lower: cert.required_rad_lower,
            upper: cert.required_rad_upper,
        },
        satisfied: cert.satisfied,
        roots: Roots {
            r1: f_roots.map(|r| r.r1),
            r2: f_roots.map(|r| r.r2),
            d_hat: threshold_distance(gains.r_bd())?,
        },
        search_summary: SearchReport {
            cells: eq.cells + mv.as_ref().map_or(0, |m| m.cells),
            zeros_found: eq.zeros_found + mv.as_ref().map_or(0, |m| m.zeros_found),
            equilibrium: eq,
            moving: mv,
        },
        certificate: cert,
    };
    write_json(&common.out, "analyze.json", &report)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.satisfied { EXIT_OK } else { EXIT_VIOLATED })
}

fn cmd_cubic(c: Option<f64>, d: Option<f64>, ell: Option<f64>, r_bd: Option<f64>) -> Result<i32> {
    let value = match (c, d, ell, r_bd) {
        (Some(c), Some(d), None, None) => serde_json::to_value(solve_reduced_cubic_positive(c, d)?)?,
        (None, None, Some(ell), Some(r_bd)) => serde_json::json!({
            "d_hat": threshold_distance(r_bd)?,
            "roots": cubic_f_roots(ell, r_bd)?,
        }),
        _ => return Err(Error::Config("pass either --c and --d, or --ell and --r-bd".into())),
    };
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(EXIT_OK)
}
