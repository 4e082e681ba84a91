//! Executes a scenario: numeric evolution, verification reports, artifact
//! files, and the exit-status contract (0 pass, 1 threshold fail,
//! 2 divergence, 3 I/O or configuration error).

use std::fs;
use std::io::Write;
use std::path::Path;

use airy_evolve::airy::{ai_packet, AI_FIRST_EXTREMUM};
use airy_evolve::analytic::{x0, x1, AnalyticState};
use airy_evolve::numeric::evolve;
use airy_evolve::operator::classical_acceleration;
use airy_evolve::verify::{locate_peak, peak_trajectory, phase_check, shape_error};
use airy_evolve::{Error as CoreError, ForceProfile, WaveField};
use serde::Serialize;

use crate::jsonfmt;
use crate::scenario::{Scenario, Thresholds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_THRESHOLD: i32 = 1;
pub const EXIT_DIVERGENCE: i32 = 2;
pub const EXIT_IO_CONFIG: i32 = 3;

/// Exit status for a core error surfaced during a run.
pub fn exit_code_for(err: &CoreError) -> i32 {
    match err {
        CoreError::Divergence { .. } => EXIT_DIVERGENCE,
        _ => EXIT_IO_CONFIG,
    }
}

#[derive(Debug, Serialize)]
struct SnapshotRecord {
    t: f64,
    x_peak_numeric: Option<f64>,
    x_shift_analytic: f64,
    x0: f64,
    x1: f64,
    shape_max_dev: f64,
    shape_l2_dev: f64,
    phase_max_dev: f64,
    norm: f64,
}

#[derive(Debug, Serialize)]
struct TrajectoryRecord {
    fitted_acceleration: f64,
    fit_residual: f64,
    classical_acceleration: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ChecksRecord {
    shape_pass: bool,
    phase_pass: bool,
    peak_position_pass: bool,
    acceleration_pass: Option<bool>,
}

#[derive(Debug, Serialize)]
struct ScenarioRecord {
    force_kind: String,
    hbar: f64,
    mass: f64,
    b: f64,
    f_b: f64,
    grid_n: usize,
    grid_x_min: f64,
    grid_x_max: f64,
    scheme: String,
    dt: f64,
    t_end: f64,
    window_lo: f64,
    window_hi: f64,
    aperture_lo: f64,
    aperture_hi: f64,
    aperture_ramp: f64,
}

#[derive(Debug, Serialize)]
struct Summary {
    scenario: ScenarioRecord,
    snapshots: Vec<SnapshotRecord>,
    trajectory: Option<TrajectoryRecord>,
    thresholds: Thresholds,
    checks: ChecksRecord,
    exit_status: i32,
}

/// Runs the scenario and writes `summary.json`, `trajectory.csv` and
/// (optionally) per-snapshot field dumps into `out_dir`. Returns the exit
/// status per the contract.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path, dump_fields: bool) -> i32 {
    match run_inner(scenario, out_dir, dump_fields) {
        Ok(code) => code,
        Err(RunError::Core(e)) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
        Err(RunError::Io(e)) => {
            eprintln!("I/O error: {e}");
            EXIT_IO_CONFIG
        }
    }
}

enum RunError {
    Core(CoreError),
    Io(std::io::Error),
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        RunError::Core(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

fn run_inner(scenario: &Scenario, out_dir: &Path, dump_fields: bool) -> Result<i32, RunError> {
    fs::create_dir_all(out_dir)?;

    let constants = &scenario.constants;
    let force = &scenario.force;
    let grid = &scenario.grid;
    let initial = ai_packet(constants.b(), 0.0, grid)?;
    let snapshots = evolve(
        &initial,
        constants,
        force,
        &scenario.scheme,
        &scenario.aperture,
        scenario.t_end,
        &scenario.snapshot_times,
    )?;

    let window = scenario.trusted_window;
    let b = constants.b();
    let mut records = Vec::with_capacity(snapshots.len());
    let mut tracking_lost = false;
    for (t, field) in &snapshots {
        let state = AnalyticState::at(constants, force, *t)?;
        let shape = shape_error(field, constants, force, *t, window)?;
        let phase = phase_check(field, constants, force, *t, window)?;
        let predicted = state.x_shift + AI_FIRST_EXTREMUM / b;
        let peak = match locate_peak(field, predicted, 5.0 / b) {
            Ok(p) => Some(p),
            Err(CoreError::TrackingLost(msg)) => {
                eprintln!("warning: t = {t}: {msg}");
                tracking_lost = true;
                None
            }
            Err(other) => return Err(other.into()),
        };
        records.push(SnapshotRecord {
            t: *t,
            x_peak_numeric: peak,
            x_shift_analytic: state.x_shift,
            x0: x0(constants, *t)?,
            x1: x1(constants, force, *t)?,
            shape_max_dev: shape.max_abs_dev,
            shape_l2_dev: shape.l2_dev,
            phase_max_dev: phase,
            norm: field.norm_l2(),
        });
    }

    let trajectory = if snapshots.len() >= 4 && !tracking_lost {
        let report = peak_trajectory(&snapshots, constants, force)?;
        let classical = match force {
            ForceProfile::Zero => Some(classical_acceleration(constants, 0.0)),
            ForceProfile::Constant { f0 } => Some(classical_acceleration(constants, *f0)),
            _ => None,
        };
        Some(TrajectoryRecord {
            fitted_acceleration: report.fitted_acceleration,
            fit_residual: report.fit_residual,
            classical_acceleration: classical,
        })
    } else {
        None
    };

    let thr = &scenario.thresholds;
    let checks = ChecksRecord {
        shape_pass: records.iter().all(|r| r.shape_max_dev <= thr.shape_max_dev),
        phase_pass: records.iter().all(|r| r.phase_max_dev <= thr.phase_max_dev),
        peak_position_pass: !tracking_lost
            && records.iter().all(|r| match r.x_peak_numeric {
                Some(p) => {
                    (p - (r.x_shift_analytic + AI_FIRST_EXTREMUM / b)).abs() <= thr.peak_position
                }
                None => false,
            }),
        acceleration_pass: trajectory.as_ref().and_then(|t| {
            t.classical_acceleration
                .map(|c| (t.fitted_acceleration - c).abs() <= thr.acceleration)
        }),
    };
    let all_pass = checks.shape_pass
        && checks.phase_pass
        && checks.peak_position_pass
        && checks.acceleration_pass.unwrap_or(true);
    let exit_status = if all_pass { EXIT_OK } else { EXIT_THRESHOLD };

    write_trajectory_csv(&out_dir.join("trajectory.csv"), &records)?;
    if dump_fields || scenario.dump_fields {
        for (idx, (t, field)) in snapshots.iter().enumerate() {
            write_field_dump(&out_dir.join(format!("field_{idx:03}.csv")), *t, field)?;
        }
    }

    let summary = Summary {
        scenario: ScenarioRecord {
            force_kind: force_kind_name(force).to_string(),
            hbar: constants.hbar(),
            mass: constants.mass(),
            b: constants.b(),
            f_b: constants.f_b(),
            grid_n: grid.n(),
            grid_x_min: grid.x_min(),
            grid_x_max: grid.x_max(),
            scheme: format!("{:?}", scenario.scheme.kind()),
            dt: scenario.scheme.dt(),
            t_end: scenario.t_end,
            window_lo: window.0,
            window_hi: window.1,
            aperture_lo: scenario.aperture.window_lo(),
            aperture_hi: scenario.aperture.window_hi(),
            aperture_ramp: scenario.aperture.ramp_width(),
        },
        snapshots: records,
        trajectory,
        thresholds: *thr,
        checks,
        exit_status,
    };
    let json = jsonfmt::to_string_pretty(&summary)?;
    fs::write(out_dir.join("summary.json"), json)?;

    Ok(exit_status)
}

fn force_kind_name(force: &ForceProfile) -> &'static str {
    match force {
        ForceProfile::Zero => "zero",
        ForceProfile::Constant { .. } => "constant",
        ForceProfile::Sinusoid { .. } => "sinusoid",
        ForceProfile::Tabulated { .. } => "tabulated",
    }
}

fn write_trajectory_csv(path: &Path, records: &[SnapshotRecord]) -> std::io::Result<()> {
    let mut out = fs::File::create(path)?;
    writeln!(
        out,
        "t, x_peak_numeric, x_shift_analytic, x0, x1, shape_max_dev, shape_l2_dev, phase_max_dev, norm"
    )?;
    for r in records {
        writeln!(
            out,
            "{}, {}, {}, {}, {}, {}, {}, {}, {}",
            jsonfmt::sig17(r.t),
            jsonfmt::sig17(r.x_peak_numeric.unwrap_or(f64::NAN)),
            jsonfmt::sig17(r.x_shift_analytic),
            jsonfmt::sig17(r.x0),
            jsonfmt::sig17(r.x1),
            jsonfmt::sig17(r.shape_max_dev),
            jsonfmt::sig17(r.shape_l2_dev),
            jsonfmt::sig17(r.phase_max_dev),
            jsonfmt::sig17(r.norm),
        )?;
    }
    Ok(())
}

fn write_field_dump(path: &Path, t: f64, field: &WaveField) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "# t = {}", jsonfmt::sig17(t))?;
    writeln!(out, "x, re, im, abs2")?;
    let grid = field.grid();
    for (i, a) in field.amplitudes().iter().enumerate() {
        writeln!(
            out,
            "{}, {}, {}, {}",
            jsonfmt::sig17(grid.x(i)),
            jsonfmt::sig17(a.re),
            jsonfmt::sig17(a.im),
            jsonfmt::sig17(a.norm_sqr()),
        )?;
    }
    Ok(())
}
