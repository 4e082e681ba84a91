//! Quantitative comparison of numeric evolution against the closed forms:
//! envelope shape invariance, peak trajectory and acceleration extraction,
//! phase deviation, and the Airy-Hamiltonian eigenrelation residual.

use crate::airy::{ai, ai_packet, AI_FIRST_EXTREMUM};
use crate::analytic::AnalyticState;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, WaveField};
use crate::physics::{ForceProfile, PhysicalConstants};

/// Windowed deviation of `|psi|^2` from the shifted analytic envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeReport {
    pub t: f64,
    /// Max pointwise deviation of `|psi|^2`, relative to the analytic peak.
    pub max_abs_dev: f64,
    /// Window-restricted relative L2 deviation of `|psi|^2`.
    pub l2_dev: f64,
    pub window: (f64, f64),
}

/// Peak positions over time with a quadratic least-squares trajectory fit.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryReport {
    pub times: Vec<f64>,
    pub peak_positions: Vec<f64>,
    pub fitted_acceleration: f64,
    /// RMS residual of the quadratic fit.
    pub fit_residual: f64,
}

/// Compares `|numeric|^2` against `Ai^2(b(x - x_s(t)))` inside `window`,
/// normalized by the analytic peak over the window.
pub fn shape_error(
    numeric: &WaveField,
    constants: &PhysicalConstants,
    force: &ForceProfile,
    t: f64,
    window: (f64, f64),
) -> Result<ShapeReport> {
    let grid = numeric.grid();
    let idx = grid.window_indices(window.0, window.1)?;
    let state = AnalyticState::at(constants, force, t)?;
    let b = constants.b();

    let mut peak = 0.0_f64;
    let mut max_dev = 0.0_f64;
    let mut dev_sq = 0.0_f64;
    let mut env_sq = 0.0_f64;
    for i in idx {
        let envelope = ai(b * (grid.x(i) - state.x_shift))?;
        let reference = envelope * envelope;
        let measured = numeric.amplitudes()[i].norm_sqr();
        peak = peak.max(reference);
        let dev = (measured - reference).abs();
        max_dev = max_dev.max(dev);
        dev_sq += dev * dev;
        env_sq += reference * reference;
    }
    if peak == 0.0 || env_sq == 0.0 {
        return Err(Error::DegenerateWindow(format!(
            "analytic envelope vanishes on window [{}, {}]",
            window.0, window.1
        )));
    }
    Ok(ShapeReport {
        t,
        max_abs_dev: max_dev / peak,
        l2_dev: (dev_sq / env_sq).sqrt(),
        window,
    })
}

/// Max absolute deviation (radians) between the numeric phase and the phase
/// of the analytic field (the linear-in-x law, with the sign of the
/// oscillating envelope folded in), over window samples where the analytic
/// envelope is at least 1e-3 of its window peak. One global phase constant
/// is removed by an intensity-weighted circular mean before taking the max.
pub fn phase_check(
    numeric: &WaveField,
    constants: &PhysicalConstants,
    force: &ForceProfile,
    t: f64,
    window: (f64, f64),
) -> Result<f64> {
    let grid = numeric.grid();
    let idx = grid.window_indices(window.0, window.1)?;
    let state = AnalyticState::at(constants, force, t)?;
    let b = constants.b();

    let mut envelopes = Vec::with_capacity(idx.len());
    let mut peak = 0.0_f64;
    for i in idx.clone() {
        let envelope = ai(b * (grid.x(i) - state.x_shift))?;
        peak = peak.max(envelope.abs());
        envelopes.push(envelope);
    }
    if peak == 0.0 {
        return Err(Error::DegenerateWindow("analytic envelope vanishes on window".into()));
    }

    // residual rotations psi_i * conj(analytic phasor); the envelope sign is
    // part of the phasor (Ai oscillates through zero), weight by intensity
    let mut mean = num_complex::Complex64::new(0.0, 0.0);
    let mut qualifying = Vec::new();
    for (i, envelope) in idx.zip(envelopes) {
        if envelope.abs() < 1e-3 * peak {
            continue;
        }
        let rot = numeric.amplitudes()[i]
            * num_complex::Complex64::from_polar(envelope.signum(), -state.phase(grid.x(i)));
        qualifying.push(rot);
        mean += rot * numeric.amplitudes()[i].norm();
    }
    if qualifying.is_empty() {
        return Err(Error::DegenerateWindow(
            "no samples with analytic envelope >= 1e-3 of peak in window".into(),
        ));
    }
    let global = mean.arg();
    let mut max_dev = 0.0_f64;
    for rot in qualifying {
        let mut d = rot.arg() - global;
        // wrap to (-pi, pi]
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d <= -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        max_dev = max_dev.max(d.abs());
    }
    Ok(max_dev)
}

/// Locates the global maximum of `|psi|^2` within `+-search_halfwidth` of
/// `predicted`, refined to sub-grid accuracy by 3-point parabolic
/// interpolation. Errors if the maximum sits on the search-window edge.
pub fn locate_peak(field: &WaveField, predicted: f64, search_halfwidth: f64) -> Result<f64> {
    let grid = field.grid();
    let lo = (predicted - search_halfwidth).max(grid.x_min());
    let hi = (predicted + search_halfwidth).min(grid.x_max() - grid.dx());
    let idx = grid.window_indices(lo, hi)?;
    let (start, end) = (idx.start, idx.end);
    let abs2 = field.abs2();
    let best = idx
        .max_by(|&i, &j| abs2[i].partial_cmp(&abs2[j]).unwrap())
        .expect("non-empty window");
    if best == start || best + 1 == end {
        return Err(Error::TrackingLost(format!(
            "peak at search-window edge near x = {} (predicted {predicted})",
            grid.x(best)
        )));
    }
    let (ym, y0, yp) = (abs2[best - 1], abs2[best], abs2[best + 1]);
    let denom = ym - 2.0 * y0 + yp;
    let shift = if denom == 0.0 { 0.0 } else { 0.5 * (ym - yp) / denom };
    Ok(grid.x(best) + shift * grid.dx())
}

/// Tracks the envelope peak across snapshots near its analytically
/// predicted position (search window `+-5/b`) and fits
/// `x(t) = x(0) + v t + a t^2/2` by least squares.
pub fn peak_trajectory(
    snapshots: &[(f64, WaveField)],
    constants: &PhysicalConstants,
    force: &ForceProfile,
) -> Result<TrajectoryReport> {
    if snapshots.len() < 4 {
        return Err(Error::Parameter(format!(
            "trajectory fit needs at least 4 snapshots, got {}",
            snapshots.len()
        )));
    }
    let b = constants.b();
    if !(b > 0.0) {
        return Err(Error::Parameter("peak tracking requires b > 0".into()));
    }
    let mut times = Vec::with_capacity(snapshots.len());
    let mut peaks = Vec::with_capacity(snapshots.len());
    for (t, field) in snapshots {
        let state = AnalyticState::at(constants, force, *t)?;
        let predicted = state.x_shift + AI_FIRST_EXTREMUM / b;
        peaks.push(locate_peak(field, predicted, 5.0 / b)?);
        times.push(*t);
    }
    let (accel, residual) = quadratic_fit(&times, &peaks);
    Ok(TrajectoryReport {
        times,
        peak_positions: peaks,
        fitted_acceleration: accel,
        fit_residual: residual,
    })
}

/// Least-squares fit of `y = c0 + c1 t + (a/2) t^2`; returns `(a, rms residual)`.
fn quadratic_fit(ts: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = ts.len();
    // normal equations for the basis {1, t, t^2/2}
    let mut m = [[0.0_f64; 3]; 3];
    let mut rhs = [0.0_f64; 3];
    for (&t, &y) in ts.iter().zip(ys) {
        let basis = [1.0, t, 0.5 * t * t];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += basis[r] * basis[c];
            }
            rhs[r] += basis[r] * y;
        }
    }
    let coeffs = solve3(m, rhs);
    let mut ss = 0.0;
    for (&t, &y) in ts.iter().zip(ys) {
        let fit = coeffs[0] + coeffs[1] * t + 0.5 * coeffs[2] * t * t;
        ss += (y - fit) * (y - fit);
    }
    (coeffs[2], (ss / n as f64).sqrt())
}

#[allow(clippy::needless_range_loop)]
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    // Gaussian elimination with partial pivoting on a 3x3 system
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for c in col..3 {
                m[row][c] -= f * m[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for c in row + 1..3 {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// Residual of the eigenrelation `(p^2/2m + f_b x) psi = f_b x_shift psi`
/// for `psi = Ai(b(x - x_shift))`, with the kinetic term applied via the
/// 5-point (4th-order) finite-difference stencil. Norms are over `window`;
/// the result is `||H psi - E psi|| / (f_b max(|x_shift|, 1/b) ||psi||)`.
pub fn hb_eigencheck(
    constants: &PhysicalConstants,
    x_shift: f64,
    grid: &GridSpec,
    window: (f64, f64),
) -> Result<f64> {
    let b = constants.b();
    if !(b > 0.0) {
        return Err(Error::Parameter("eigenrelation check requires b > 0".into()));
    }
    let dx = grid.dx();
    if dx > 0.05 / b {
        return Err(Error::Parameter(format!(
            "grid under-resolves the packet: dx = {dx} exceeds 0.05/b = {}",
            0.05 / b
        )));
    }
    let idx = grid.window_indices(window.0, window.1)?;
    if idx.start < 2 || idx.end + 2 > grid.n() {
        return Err(Error::Parameter(
            "window must leave two samples of margin for the 5-point stencil".into(),
        ));
    }
    let psi = ai_packet(b, x_shift, grid)?;
    let values: Vec<f64> = psi.amplitudes().iter().map(|a| a.re).collect();

    let f_b = constants.f_b();
    let kinetic = -constants.hbar() * constants.hbar() / (2.0 * constants.mass());
    let energy = f_b * x_shift;
    let inv12dx2 = 1.0 / (12.0 * dx * dx);

    let mut res_sq = 0.0;
    let mut psi_sq = 0.0;
    for i in idx {
        let second = (-values[i - 2] + 16.0 * values[i - 1] - 30.0 * values[i]
            + 16.0 * values[i + 1]
            - values[i + 2])
            * inv12dx2;
        let h_psi = kinetic * second + f_b * grid.x(i) * values[i];
        let r = h_psi - energy * values[i];
        res_sq += r * r;
        psi_sq += values[i] * values[i];
    }
    let denom = f_b * x_shift.abs().max(1.0 / b) * psi_sq.sqrt();
    if denom == 0.0 {
        return Err(Error::DegenerateWindow("packet vanishes on window".into()));
    }
    Ok(res_sq.sqrt() / denom)
}
