//! Closed-form evolution of the initial Airy packet.
//!
//! The packet `Ai(b x)` evolves into `Ai(b(x - x_s(t))) e^{i phi(x,t)}` with
//! a shift `x_s = x0 + x1` and a phase linear in x. `x0` is the free-space
//! contribution `f_b t^2/(2m)`; `x1` is the force-induced contribution, the
//! running integral of the accumulated impulse `alpha(t)/m`. Phases are
//! assembled as `slope * x + offset`, keeping linearity in x structural
//! rather than a property of term cancellation.

use num_complex::Complex64;

use crate::airy::ai;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, WaveField};
use crate::physics::{segment_index, ForceProfile, PhysicalConstants};
use crate::quad;

fn check_nonnegative_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Parameter(format!(
            "negative-time evolution is out of scope, got t = {t}"
        )));
    }
    Ok(())
}

/// Free-space shift `x0(t) = f_b t^2 / (2m)`.
pub fn x0(constants: &PhysicalConstants, t: f64) -> Result<f64> {
    check_nonnegative_time(t)?;
    Ok(constants.f_b() * t * t / (2.0 * constants.mass()))
}

/// Free-space phase `phi0(x,t) = (f_b t / hbar)(x - f_b t^2/(3m))`,
/// evaluated as `slope * x + offset`.
pub fn phi0(constants: &PhysicalConstants, x: f64, t: f64) -> Result<f64> {
    let (slope, offset) = phi0_parts(constants, t)?;
    Ok(slope * x + offset)
}

fn phi0_parts(constants: &PhysicalConstants, t: f64) -> Result<(f64, f64)> {
    check_nonnegative_time(t)?;
    let slope = constants.f_b() * t / constants.hbar();
    let offset = -slope * (constants.f_b() * t * t / (3.0 * constants.mass()));
    Ok((slope, offset))
}

/// Accumulated impulse `alpha(t) = integral of F from 0 to t`.
///
/// Closed forms for the zero/constant/sinusoid kinds; exact segment-wise
/// integration of the linear interpolant for tabulated profiles.
pub fn alpha(force: &ForceProfile, t: f64) -> Result<f64> {
    check_nonnegative_time(t)?;
    Ok(match force {
        ForceProfile::Zero => 0.0,
        ForceProfile::Constant { f0 } => f0 * t,
        ForceProfile::Sinusoid { f0, omega, phi } => {
            if *omega == 0.0 {
                f0 * phi.sin() * t
            } else {
                f0 / omega * (phi.cos() - (omega * t + phi).cos())
            }
        }
        ForceProfile::Tabulated { times, values } => {
            force.value(t)?; // domain check
            tabulated_sweep(times, values, t).0
        }
    })
}

/// Force-induced shift `x1(t) = integral of alpha(tau)/m from 0 to t`.
pub fn x1(constants: &PhysicalConstants, force: &ForceProfile, t: f64) -> Result<f64> {
    check_nonnegative_time(t)?;
    let m = constants.mass();
    Ok(match force {
        ForceProfile::Zero => 0.0,
        ForceProfile::Constant { f0 } => f0 * t * t / (2.0 * m),
        ForceProfile::Sinusoid { f0, omega, phi } => {
            if *omega == 0.0 {
                f0 * phi.sin() * t * t / (2.0 * m)
            } else {
                f0 / (m * omega) * (phi.cos() * t - ((omega * t + phi).sin() - phi.sin()) / omega)
            }
        }
        ForceProfile::Tabulated { times, values } => {
            force.value(t)?;
            tabulated_sweep(times, values, t).1 / m
        }
    })
}

/// The equivalent weighted form `x1(t) = (1/m) integral of F(tau)(t - tau)`:
/// an independent algebraic route to the same shift, kept for cross-checks.
pub fn x1_weighted(constants: &PhysicalConstants, force: &ForceProfile, t: f64) -> Result<f64> {
    check_nonnegative_time(t)?;
    let m = constants.mass();
    Ok(match force {
        ForceProfile::Zero => 0.0,
        ForceProfile::Constant { f0 } => f0 * (t * t - t * t / 2.0) / m,
        ForceProfile::Sinusoid { f0, omega, phi } => {
            if *omega == 0.0 {
                f0 * phi.sin() * (t * t - t * t / 2.0) / m
            } else {
                // t*I1 - I2 with I1 = int sin(w tau + phi), I2 = int tau sin(w tau + phi)
                let i1 = (phi.cos() - (omega * t + phi).cos()) / omega;
                let i2 = ((omega * t + phi).sin() - phi.sin()) / (omega * omega)
                    - t * (omega * t + phi).cos() / omega;
                f0 * (t * i1 - i2) / m
            }
        }
        ForceProfile::Tabulated { times, values } => {
            force.value(t)?;
            // F linear and (t - tau) linear per segment: Simpson is exact
            let mut total = 0.0;
            for (i, w) in times.windows(2).enumerate() {
                if w[0] >= t {
                    break;
                }
                let (a, b) = (w[0], w[1].min(t));
                let interp = |tau: f64| {
                    let w01 = (tau - w[0]) / (w[1] - w[0]);
                    values[i] + w01 * (values[i + 1] - values[i])
                };
                let g = |tau: f64| interp(tau) * (t - tau);
                total += (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
            }
            total / m
        }
    })
}

/// `integral of alpha(tau)^2/(2m)`: the x-independent phase accumulated by
/// the impulse (up to a factor 1/hbar). Exact for zero/constant/sinusoid;
/// adaptive quadrature for tabulated profiles.
pub fn alpha_sq_integral(
    constants: &PhysicalConstants,
    force: &ForceProfile,
    t: f64,
) -> Result<f64> {
    let m = constants.mass();
    Ok(match force {
        ForceProfile::Zero => 0.0,
        ForceProfile::Constant { f0 } => f0 * f0 * t * t * t / (6.0 * m),
        ForceProfile::Sinusoid { f0, omega, phi } => {
            if *omega == 0.0 {
                let f = f0 * phi.sin();
                f * f * t * t * t / (6.0 * m)
            } else {
                // alpha = A (cos phi - cos(w tau + phi)), A = f0/w
                let a = f0 / omega;
                let end = omega * t + phi;
                let int_cos = (end.sin() - phi.sin()) / omega;
                let int_cos2 = 0.5 * t + ((2.0 * end).sin() - (2.0 * phi).sin()) / (4.0 * omega);
                a * a * (phi.cos() * phi.cos() * t - 2.0 * phi.cos() * int_cos + int_cos2)
                    / (2.0 * m)
            }
        }
        ForceProfile::Tabulated { times, values } => {
            force.value(t)?;
            let integrand = |tau: f64| {
                let a = tabulated_sweep(times, values, tau).0;
                a * a / (2.0 * m)
            };
            quad::integrate(integrand, 0.0, t, 1e-12)
        }
    })
}

/// `(alpha(t), integral of alpha over [0, t])` for a tabulated profile,
/// accumulated exactly over the piecewise-quadratic impulse.
fn tabulated_sweep(times: &[f64], values: &[f64], t: f64) -> (f64, f64) {
    let last = segment_index(times, t);
    let mut alpha_knot = 0.0;
    let mut integral = 0.0;
    for i in 0..=last {
        let u = (t.min(times[i + 1])) - times[i];
        if u <= 0.0 {
            break;
        }
        let dt = times[i + 1] - times[i];
        let slope = (values[i + 1] - values[i]) / dt;
        integral += alpha_knot * u + values[i] * u * u / 2.0 + slope * u * u * u / 6.0;
        alpha_knot += values[i] * u + slope * u * u / 2.0;
    }
    (alpha_knot, integral)
}

/// Closed-form state of the packet at time `t`: total shift and the
/// coefficients of the phase, which is linear in x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticState {
    pub t: f64,
    /// Total envelope shift `x_s(t) = x0(t) + x1(t)`.
    pub x_shift: f64,
    /// Coefficient of x in the phase: `(f_b t + alpha(t)) / hbar`.
    pub phase_slope: f64,
    /// x-independent part of the phase.
    pub phase_offset: f64,
}

impl AnalyticState {
    pub fn at(constants: &PhysicalConstants, force: &ForceProfile, t: f64) -> Result<AnalyticState> {
        let (slope0, offset0) = phi0_parts(constants, t)?;
        let a = alpha(force, t)?;
        let shift1 = x1(constants, force, t)?;
        let phase_slope = slope0 + a / constants.hbar();
        let phase_offset =
            offset0 - slope0 * shift1 - alpha_sq_integral(constants, force, t)? / constants.hbar();
        Ok(AnalyticState {
            t,
            x_shift: x0(constants, t)? + shift1,
            phase_slope,
            phase_offset,
        })
    }

    pub fn phase(&self, x: f64) -> f64 {
        self.phase_slope * x + self.phase_offset
    }
}

/// Total phase `phi(x,t) = phi0 - (f_b t/hbar) x1 + alpha x/hbar
/// - (1/hbar) integral of alpha^2/(2m)`.
pub fn total_phase(
    constants: &PhysicalConstants,
    force: &ForceProfile,
    x: f64,
    t: f64,
) -> Result<f64> {
    Ok(AnalyticState::at(constants, force, t)?.phase(x))
}

/// Samples the closed-form wavefunction
/// `Ai(b(x - x0(t) - x1(t))) e^{i phi(x,t)}` on the grid. With zero force
/// this is the free-space result; at `t = 0` it reduces to the initial
/// packet `Ai(b x)`.
pub fn analytic_field(
    constants: &PhysicalConstants,
    force: &ForceProfile,
    grid: &GridSpec,
    t: f64,
) -> Result<WaveField> {
    if !(constants.b() > 0.0) {
        return Err(Error::Parameter("analytic_field requires b > 0".into()));
    }
    let state = AnalyticState::at(constants, force, t)?;
    let b = constants.b();
    let amplitudes = grid
        .points()
        .map(|x| {
            let envelope = ai(b * (x - state.x_shift))?;
            let (sin, cos) = state.phase(x).sin_cos();
            Ok(Complex64::new(envelope * cos, envelope * sin))
        })
        .collect::<Result<Vec<_>>>()?;
    WaveField::new(*grid, amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::{ai_packet, AI_FIRST_EXTREMUM};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn unit_constants() -> PhysicalConstants {
        PhysicalConstants::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn x0_values() {
        let c = unit_constants();
        assert_eq!(x0(&c, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(x0(&c, 2.0).unwrap(), 1.0, epsilon = 1e-15);
        let heavy = PhysicalConstants::new(1.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(x0(&heavy, 2.0).unwrap(), 0.25, epsilon = 1e-15);
        assert!(x0(&c, -0.5).is_err());
    }

    #[test]
    fn phi0_values_two_routes() {
        let c = unit_constants();
        assert_eq!(phi0(&c, 3.7, 0.0).unwrap(), 0.0);
        // product form
        let direct = -1.0 / 12.0;
        assert_abs_diff_eq!(phi0(&c, 0.0, 1.0).unwrap(), direct, epsilon = 1e-14);
        // sum form: f_b t x/hbar + f_b^2 t^3/(6 m hbar) - E_b t/hbar with
        // E_b = f_b * x0(t)
        let (fb, t, x) = (c.f_b(), 1.0, 0.0);
        let e_b = fb * x0(&c, t).unwrap();
        let sum_form = fb * t * x + fb * fb * t * t * t / 6.0 - e_b * t;
        assert_abs_diff_eq!(phi0(&c, x, t).unwrap(), sum_form, epsilon = 1e-14);
        // root of the product form
        let root = c.f_b() * 1.0 / 3.0;
        assert_abs_diff_eq!(phi0(&c, root, 1.0).unwrap(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn alpha_closed_forms() {
        assert_eq!(alpha(&ForceProfile::zero(), 5.0).unwrap(), 0.0);
        let c2 = ForceProfile::constant(2.0).unwrap();
        assert_abs_diff_eq!(alpha(&c2, 3.0).unwrap(), 6.0, epsilon = 1e-14);
        let s = ForceProfile::sinusoid(1.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(alpha(&s, PI).unwrap(), 2.0, epsilon = 1e-14);
        // quadrature oracle (adaptive Simpson, independent of quad module)
        let oracle = simpson_oracle(|tau| tau.sin(), 0.0, 2.1, 1e-13);
        assert_abs_diff_eq!(alpha(&s, 2.1).unwrap(), oracle, epsilon = 1e-11);
    }

    #[test]
    fn x1_closed_forms() {
        let c = unit_constants();
        assert_eq!(x1(&c, &ForceProfile::zero(), 7.0).unwrap(), 0.0);
        let f1 = ForceProfile::constant(1.0).unwrap();
        assert_abs_diff_eq!(x1(&c, &f1, 2.0).unwrap(), 2.0, epsilon = 1e-14);
        let s = ForceProfile::sinusoid(1.0, 1.0, 0.0).unwrap();
        // t - sin t
        assert_abs_diff_eq!(x1(&c, &s, PI).unwrap(), PI, epsilon = 1e-10);
        let t = 1.7;
        let quad_route = simpson_oracle(|tau| 1.0 - tau.cos(), 0.0, t, 1e-13);
        assert_abs_diff_eq!(x1(&c, &s, t).unwrap(), quad_route, epsilon = 1e-11);
    }

    #[test]
    fn x1_routes_agree_for_tabulated() {
        let c = PhysicalConstants::new(1.0, 1.3, 1.0).unwrap();
        let f = ForceProfile::tabulated(
            vec![0.0, 0.4, 1.1, 2.0, 3.5],
            vec![0.2, -0.7, 1.5, 0.3, -0.4],
        )
        .unwrap();
        for &t in &[0.3, 0.4, 0.9, 2.0, 3.2, 3.5] {
            let a = x1(&c, &f, t).unwrap();
            let b = x1_weighted(&c, &f, t).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-14);
            // independent quadrature oracle on route B
            let oracle =
                simpson_oracle(|tau| f.value(tau).unwrap() * (t - tau) / c.mass(), 0.0, t, 1e-12);
            assert_abs_diff_eq!(a, oracle, epsilon = 1e-9);
        }
    }

    #[test]
    fn total_phase_values() {
        let c = unit_constants();
        // zero force: reduces to phi0 exactly
        for &(x, t) in &[(0.0, 0.0), (1.3, 0.7), (-4.0, 2.0)] {
            assert_eq!(
                total_phase(&c, &ForceProfile::zero(), x, t).unwrap(),
                phi0(&c, x, t).unwrap()
            );
        }
        // any force, t = 0
        let s = ForceProfile::sinusoid(0.8, 2.0, 0.3).unwrap();
        assert_eq!(total_phase(&c, &s, 2.2, 0.0).unwrap(), 0.0);
        // constant force spot value: -1/12 - 1/4 - 1/6 = -1/2
        let f1 = ForceProfile::constant(1.0).unwrap();
        assert_abs_diff_eq!(total_phase(&c, &f1, 0.0, 1.0).unwrap(), -0.5, epsilon = 1e-13);
    }

    #[test]
    fn phase_is_exactly_linear_in_x() {
        let c = unit_constants();
        let s = ForceProfile::sinusoid(1.1, 0.9, 0.2).unwrap();
        let t = 1.37;
        let state = AnalyticState::at(&c, &s, t).unwrap();
        assert_abs_diff_eq!(
            state.phase_slope,
            (c.f_b() * t + alpha(&s, t).unwrap()) / c.hbar(),
            epsilon = 1e-14
        );
        for &(x1p, x2p) in &[(0.1, 4.4), (-3.0, 2.0), (-8.5, -8.0)] {
            let p2 = total_phase(&c, &s, x2p, t).unwrap();
            let p1 = total_phase(&c, &s, x1p, t).unwrap();
            let expected = state.phase_slope * (x2p - x1p);
            let scale = p1.abs().max(p2.abs()).max(1.0);
            assert!(
                ((p2 - p1) - expected).abs() <= 1e-13 * scale,
                "linearity violated: {} vs {}",
                p2 - p1,
                expected
            );
        }
    }

    #[test]
    fn field_at_zero_time_is_initial_packet() {
        let c = unit_constants();
        let grid = GridSpec::new(-20.0, 10.0, 512).unwrap();
        let s = ForceProfile::sinusoid(0.5, 1.0, 0.0).unwrap();
        let field = analytic_field(&c, &s, &grid, 0.0).unwrap();
        let packet = ai_packet(1.0, 0.0, &grid).unwrap();
        assert_eq!(field, packet);
    }

    #[test]
    fn field_envelope_peaks_at_shifted_extremum() {
        let c = unit_constants();
        let grid = GridSpec::new(-20.0, 8.0, 4096).unwrap();
        let field = analytic_field(&c, &ForceProfile::zero(), &grid, 2.0).unwrap();
        let abs2 = field.abs2();
        let peak =
            (0..grid.n()).max_by(|&i, &j| abs2[i].partial_cmp(&abs2[j]).unwrap()).unwrap();
        let expected = AI_FIRST_EXTREMUM + 1.0; // x0(2) = 1
        assert!((grid.x(peak) - expected).abs() <= grid.dx());
    }

    #[test]
    fn cancellation_force_freezes_shift() {
        let c = unit_constants();
        let cancel = ForceProfile::constant(-c.f_b()).unwrap();
        for &t in &[0.5, 1.0, 2.0, 3.7] {
            let state = AnalyticState::at(&c, &cancel, t).unwrap();
            assert_eq!(state.x_shift, 0.0);
        }
    }

    #[test]
    fn trajectory_second_derivative_matches_classical_acceleration() {
        let c = unit_constants();
        let s = ForceProfile::sinusoid(1.0, 1.0, 0.0).unwrap();
        let h = 1e-3;
        let shift = |t: f64| {
            x0(&c, t).unwrap() + x1(&c, &s, t).unwrap()
        };
        for &t in &[0.5, 1.0, 1.8, 2.9] {
            let acc = (shift(t + h) - 2.0 * shift(t) + shift(t - h)) / (h * h);
            let classical = (c.f_b() + s.value(t).unwrap()) / c.mass();
            assert_abs_diff_eq!(acc, classical, epsilon = 1e-6);
        }
    }

    #[test]
    fn state_at_zero_time_is_trivial() {
        let c = unit_constants();
        for force in [
            ForceProfile::zero(),
            ForceProfile::constant(0.7).unwrap(),
            ForceProfile::sinusoid(1.0, 2.0, 0.3).unwrap(),
            ForceProfile::tabulated(vec![0.0, 1.0], vec![0.5, -0.5]).unwrap(),
        ] {
            let state = AnalyticState::at(&c, &force, 0.0).unwrap();
            assert_eq!(state.x_shift, 0.0);
            assert_eq!(state.phase_slope, 0.0);
            assert_eq!(state.phase_offset, 0.0);
        }
    }

    #[test]
    fn forced_factors_compose_from_impulse_integrals() {
        // with a constant force the four factor exponents built from
        // alpha / x1 / the alpha^2 integral reduce to their closed forms
        use crate::operator::{free_hamiltonian, OperatorExpr};
        use num_complex::Complex64;

        let c = unit_constants();
        let (hbar, m) = (c.hbar(), c.mass());
        let f0 = 0.8;
        let force = ForceProfile::constant(f0).unwrap();
        let t = 1.3;
        let i = Complex64::new(0.0, 1.0);

        let composed = [
            OperatorExpr::x(hbar).scale(i * alpha(&force, t).unwrap() / hbar),
            OperatorExpr::identity(hbar)
                .scale(-i * alpha_sq_integral(&c, &force, t).unwrap() / hbar),
            OperatorExpr::p(hbar).scale(-i * x1(&c, &force, t).unwrap() / hbar),
            free_hamiltonian(&c).scale(-i * t / hbar),
        ];
        let direct = [
            OperatorExpr::x(hbar).scale(i * f0 * t / hbar),
            OperatorExpr::identity(hbar).scale(-i * f0 * f0 * t * t * t / (6.0 * m * hbar)),
            OperatorExpr::p(hbar).scale(-i * f0 * t * t / (2.0 * m * hbar)),
            free_hamiltonian(&c).scale(-i * t / hbar),
        ];
        for (k, (a, b)) in composed.iter().zip(&direct).enumerate() {
            let dist = a.max_coeff_distance(b);
            assert!(dist <= 1e-12, "factor {} differs by {dist}", k + 1);
        }
    }

    #[test]
    fn berry_balazs_convention_equivalence() {
        let hbar = 0.7;
        let explicit =
            PhysicalConstants::new(hbar, 1.0, hbar.powf(-2.0 / 3.0)).unwrap();
        let bb = PhysicalConstants::berry_balazs(1.0, 1.0, hbar).unwrap();
        let s = ForceProfile::sinusoid(0.6, 1.3, 0.1).unwrap();
        for &t in &[0.3, 1.0, 2.4] {
            assert_abs_diff_eq!(
                x0(&explicit, t).unwrap(),
                x0(&bb, t).unwrap(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                x1(&explicit, &s, t).unwrap(),
                x1(&bb, &s, t).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn tabulated_domain_errors_propagate() {
        let c = unit_constants();
        let f = ForceProfile::tabulated(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert!(alpha(&f, 1.5).is_err());
        assert!(x1(&c, &f, 1.5).is_err());
        assert!(total_phase(&c, &f, 0.0, 1.5).is_err());
        assert!(alpha(&f, -0.1).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(128))]

        /// The running-impulse form and the weighted-force form of the shift
        /// agree on arbitrary tabulated profiles, and both start at zero.
        #[test]
        fn x1_route_equivalence_random_tabulated(
            steps in proptest::collection::vec((0.05..1.5f64, -2.0..2.0f64), 2..8),
            first in -2.0..2.0f64,
            frac in 0.05..1.0f64,
            mass in 0.3..3.0f64,
        ) {
            let mut times = vec![0.0];
            let mut values = vec![first];
            for &(dt, v) in &steps {
                times.push(times.last().unwrap() + dt);
                values.push(v);
            }
            let force = ForceProfile::tabulated(times.clone(), values).unwrap();
            let constants = PhysicalConstants::new(1.0, mass, 1.0).unwrap();
            let t = frac * times.last().unwrap();

            proptest::prop_assert_eq!(alpha(&force, 0.0).unwrap(), 0.0);
            proptest::prop_assert_eq!(x1(&constants, &force, 0.0).unwrap(), 0.0);

            let a = x1(&constants, &force, t).unwrap();
            let b = x1_weighted(&constants, &force, t).unwrap();
            let scale = a.abs().max(b.abs()).max(1e-6);
            proptest::prop_assert!(
                (a - b).abs() <= 1e-9 * scale,
                "routes disagree: {} vs {}", a, b
            );
        }

        /// The total phase is linear in x with slope (f_b t + alpha)/hbar.
        #[test]
        fn phase_linearity_random_points(
            xa in -20.0..20.0f64,
            xb in -20.0..20.0f64,
            t in 0.0..4.0f64,
            f0 in -1.5..1.5f64,
        ) {
            let c = PhysicalConstants::new(1.0, 1.0, 1.0).unwrap();
            let force = ForceProfile::sinusoid(f0, 1.3, 0.4).unwrap();
            let state = AnalyticState::at(&c, &force, t).unwrap();
            let pa = total_phase(&c, &force, xa, t).unwrap();
            let pb = total_phase(&c, &force, xb, t).unwrap();
            let expected = state.phase_slope * (xb - xa);
            let scale = pa.abs().max(pb.abs()).max(1.0);
            proptest::prop_assert!(((pb - pa) - expected).abs() <= 1e-12 * scale);
            let slope_ref = (c.f_b() * t + alpha(&force, t).unwrap()) / c.hbar();
            proptest::prop_assert!((state.phase_slope - slope_ref).abs() <= 1e-13 * slope_ref.abs().max(1.0));
        }
    }

    /// Adaptive Simpson oracle, independent of the production quadrature.
    fn simpson_oracle(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, tol: f64) -> f64 {
        fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn recurse(
            f: impl Fn(f64) -> f64 + Copy,
            a: f64,
            b: f64,
            whole: f64,
            tol: f64,
            depth: usize,
        ) -> f64 {
            let c = 0.5 * (a + b);
            let left = simpson(f, a, c);
            let right = simpson(f, c, b);
            if depth > 30 || (left + right - whole).abs() < 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            recurse(f, a, c, left, tol / 2.0, depth + 1)
                + recurse(f, c, b, right, tol / 2.0, depth + 1)
        }
        if a == b {
            return 0.0;
        }
        recurse(f, a, b, simpson(f, a, b), tol, 0)
    }
}
