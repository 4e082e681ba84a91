//! Physical constants, unit conventions and time-dependent force profiles.

use crate::error::{Error, Result};

/// How the Airy scale parameter was specified.
///
/// `HbarExplicit` takes `b` directly. `BerryBalazsB` takes the parameter `B`
/// of the Berry–Balazs scaling and maps it as `b = B * hbar^(-2/3)`, which
/// makes the characteristic force come out as `B^3/(2m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    HbarExplicit,
    BerryBalazsB,
}

/// `hbar`, mass and the Airy scale `b`, plus the convention used to fix `b`.
///
/// The characteristic force `f_b = b^3 hbar^2 / (2m)` is always recomputed
/// from the stored fields, never cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    mass: f64,
    b: f64,
    convention: Convention,
}

impl PhysicalConstants {
    /// Constants with `b` given explicitly. `b = 0` is allowed as the
    /// degenerate no-packet case (`f_b = 0`); packet construction rejects it
    /// separately.
    pub fn new(hbar: f64, mass: f64, b: f64) -> Result<PhysicalConstants> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::Parameter(format!("hbar must be positive and finite, got {hbar}")));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Parameter(format!("mass must be positive and finite, got {mass}")));
        }
        if !(b >= 0.0) || !b.is_finite() {
            return Err(Error::Parameter(format!("b must be non-negative and finite, got {b}")));
        }
        Ok(PhysicalConstants { hbar, mass, b, convention: Convention::HbarExplicit })
    }

    /// Constants in the Berry–Balazs scaling: `b = big_b * hbar^(-2/3)`.
    pub fn berry_balazs(big_b: f64, mass: f64, hbar: f64) -> Result<PhysicalConstants> {
        let mut c = PhysicalConstants::new(hbar, mass, big_b * hbar.powf(-2.0 / 3.0))?;
        c.convention = Convention::BerryBalazsB;
        Ok(c)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Characteristic force `f_b = b^3 hbar^2 / (2m)` tying the Airy scale to
    /// the Hamiltonian.
    pub fn f_b(&self) -> f64 {
        self.b.powi(3) * self.hbar * self.hbar / (2.0 * self.mass)
    }

    /// The Berry–Balazs parameter `B = b * hbar^(2/3)` equivalent to these
    /// constants.
    pub fn big_b(&self) -> f64 {
        self.b * self.hbar.powf(2.0 / 3.0)
    }
}

/// Time-dependent homogeneous force `F(t)`, as a tagged family.
///
/// Every profile satisfies `alpha(0) = 0` (accumulated impulse starts at
/// zero). Tabulated profiles interpolate linearly between samples, which
/// keeps the impulse piecewise quadratic and the induced shift piecewise
/// cubic — both exactly integrable segment by segment.
#[derive(Debug, Clone, PartialEq)]
pub enum ForceProfile {
    Zero,
    Constant { f0: f64 },
    Sinusoid { f0: f64, omega: f64, phi: f64 },
    Tabulated { times: Vec<f64>, values: Vec<f64> },
}

impl ForceProfile {
    pub fn zero() -> ForceProfile {
        ForceProfile::Zero
    }

    pub fn constant(f0: f64) -> Result<ForceProfile> {
        if !f0.is_finite() {
            return Err(Error::Parameter(format!("constant force must be finite, got {f0}")));
        }
        Ok(ForceProfile::Constant { f0 })
    }

    pub fn sinusoid(f0: f64, omega: f64, phi: f64) -> Result<ForceProfile> {
        for (name, v) in [("f0", f0), ("omega", omega), ("phi", phi)] {
            if !v.is_finite() {
                return Err(Error::Parameter(format!("sinusoid {name} must be finite, got {v}")));
            }
        }
        Ok(ForceProfile::Sinusoid { f0, omega, phi })
    }

    /// Tabulated samples; `times` must be strictly increasing and start at 0.
    pub fn tabulated(times: Vec<f64>, values: Vec<f64>) -> Result<ForceProfile> {
        if times.len() != values.len() {
            return Err(Error::Parameter(format!(
                "tabulated force has {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::Parameter("tabulated force needs at least 2 samples".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::Parameter(format!(
                "tabulated force must start at t = 0, got {}",
                times[0]
            )));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Parameter(format!(
                    "tabulated times must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for v in &values {
            if !v.is_finite() {
                return Err(Error::Parameter(format!("tabulated force value {v} not finite")));
            }
        }
        Ok(ForceProfile::Tabulated { times, values })
    }

    /// Largest time the profile is defined for (`inf` for closed forms).
    pub fn t_max(&self) -> f64 {
        match self {
            ForceProfile::Tabulated { times, .. } => *times.last().unwrap(),
            _ => f64::INFINITY,
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Parameter(format!("time must be finite and >= 0, got {t}")));
        }
        if t > self.t_max() {
            return Err(Error::Domain(format!(
                "t = {t} outside tabulated force domain [0, {}]",
                self.t_max()
            )));
        }
        Ok(())
    }

    /// `F(t)`; linear interpolation for tabulated profiles.
    pub fn value(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(match self {
            ForceProfile::Zero => 0.0,
            ForceProfile::Constant { f0 } => *f0,
            ForceProfile::Sinusoid { f0, omega, phi } => f0 * (omega * t + phi).sin(),
            ForceProfile::Tabulated { times, values } => {
                let seg = segment_index(times, t);
                let w = (t - times[seg]) / (times[seg + 1] - times[seg]);
                values[seg] + w * (values[seg + 1] - values[seg])
            }
        })
    }
}

/// Index of the segment `[times[i], times[i+1]]` containing `t`
/// (assumes `t` within the table span).
pub(crate) fn segment_index(times: &[f64], t: f64) -> usize {
    match times.binary_search_by(|probe| probe.partial_cmp(&t).unwrap()) {
        Ok(i) => i.min(times.len() - 2),
        Err(i) => i.saturating_sub(1).min(times.len() - 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn f_b_unit_case() {
        let c = PhysicalConstants::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(c.f_b(), 0.5);
    }

    #[test]
    fn f_b_scales_with_mass() {
        let c = PhysicalConstants::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(c.f_b(), 0.25);
    }

    #[test]
    fn degenerate_b_is_allowed() {
        let c = PhysicalConstants::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(c.f_b(), 0.0);
    }

    #[test]
    fn constructor_rejects_bad_values() {
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, 1.0, -0.5).is_err());
        assert!(PhysicalConstants::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn berry_balazs_mapping() {
        let hbar = 0.7;
        let c = PhysicalConstants::berry_balazs(1.0, 2.0, hbar).unwrap();
        assert_eq!(c.convention(), Convention::BerryBalazsB);
        assert_abs_diff_eq!(c.b(), hbar.powf(-2.0 / 3.0), epsilon = 1e-15);
        // f_b = B^3/(2m) independent of hbar
        assert_abs_diff_eq!(c.f_b(), 1.0 / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.big_b(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sinusoid_value() {
        let f = ForceProfile::sinusoid(2.0, 3.0, 0.5).unwrap();
        assert_abs_diff_eq!(f.value(1.0).unwrap(), 2.0 * (3.5f64).sin(), epsilon = 1e-15);
    }

    #[test]
    fn tabulated_validation() {
        assert!(ForceProfile::tabulated(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(ForceProfile::tabulated(vec![0.5, 1.0], vec![1.0, 2.0]).is_err());
        assert!(ForceProfile::tabulated(vec![0.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(ForceProfile::tabulated(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
        assert!(ForceProfile::tabulated(vec![0.0, 1.0], vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn tabulated_interpolation_and_domain() {
        let f = ForceProfile::tabulated(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, -2.0]).unwrap();
        assert_abs_diff_eq!(f.value(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.value(2.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.value(3.0).unwrap(), -2.0, epsilon = 1e-15);
        assert!(matches!(f.value(3.5), Err(Error::Domain(_))));
        assert!(f.value(-0.1).is_err());
    }
}
