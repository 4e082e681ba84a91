//! Uniform 1D spatial grid and the complex field sampled on it.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform grid of `n` samples on `[x_min, x_max)`: `x_i = x_min + i*dx`,
/// `dx = (x_max - x_min)/n`. The right endpoint is excluded, matching the
/// periodic convention of the spectral propagator. A power-of-two `n` is
/// recommended for transform speed but not required.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<GridSpec> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Parameter("grid bounds must be finite".into()));
        }
        if x_max <= x_min {
            return Err(Error::Parameter(format!(
                "grid requires x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        if n < 16 {
            return Err(Error::Parameter(format!("grid requires n >= 16, got n = {n}")));
        }
        Ok(GridSpec { x_min, x_max, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Index of the sample nearest to `x` (clamped to the grid).
    pub fn index_near(&self, x: f64) -> usize {
        let i = ((x - self.x_min) / self.dx()).round();
        (i.max(0.0) as usize).min(self.n - 1)
    }

    /// Sample indices whose positions fall inside `[lo, hi]`.
    pub fn window_indices(&self, lo: f64, hi: f64) -> Result<std::ops::Range<usize>> {
        if !(lo < hi) {
            return Err(Error::Parameter(format!("window requires lo < hi, got [{lo}, {hi}]")));
        }
        if lo < self.x_min || hi > self.x_max - self.dx() {
            return Err(Error::Parameter(format!(
                "window [{lo}, {hi}] outside grid [{}, {}]",
                self.x_min,
                self.x_max - self.dx()
            )));
        }
        let start = ((lo - self.x_min) / self.dx()).ceil() as usize;
        let end = ((hi - self.x_min) / self.dx()).floor() as usize + 1;
        Ok(start..end.min(self.n))
    }
}

/// Complex amplitudes sampled on a [`GridSpec`].
///
/// The discrete L² norm `sum |psi_i|^2 dx` is finite but carries no
/// normalization: Airy packets are not square integrable on the line, so a
/// truncated-grid norm is an artifact of the box, not a probability.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
}

impl WaveField {
    /// Builds a field from samples, rejecting non-finite amplitudes.
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>) -> Result<WaveField> {
        if amplitudes.len() != grid.n() {
            return Err(Error::Parameter(format!(
                "amplitude count {} does not match grid n = {}",
                amplitudes.len(),
                grid.n()
            )));
        }
        let field = WaveField { grid, amplitudes };
        field.check_finite()?;
        Ok(field)
    }

    /// Samples `f(x_i)` over the grid.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64) -> Complex64) -> Result<WaveField> {
        let amplitudes = grid.points().map(&mut f).collect();
        WaveField::new(grid, amplitudes)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Mutable access to the samples. Invariants are re-checked by the
    /// propagation routines, not here; callers injecting custom initial
    /// conditions are responsible for keeping values finite.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn check_finite(&self) -> Result<()> {
        for (i, a) in self.amplitudes.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::State(format!(
                    "non-finite amplitude {a} at sample {i} (x = {})",
                    self.grid.x(i)
                )));
            }
        }
        Ok(())
    }

    /// Discrete L² norm `sqrt(sum |psi_i|^2 dx)`.
    pub fn norm_l2(&self) -> f64 {
        (self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// `|psi_i|^2` per sample.
    pub fn abs2(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(-1.0, 1.0, 16).is_ok());
        assert!(GridSpec::new(-1.0, 1.0, 15).is_err());
        assert!(GridSpec::new(1.0, 1.0, 32).is_err());
        assert!(GridSpec::new(f64::NAN, 1.0, 32).is_err());
    }

    #[test]
    fn sample_points() {
        let g = GridSpec::new(-2.0, 2.0, 16).unwrap();
        assert_eq!(g.dx(), 0.25);
        assert_eq!(g.x(0), -2.0);
        assert_eq!(g.x(8), 0.0);
        assert_eq!(g.points().count(), 16);
        assert_eq!(g.index_near(0.1), 8);
    }

    #[test]
    fn window_indices_bounds() {
        let g = GridSpec::new(-2.0, 2.0, 16).unwrap();
        let w = g.window_indices(-1.0, 1.0).unwrap();
        assert_eq!(g.x(w.start), -1.0);
        assert!(g.x(w.end - 1) <= 1.0);
        assert!(g.window_indices(-3.0, 1.0).is_err());
        assert!(g.window_indices(1.0, -1.0).is_err());
    }

    #[test]
    fn field_rejects_nan() {
        let g = GridSpec::new(-2.0, 2.0, 16).unwrap();
        let mut amps = vec![Complex64::new(1.0, 0.0); 16];
        amps[3] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(WaveField::new(g, amps), Err(Error::State(_))));
    }

    #[test]
    fn norm_of_constant_field() {
        let g = GridSpec::new(0.0, 1.0, 16).unwrap();
        let f = WaveField::from_fn(g, |_| Complex64::new(2.0, 0.0)).unwrap();
        assert!((f.norm_l2() - 2.0).abs() < 1e-14);
    }
}
