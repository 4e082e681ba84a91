//! Scenario documents: flat dotted-key text (a TOML subset), e.g.
//!
//! ```text
//! physics.hbar = 1.0
//! force.kind = "constant"
//! force.f0 = 0.5
//! grid.n = 4096
//! grid.x_min = -60
//! grid.x_max = 60
//! time.dt = 1e-3
//! time.t_end = 2.0
//! snapshots = [0.5, 1.0, 1.5, 2.0]
//! window.lo = -10
//! window.hi = 10
//! aperture.lo = -40
//! aperture.hi = 40
//! aperture.ramp = 8
//! ```
//!
//! Only `grid.*` and `time.t_end` are required; everything else has
//! documented defaults. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::PathBuf;

use airy_evolve::numeric::{Aperture, SchemeKind, StepScheme};
use airy_evolve::{ForceProfile, GridSpec, PhysicalConstants};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario is not well formed: {0}")]
    Parse(String),
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("invalid scenario: {0}")]
    Validation(String),
}

/// Pass/fail limits applied by `run`; exit status 1 when any is exceeded.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Thresholds {
    /// Peak-relative max deviation of `|psi|^2` in the trusted window.
    pub shape_max_dev: f64,
    /// Max phase deviation in radians.
    pub phase_max_dev: f64,
    /// Allowed distance between the located peak and its predicted position.
    pub peak_position: f64,
    /// Allowed mismatch between fitted and classical acceleration
    /// (checked only for zero/constant force with >= 4 snapshots).
    pub acceleration: f64,
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub constants: PhysicalConstants,
    pub force: ForceProfile,
    pub grid: GridSpec,
    pub scheme: StepScheme,
    pub aperture: Aperture,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub trusted_window: (f64, f64),
    pub thresholds: Thresholds,
    pub output_dir: Option<PathBuf>,
    pub dump_fields: bool,
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let table: toml::Table =
        toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    let mut keys = BTreeMap::new();
    flatten("", &toml::Value::Table(table), &mut keys);
    let mut doc = Doc { keys };

    // physics
    let hbar = doc.f64_or("physics.hbar", 1.0)?;
    let mass = doc.f64_or("physics.mass", 1.0)?;
    let convention = doc.string_or("physics.convention", "hbar_explicit")?;
    let constants = match convention.as_str() {
        "hbar_explicit" => {
            let b = doc.f64_or("physics.b", 1.0)?;
            PhysicalConstants::new(hbar, mass, b)
        }
        "berry_balazs_b" => {
            let big_b = doc.required_f64("physics.big_b")?;
            PhysicalConstants::berry_balazs(big_b, mass, hbar)
        }
        other => {
            return Err(ScenarioError::Validation(format!(
                "physics.convention must be \"hbar_explicit\" or \"berry_balazs_b\", got \"{other}\""
            )))
        }
    }
    .map_err(validation)?;

    // force
    let force = match doc.string_or("force.kind", "zero")?.as_str() {
        "zero" => ForceProfile::zero(),
        "constant" => ForceProfile::constant(doc.required_f64("force.f0")?).map_err(validation)?,
        "sinusoid" => {
            let f0 = doc.required_f64("force.f0")?;
            let omega = doc.required_f64("force.omega")?;
            let phi = doc.f64_or("force.phi", 0.0)?;
            ForceProfile::sinusoid(f0, omega, phi).map_err(validation)?
        }
        "tabulated" => {
            let times = doc.required_f64_array("force.times")?;
            let values = doc.required_f64_array("force.values")?;
            ForceProfile::tabulated(times, values).map_err(validation)?
        }
        other => {
            return Err(ScenarioError::Validation(format!(
                "force.kind must be one of zero/constant/sinusoid/tabulated, got \"{other}\""
            )))
        }
    };

    // grid
    let n = doc.required_f64("grid.n")?;
    if n.fract() != 0.0 || n < 0.0 {
        return Err(ScenarioError::Validation(format!(
            "grid.n must be a non-negative integer, got {n}"
        )));
    }
    let grid = GridSpec::new(
        doc.required_f64("grid.x_min")?,
        doc.required_f64("grid.x_max")?,
        n as usize,
    )
    .map_err(validation)?;

    // time stepping
    let t_end = doc.required_f64("time.t_end")?;
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(ScenarioError::Validation(format!("time.t_end must be >= 0, got {t_end}")));
    }
    let dt = doc.f64_or("time.dt", 1e-3)?;
    let kind = match doc.string_or("scheme.kind", "split_step_strang")?.as_str() {
        "split_step_strang" => SchemeKind::SplitStepStrang,
        "crank_nicolson" => SchemeKind::CrankNicolson,
        other => {
            return Err(ScenarioError::Validation(format!(
                "scheme.kind must be split_step_strang or crank_nicolson, got \"{other}\""
            )))
        }
    };
    let scheme = StepScheme::new(kind, dt).map_err(validation)?;
    if dt == 0.0 && t_end > 0.0 {
        return Err(ScenarioError::Validation("time.dt must be > 0 for a nonzero t_end".into()));
    }

    // aperture: default shrinks the grid by one sixth of its extent per side
    let margin = (grid.x_max() - grid.x_min()) / 6.0;
    let ap_lo = doc.f64_or("aperture.lo", grid.x_min() + margin)?;
    let ap_hi = doc.f64_or("aperture.hi", grid.x_max() - margin)?;
    let ap_ramp = doc.f64_or("aperture.ramp", 0.4 * margin)?;
    let aperture = Aperture::new(ap_lo, ap_hi, ap_ramp).map_err(validation)?;

    // trusted window: default is the aperture window shrunk by 3 ramp widths
    let win_lo = doc.f64_or("window.lo", ap_lo + 3.0 * ap_ramp)?;
    let win_hi = doc.f64_or("window.hi", ap_hi - 3.0 * ap_ramp)?;
    if !(win_lo < win_hi) {
        return Err(ScenarioError::Validation(format!(
            "window requires lo < hi, got [{win_lo}, {win_hi}]"
        )));
    }
    if win_lo < ap_lo || win_hi > ap_hi {
        return Err(ScenarioError::Validation(format!(
            "trusted window [{win_lo}, {win_hi}] must lie inside the aperture window [{ap_lo}, {ap_hi}]"
        )));
    }
    grid.window_indices(win_lo, win_hi).map_err(validation)?;

    // snapshots
    let snapshot_times = match doc.optional_f64_array("snapshots")? {
        Some(v) if !v.is_empty() => v,
        _ => vec![t_end],
    };
    for w in snapshot_times.windows(2) {
        if !(w[1] >= w[0]) {
            return Err(ScenarioError::Validation(format!(
                "snapshots must be sorted ascending, got {} after {}",
                w[1], w[0]
            )));
        }
    }
    if snapshot_times[0] < 0.0 || *snapshot_times.last().unwrap() > t_end {
        return Err(ScenarioError::Validation(format!(
            "snapshots must lie within [0, {t_end}]"
        )));
    }
    if force.t_max() < t_end {
        return Err(ScenarioError::Validation(format!(
            "tabulated force ends at {} but t_end is {t_end}",
            force.t_max()
        )));
    }

    let thresholds = Thresholds {
        shape_max_dev: doc.f64_or("thresholds.shape", 1e-3)?,
        phase_max_dev: doc.f64_or("thresholds.phase", 1e-2)?,
        peak_position: doc.f64_or("thresholds.peak_position", 2.0 * grid.dx())?,
        acceleration: doc.f64_or("thresholds.acceleration", 0.01)?,
    };

    let output_dir = doc.optional_string("output.dir")?.map(PathBuf::from);
    let dump_fields = doc.bool_or("output.dump_fields", false)?;

    if let Some(unknown) = doc.keys.keys().next() {
        return Err(ScenarioError::Validation(format!("unknown key `{unknown}`")));
    }

    Ok(Scenario {
        constants,
        force,
        grid,
        scheme,
        aperture,
        t_end,
        snapshot_times,
        trusted_window: (win_lo, win_hi),
        thresholds,
        output_dir,
        dump_fields,
    })
}

fn validation(e: airy_evolve::Error) -> ScenarioError {
    ScenarioError::Validation(e.to_string())
}

fn flatten(prefix: &str, value: &toml::Value, out: &mut BTreeMap<String, toml::Value>) {
    match value {
        toml::Value::Table(t) => {
            for (k, v) in t {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

/// Key-consuming view over the flattened document; leftovers are unknown keys.
struct Doc {
    keys: BTreeMap<String, toml::Value>,
}

impl Doc {
    fn take(&mut self, key: &str) -> Option<toml::Value> {
        self.keys.remove(key)
    }

    fn as_f64(key: &str, v: toml::Value) -> Result<f64, ScenarioError> {
        match v {
            toml::Value::Float(f) => Ok(f),
            toml::Value::Integer(i) => Ok(i as f64),
            other => Err(ScenarioError::Validation(format!(
                "key `{key}` must be a number, got {other}"
            ))),
        }
    }

    fn required_f64(&mut self, key: &str) -> Result<f64, ScenarioError> {
        let v = self.take(key).ok_or_else(|| ScenarioError::MissingKey(key.to_string()))?;
        Self::as_f64(key, v)
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        match self.take(key) {
            Some(v) => Self::as_f64(key, v),
            None => Ok(default),
        }
    }

    fn string_or(&mut self, key: &str, default: &str) -> Result<String, ScenarioError> {
        match self.take(key) {
            Some(toml::Value::String(s)) => Ok(s),
            Some(other) => {
                Err(ScenarioError::Validation(format!("key `{key}` must be a string, got {other}")))
            }
            None => Ok(default.to_string()),
        }
    }

    fn optional_string(&mut self, key: &str) -> Result<Option<String>, ScenarioError> {
        match self.take(key) {
            Some(toml::Value::String(s)) => Ok(Some(s)),
            Some(other) => {
                Err(ScenarioError::Validation(format!("key `{key}` must be a string, got {other}")))
            }
            None => Ok(None),
        }
    }

    fn bool_or(&mut self, key: &str, default: bool) -> Result<bool, ScenarioError> {
        match self.take(key) {
            Some(toml::Value::Boolean(b)) => Ok(b),
            Some(other) => {
                Err(ScenarioError::Validation(format!("key `{key}` must be a boolean, got {other}")))
            }
            None => Ok(default),
        }
    }

    fn f64_array(key: &str, v: toml::Value) -> Result<Vec<f64>, ScenarioError> {
        match v {
            toml::Value::Array(items) => {
                items.into_iter().map(|item| Self::as_f64(key, item)).collect()
            }
            other => Err(ScenarioError::Validation(format!(
                "key `{key}` must be an array of numbers, got {other}"
            ))),
        }
    }

    fn required_f64_array(&mut self, key: &str) -> Result<Vec<f64>, ScenarioError> {
        let v = self.take(key).ok_or_else(|| ScenarioError::MissingKey(key.to_string()))?;
        Self::f64_array(key, v)
    }

    fn optional_f64_array(&mut self, key: &str) -> Result<Option<Vec<f64>>, ScenarioError> {
        match self.take(key) {
            Some(v) => Ok(Some(Self::f64_array(key, v)?)),
            None => Ok(None),
        }
    }
}
